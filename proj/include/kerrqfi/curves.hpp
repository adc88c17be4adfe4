#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kerrqfi/dephasing.hpp"
#include "kerrqfi/lossbounds.hpp"
#include "kerrqfi/states.hpp"

namespace kerrqfi {

enum class NoiseKind { loss, linear_dephasing, second_order_dephasing };
enum class OutputFormat { csv, json, gnuplot };

enum class DephasingMethod { exact_bound, asymptotic, noiseless };

std::string to_string(NoiseKind kind);
std::string to_string(DephasingMethod method);
DephasingMethod dephasing_method_from_string(const std::string& name);
OutputFormat format_from_string(const std::string& name);

/// One curve request: a log-spaced N grid, a state family, a noise model and
/// the bound methods to evaluate at each grid point.
struct CurveRequest {
    StateFamily family = StateFamily::squeezed_vacuum;
    NoiseKind noise = NoiseKind::loss;
    std::vector<Method> methods;                    // loss curves
    std::vector<DephasingMethod> dephasing_methods; // dephasing curves
    double n_min = 1.0;
    double n_max = 20.0;
    int n_steps = 40;
    double eta = 0.9;
    double strength_spread = 1.0;
    std::optional<double> n_env;
    int k_max = 30;
    int repetitions = 1;
    TruncationPolicy policy{1e-10, 4096};
};

std::vector<Method> default_loss_methods(StateFamily family);
std::vector<DephasingMethod> default_dephasing_methods();

struct LossCurveRow {
    std::string family;
    double N = 0.0;
    double eta = 0.0;
    std::string method;
    double F_upper = 0.0;
    double delta_phi_lower = 0.0;
};

struct DephasingCurveRow {
    std::string family;
    double N = 0.0;
    double strength_spread = 0.0;
    double N_E = 0.0;
    std::string method;
    double F_upper = 0.0;
    double delta_phi_lower = 0.0;
    double validity_radius = 0.0;
};

/// Log-spaced grid of n_steps points spanning [n_min, n_max].
std::vector<double> photon_number_grid(double n_min, double n_max, int n_steps);

/// Rows in deterministic order: N-major, methods in request order.
std::vector<LossCurveRow> loss_curve(const CurveRequest& request);
std::vector<DephasingCurveRow> dephasing_curve(const CurveRequest& request);

void write_csv(const std::vector<LossCurveRow>& rows, std::ostream& out);
void write_csv(const std::vector<DephasingCurveRow>& rows, std::ostream& out);
void write_json(const std::vector<LossCurveRow>& rows, std::ostream& out);
void write_json(const std::vector<DephasingCurveRow>& rows, std::ostream& out);

/// Log-log gnuplot script plotting delta_phi_lower vs N for each method,
/// reading from `csv_filename` (the CSV emitted alongside the script).
void write_gnuplot_script(const std::string& csv_filename,
                          const std::vector<std::string>& methods, int n_column,
                          int method_column, int delta_phi_column, std::ostream& out);

/// Shortest round-trip decimal rendering; "inf" for infinities.
std::string format_double(double value);

struct SummaryTableParams {
    double eta = 0.9;
    double beta = 1.0;
    double gamma = 1.0;
    double N = 10.0;
    double N_E = 1e4;
};

/// The six precision-bound cells (linear / second-order estimation against
/// photon loss and the two diffusion orders), with and without environment
/// squeezing, evaluated at the given parameters.
std::string render_summary_table(const SummaryTableParams& params);

}  // namespace kerrqfi
