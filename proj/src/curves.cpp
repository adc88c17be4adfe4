#include "kerrqfi/curves.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kerrqfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProbeState build_state(StateFamily family, double N, const TruncationPolicy& policy) {
    switch (family) {
        case StateFamily::coherent: return coherent_state(N, policy);
        case StateFamily::squeezed_vacuum: return squeezed_vacuum_state(N, policy);
        case StateFamily::fock: return fock_basis_state(static_cast<int>(std::lround(N)));
    }
    throw std::logic_error("unknown family");
}

MomentSet closed_or_state_moments(StateFamily family, double N, const ProbeState& state) {
    switch (family) {
        case StateFamily::coherent: return coherent_moments(N);
        case StateFamily::squeezed_vacuum: return gaussian_saturating_moments(N);
        case StateFamily::fock: return moments_from_state(state);
    }
    throw std::logic_error("unknown family");
}

double loss_method_F(Method method, StateFamily family, double N, const ProbeState& state,
                     const MomentSet& mom, const LossConfig& cfg) {
    switch (method) {
        case Method::lossless: return bound_lossless(mom);
        case Method::before_loss: return bound_before_loss(mom, cfg.eta);
        case Method::variational_min: return minimize_variational_qfi(state, cfg).F_min;
        case Method::analytic_general: return fmin_analytic_general(mom, cfg.eta);
        case Method::analytic_sv:
            if (family != StateFamily::squeezed_vacuum) {
                throw std::invalid_argument(
                    "analytic_sv applies to the squeezed_vacuum family only");
            }
            return fmin_analytic_sv(N, cfg.eta);
        case Method::asymptotic: return fmin_asymptotic(N, cfg.eta);
        case Method::averaged: return bound_averaged(state, cfg);
        case Method::weak_value: return bound_weak_value(state, cfg);
        case Method::linear_reference: {
            const double dphi = linear_loss_reference(N, cfg.eta);
            if (dphi == 0.0) return kInf;
            return 1.0 / (dphi * dphi);
        }
    }
    throw std::logic_error("unknown method");
}

}  // namespace

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::loss: return "loss";
        case NoiseKind::linear_dephasing: return "linear_dephasing";
        case NoiseKind::second_order_dephasing: return "second_order_dephasing";
    }
    throw std::logic_error("unknown noise kind");
}

std::string to_string(DephasingMethod method) {
    switch (method) {
        case DephasingMethod::exact_bound: return "exact_bound";
        case DephasingMethod::asymptotic: return "asymptotic";
        case DephasingMethod::noiseless: return "noiseless";
    }
    throw std::logic_error("unknown dephasing method");
}

DephasingMethod dephasing_method_from_string(const std::string& name) {
    if (name == "exact_bound") return DephasingMethod::exact_bound;
    if (name == "asymptotic") return DephasingMethod::asymptotic;
    if (name == "noiseless") return DephasingMethod::noiseless;
    throw std::invalid_argument("unknown dephasing method: " + name);
}

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "gnuplot") return OutputFormat::gnuplot;
    throw std::invalid_argument("unknown format: " + name);
}

std::vector<Method> default_loss_methods(StateFamily family) {
    const Method analytic = family == StateFamily::squeezed_vacuum ? Method::analytic_sv
                                                                   : Method::analytic_general;
    return {analytic,          Method::averaged,    Method::asymptotic,
            Method::weak_value, Method::before_loss, Method::lossless};
}

std::vector<DephasingMethod> default_dephasing_methods() {
    return {DephasingMethod::exact_bound, DephasingMethod::asymptotic,
            DephasingMethod::noiseless};
}

std::vector<double> photon_number_grid(double n_min, double n_max, int n_steps) {
    if (!(n_min > 0.0) || !(n_max >= n_min)) {
        throw std::invalid_argument("grid requires 0 < n_min <= n_max");
    }
    if (n_steps < 1) throw std::invalid_argument("grid requires at least one point");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n_steps));
    if (n_steps == 1) {
        grid.push_back(n_min);
        return grid;
    }
    const double log_ratio = std::log(n_max / n_min);
    for (int i = 0; i < n_steps; ++i) {
        grid.push_back(n_min * std::exp(log_ratio * i / (n_steps - 1)));
    }
    return grid;
}

std::vector<LossCurveRow> loss_curve(const CurveRequest& request) {
    if (request.noise != NoiseKind::loss) {
        throw std::invalid_argument("loss_curve requires noise = loss");
    }
    const std::vector<Method> methods =
        request.methods.empty() ? default_loss_methods(request.family) : request.methods;
    if (methods.empty()) throw std::invalid_argument("no methods requested");

    const bool needs_state =
        request.family == StateFamily::fock ||
        std::any_of(methods.begin(), methods.end(), [](Method m) {
            return m == Method::variational_min || m == Method::averaged ||
                   m == Method::weak_value;
        });

    const LossConfig cfg{request.eta, request.k_max};
    std::vector<LossCurveRow> rows;
    for (double N : photon_number_grid(request.n_min, request.n_max, request.n_steps)) {
        const ProbeState state = needs_state ? build_state(request.family, N, request.policy)
                                             : fock_basis_state(0);
        const MomentSet mom = closed_or_state_moments(request.family, N, state);
        for (Method method : methods) {
            const double F = loss_method_F(method, request.family, N, state, mom, cfg);
            LossCurveRow row;
            row.family = to_string(request.family);
            row.N = N;
            row.eta = request.eta;
            row.method = to_string(method);
            row.F_upper = F;
            row.delta_phi_lower =
                std::isinf(F) ? 0.0 : delta_phi_from_F(F, request.repetitions);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<DephasingCurveRow> dephasing_curve(const CurveRequest& request) {
    if (request.noise == NoiseKind::loss) {
        throw std::invalid_argument("dephasing_curve requires a dephasing noise kind");
    }
    const std::vector<DephasingMethod> methods = request.dephasing_methods.empty()
                                                     ? default_dephasing_methods()
                                                     : request.dephasing_methods;
    const bool second_order = request.noise == NoiseKind::second_order_dephasing;
    DephasingConfig cfg;
    cfg.order = second_order ? NoiseOrder::second_order : NoiseOrder::linear;
    cfg.strength_spread = request.strength_spread;
    cfg.env_excitations = request.n_env;
    const double spread = effective_spread(cfg);
    const double sqrt_m = std::sqrt(static_cast<double>(request.repetitions));

    std::vector<DephasingCurveRow> rows;
    for (double N : photon_number_grid(request.n_min, request.n_max, request.n_steps)) {
        const ProbeState state = request.family == StateFamily::fock
                                     ? build_state(request.family, N, request.policy)
                                     : fock_basis_state(0);
        const MomentSet mom = closed_or_state_moments(request.family, N, state);
        for (DephasingMethod method : methods) {
            double dphi = 0.0;
            double radius = 0.0;
            switch (method) {
                case DephasingMethod::exact_bound:
                    dphi = dephasing_bound(mom, cfg);
                    radius = second_order ? kInf : validity_radius(mom, spread);
                    break;
                case DephasingMethod::asymptotic:
                    dphi = second_order ? std::sqrt(2.0) * spread
                                        : asymptotic_dephasing(N, spread, request.family);
                    radius = second_order ? kInf : validity_radius(mom, spread);
                    break;
                case DephasingMethod::noiseless:
                    if (!(mom.var_n2 > 0.0)) {
                        throw std::invalid_argument("noiseless bound needs var_n2 > 0");
                    }
                    dphi = 0.5 / std::sqrt(mom.var_n2);
                    radius = validity_radius(mom, 0.0);
                    break;
            }
            DephasingCurveRow row;
            row.family = to_string(request.family);
            row.N = N;
            row.strength_spread = request.strength_spread;
            row.N_E = request.n_env.value_or(0.0);
            row.method = to_string(method);
            row.F_upper = dphi > 0.0 ? 1.0 / (dphi * dphi) : kInf;
            row.delta_phi_lower = dphi / sqrt_m;
            row.validity_radius = radius;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw std::runtime_error("float formatting failed");
    return std::string(buffer, ptr);
}

void write_csv(const std::vector<LossCurveRow>& rows, std::ostream& out) {
    out << "family,N,eta,method,F_upper,delta_phi_lower\n";
    for (const auto& row : rows) {
        out << row.family << ',' << format_double(row.N) << ',' << format_double(row.eta)
            << ',' << row.method << ',' << format_double(row.F_upper) << ','
            << format_double(row.delta_phi_lower) << '\n';
    }
}

void write_csv(const std::vector<DephasingCurveRow>& rows, std::ostream& out) {
    out << "family,N,strength_spread,N_E,method,F_upper,delta_phi_lower,validity_radius\n";
    for (const auto& row : rows) {
        out << row.family << ',' << format_double(row.N) << ','
            << format_double(row.strength_spread) << ',' << format_double(row.N_E) << ','
            << row.method << ',' << format_double(row.F_upper) << ','
            << format_double(row.delta_phi_lower) << ',' << format_double(row.validity_radius)
            << '\n';
    }
}

namespace {

nlohmann::ordered_json json_number(double value) {
    if (std::isinf(value)) return nullptr;
    return value;
}

}  // namespace

void write_json(const std::vector<LossCurveRow>& rows, std::ostream& out) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json item;
        item["family"] = row.family;
        item["N"] = row.N;
        item["eta"] = row.eta;
        item["method"] = row.method;
        item["F_upper"] = json_number(row.F_upper);
        item["delta_phi_lower"] = json_number(row.delta_phi_lower);
        item["diverged"] = std::isinf(row.F_upper) || std::isinf(row.delta_phi_lower);
        array.push_back(std::move(item));
    }
    out << array.dump(2) << '\n';
}

void write_json(const std::vector<DephasingCurveRow>& rows, std::ostream& out) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json item;
        item["family"] = row.family;
        item["N"] = row.N;
        item["strength_spread"] = row.strength_spread;
        item["N_E"] = row.N_E;
        item["method"] = row.method;
        item["F_upper"] = json_number(row.F_upper);
        item["delta_phi_lower"] = json_number(row.delta_phi_lower);
        item["validity_radius"] = json_number(row.validity_radius);
        item["diverged"] = std::isinf(row.F_upper) || std::isinf(row.delta_phi_lower);
        array.push_back(std::move(item));
    }
    out << array.dump(2) << '\n';
}

void write_gnuplot_script(const std::string& csv_filename,
                          const std::vector<std::string>& methods, int n_column,
                          int method_column, int delta_phi_column, std::ostream& out) {
    out << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 'N'\n"
        << "set ylabel 'delta phi lower bound'\n"
        << "set key outside\n"
        << "plot \\\n";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        out << "  '" << csv_filename << "' using (strcol(" << method_column << ") eq '"
            << methods[i] << "' ? column(" << n_column << ") : NaN):" << delta_phi_column
            << " with linespoints title '" << methods[i] << "'";
        out << (i + 1 < methods.size() ? ", \\\n" : "\n");
    }
}

std::string render_summary_table(const SummaryTableParams& p) {
    if (!(p.eta > 0.0 && p.eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
    if (!(p.N > 0.0)) throw std::invalid_argument("N must be positive");
    if (p.beta < 0.0 || p.gamma < 0.0 || p.N_E < 0.0) {
        throw std::invalid_argument("beta, gamma and N_E must be nonnegative");
    }

    const double loss_factor = std::sqrt((1.0 - p.eta) / p.eta);
    const double lin_loss = loss_factor / (2.0 * std::sqrt(p.N));
    const double so_loss =
        loss_factor / (4.0 * p.eta * std::sqrt(15.0) * std::pow(p.N, 1.5));
    const double lin_lpd = std::sqrt(2.0) * p.beta;
    const double lin_lpd_env = p.beta / (std::sqrt(2.0) * std::sqrt(p.N_E));
    const double so_lpd = p.beta / (std::sqrt(2.0) * p.N);
    const double so_lpd_env = p.beta / (2.0 * std::sqrt(2.0) * p.N * std::sqrt(p.N_E));
    const double so_spd = std::sqrt(2.0) * p.gamma;
    const double so_spd_env = p.gamma / (std::sqrt(2.0) * std::sqrt(p.N_E));

    const auto pad = [](std::string text, std::size_t width) {
        if (text.size() < width) text.append(width - text.size(), ' ');
        return text;
    };
    const auto with_env = [&](double plain, double env) {
        return format_double(plain) + " [env " + format_double(env) + "]";
    };

    std::ostringstream os;
    os << "Precision bounds (delta phi) at eta=" << format_double(p.eta)
       << " beta=" << format_double(p.beta) << " gamma=" << format_double(p.gamma)
       << " N=" << format_double(p.N) << " N_E=" << format_double(p.N_E) << "\n\n";
    os << pad("noise", 30) << pad("linear estimation", 48) << "second-order estimation\n";
    os << pad("photon loss", 30) << pad(format_double(lin_loss), 48)
       << format_double(so_loss) << '\n';
    os << pad("linear phase diffusion", 30) << pad(with_env(lin_lpd, lin_lpd_env), 48)
       << with_env(so_lpd, so_lpd_env) << " (coherent states)\n";
    os << pad("second-order phase diffusion", 30) << pad("--", 48)
       << with_env(so_spd, so_spd_env) << '\n';
    return os.str();
}

}  // namespace kerrqfi
