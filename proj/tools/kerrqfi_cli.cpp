// Command-line front end: precision-bound curves for second-order (Kerr)
// phase estimation under photon loss and phase diffusion, a summary table of
// the asymptotic bounds, and the built-in verification suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kerrqfi/curves.hpp"
#include "kerrqfi/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CurveFlags {
    std::string family = "squeezed_vacuum";
    double eta = 0.9;
    double beta_delta = 1.0;
    double gamma_delta = 1.0;
    double n_env = -1.0;
    double n_min = 1.0;
    double n_max = 20.0;
    int n_steps = 40;
    std::string methods = "all";
    int k_max = 30;
    int reps = 1;
    std::string format = "csv";
    std::string out_path;
};

void add_grid_flags(CLI::App* cmd, CurveFlags& flags) {
    cmd->add_option("--family", flags.family, "coherent | squeezed_vacuum | fock")
        ->capture_default_str();
    cmd->add_option("--n-min", flags.n_min, "smallest mean photon number")
        ->capture_default_str();
    cmd->add_option("--n-max", flags.n_max, "largest mean photon number")
        ->capture_default_str();
    cmd->add_option("--n-steps", flags.n_steps, "log-spaced grid size")->capture_default_str();
    cmd->add_option("--methods", flags.methods, "comma-separated method list, or 'all'")
        ->capture_default_str();
    cmd->add_option("--kmax", flags.k_max, "loss-count truncation for averaged/weak bounds")
        ->capture_default_str();
    cmd->add_option("--reps", flags.reps, "measurement repetitions m")->capture_default_str();
    cmd->add_option("--format", flags.format, "csv | json | gnuplot")->capture_default_str();
    cmd->add_option("--out", flags.out_path, "output path (stdout when omitted)");
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

// Writes curve rows (and the companion plot script for gnuplot format).
template <typename Row>
int emit_rows(const std::vector<Row>& rows, const CurveFlags& flags,
              const std::vector<std::string>& method_names, int n_column, int method_column,
              int delta_phi_column) {
    const kerrqfi::OutputFormat format = kerrqfi::format_from_string(flags.format);

    std::ostringstream body;
    if (format == kerrqfi::OutputFormat::json) {
        kerrqfi::write_json(rows, body);
    } else {
        kerrqfi::write_csv(rows, body);
    }

    if (flags.out_path.empty()) {
        std::cout << body.str();
        if (format == kerrqfi::OutputFormat::gnuplot) {
            std::cerr << "note: --format gnuplot writes the plot script only with --out\n";
        }
        return kExitOk;
    }

    std::ofstream file(flags.out_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open " << flags.out_path << " for writing\n";
        return kExitIo;
    }
    file << body.str();
    if (!file.good()) {
        std::cerr << "error: write to " << flags.out_path << " failed\n";
        return kExitIo;
    }
    file.close();

    if (format == kerrqfi::OutputFormat::gnuplot) {
        const std::string script_path = flags.out_path + ".gp";
        std::ofstream script(script_path, std::ios::binary);
        if (!script) {
            std::cerr << "error: cannot open " << script_path << " for writing\n";
            return kExitIo;
        }
        // Reference the CSV by its bare filename: the script sits alongside it.
        const std::size_t slash = flags.out_path.find_last_of('/');
        const std::string csv_name =
            slash == std::string::npos ? flags.out_path : flags.out_path.substr(slash + 1);
        kerrqfi::write_gnuplot_script(csv_name, method_names, n_column, method_column,
                                      delta_phi_column, script);
        if (!script.good()) {
            std::cerr << "error: write to " << script_path << " failed\n";
            return kExitIo;
        }
    }
    return kExitOk;
}

int run_loss_curve(const CurveFlags& flags) {
    kerrqfi::CurveRequest request;
    request.family = kerrqfi::family_from_string(flags.family);
    request.noise = kerrqfi::NoiseKind::loss;
    request.eta = flags.eta;
    request.n_min = flags.n_min;
    request.n_max = flags.n_max;
    request.n_steps = flags.n_steps;
    request.k_max = flags.k_max;
    request.repetitions = flags.reps;
    if (flags.methods != "all") {
        for (const std::string& name : split_csv_list(flags.methods)) {
            request.methods.push_back(kerrqfi::method_from_string(name));
        }
    }

    const auto rows = kerrqfi::loss_curve(request);
    std::vector<std::string> names;
    for (kerrqfi::Method m : request.methods.empty()
                                 ? kerrqfi::default_loss_methods(request.family)
                                 : request.methods) {
        names.push_back(kerrqfi::to_string(m));
    }
    return emit_rows(rows, flags, names, 2, 4, 6);
}

int run_dephasing_curve(const CurveFlags& flags, bool second_order_flag_used) {
    kerrqfi::CurveRequest request;
    request.family = kerrqfi::family_from_string(flags.family);
    request.noise = second_order_flag_used ? kerrqfi::NoiseKind::second_order_dephasing
                                           : kerrqfi::NoiseKind::linear_dephasing;
    request.strength_spread =
        second_order_flag_used ? flags.gamma_delta : flags.beta_delta;
    if (flags.n_env >= 0.0) request.n_env = flags.n_env;
    request.n_min = flags.n_min;
    request.n_max = flags.n_max;
    request.n_steps = flags.n_steps;
    request.repetitions = flags.reps;
    if (flags.methods != "all") {
        for (const std::string& name : split_csv_list(flags.methods)) {
            request.dephasing_methods.push_back(kerrqfi::dephasing_method_from_string(name));
        }
    }

    const auto rows = kerrqfi::dephasing_curve(request);
    std::vector<std::string> names;
    for (kerrqfi::DephasingMethod m : request.dephasing_methods.empty()
                                          ? kerrqfi::default_dephasing_methods()
                                          : request.dephasing_methods) {
        names.push_back(kerrqfi::to_string(m));
    }
    return emit_rows(rows, flags, names, 2, 5, 7);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precision bounds for noisy second-order optical phase estimation"};
    app.require_subcommand(1);

    CurveFlags loss_flags;
    CLI::App* loss_cmd = app.add_subcommand("loss-curve", "Photon-loss bound curves over N");
    loss_cmd->add_option("--eta", loss_flags.eta, "transmissivity in [0, 1]")
        ->capture_default_str();
    add_grid_flags(loss_cmd, loss_flags);

    CurveFlags deph_flags;
    bool second_order = false;
    CLI::App* deph_cmd =
        app.add_subcommand("dephasing-curve", "Phase-diffusion bound curves over N");
    deph_cmd->add_option("--beta-delta", deph_flags.beta_delta,
                         "beta * Delta for linear phase diffusion")
        ->capture_default_str();
    deph_cmd->add_option("--gamma-delta", deph_flags.gamma_delta,
                         "gamma * Delta for second-order phase diffusion");
    deph_cmd->add_flag("--second-order", second_order,
                       "use the second-order phase-diffusion bounds");
    deph_cmd->add_option("--n-env", deph_flags.n_env,
                         "environment excitations N_E (squeezes Delta)");
    add_grid_flags(deph_cmd, deph_flags);

    kerrqfi::SummaryTableParams table_params;
    CLI::App* table_cmd =
        app.add_subcommand("summary-table", "Asymptotic precision-bound summary cells");
    table_cmd->add_option("--eta", table_params.eta, "transmissivity")->capture_default_str();
    table_cmd->add_option("--beta-delta", table_params.beta,
                          "linear diffusion strength beta (Delta = 1)")
        ->capture_default_str();
    table_cmd->add_option("--gamma-delta", table_params.gamma,
                          "second-order diffusion strength gamma (Delta = 1)")
        ->capture_default_str();
    table_cmd->add_option("--n", table_params.N, "mean photon number N")->capture_default_str();
    table_cmd->add_option("--n-env", table_params.N_E, "environment excitations N_E")
        ->capture_default_str();

    std::string suite_name = "all";
    double mutate_appendix = 0.0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
    verify_cmd->add_option("--suite", suite_name, "all | loss | dephasing | oracle")
        ->capture_default_str();
    verify_cmd
        ->add_option("--mutate-appendix", mutate_appendix,
                     "test fixture: perturb one analytic-minimum constant")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (loss_cmd->parsed()) return run_loss_curve(loss_flags);
        if (deph_cmd->parsed()) {
            const bool use_second =
                second_order || deph_cmd->count("--gamma-delta") > 0;
            return run_dephasing_curve(deph_flags, use_second);
        }
        if (table_cmd->parsed()) {
            std::cout << kerrqfi::render_summary_table(table_params);
            return kExitOk;
        }
        if (verify_cmd->parsed()) {
            kerrqfi::VerifyOptions options;
            options.appendix_mutation = mutate_appendix;
            const bool ok = kerrqfi::run_verification(
                kerrqfi::suite_from_string(suite_name), std::cout, options);
            return ok ? kExitOk : kExitVerifyFailed;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kerrqfi::SingularityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
