#include "kerrqfi/verify.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "kerrqfi/dephasing.hpp"
#include "kerrqfi/lossbounds.hpp"
#include "kerrqfi/oracle.hpp"
#include "kerrqfi/states.hpp"

namespace kerrqfi {

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

CheckResult run_check(const std::string& name, const std::function<std::string()>& body) {
    try {
        std::string detail = body();
        return {name, detail.empty(), detail};
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

std::string format_point(const char* fam, double N, double eta) {
    std::ostringstream os;
    os << fam << " N=" << N << " eta=" << eta;
    return os.str();
}

// ---------------------------------------------------------------------------
// loss suite
// ---------------------------------------------------------------------------

std::vector<CheckResult> loss_checks(const VerifyOptions& options) {
    std::vector<CheckResult> results;
    const TruncationPolicy policy{1e-12, 4096};
    const double etas[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double ns[] = {0.5, 1.0, 2.0, 5.0, 10.0};

    results.push_back(run_check("states: closed-form moments match state-vector moments", [&] {
        // Deep truncation: the n^4 weighting amplifies whatever tail is cut.
        const TruncationPolicy deep{1e-19, 4096};
        for (double N : ns) {
            for (int fam = 0; fam < 2; ++fam) {
                const bool coherent = fam == 0;
                const ProbeState state = coherent ? coherent_state(N, deep)
                                                  : squeezed_vacuum_state(N, deep);
                const MomentSet closed =
                    coherent ? coherent_moments(N) : gaussian_saturating_moments(N);
                const MomentSet meas = moments_from_state(state);
                const double dim = state.dim();
                const double tol =
                    std::max(1e-6, state.tail_mass * dim * dim * dim * dim);
                const double worst = std::max(
                    {std::abs(closed.m1 - meas.m1), std::abs(closed.m2 - meas.m2),
                     std::abs(closed.m3 - meas.m3), std::abs(closed.m4 - meas.m4)});
                if (worst > tol) {
                    return format_point(coherent ? "coherent" : "sv", N, 0) +
                           ": moment deviation " + std::to_string(worst);
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("states: var_n2 equals m4 - m2^2", [&] {
        for (double N : ns) {
            for (const MomentSet& mom :
                 {coherent_moments(N), gaussian_saturating_moments(N),
                  moments_from_state(squeezed_vacuum_state(N, policy))}) {
                if (rel_diff(mom.var_n2, mom.m4 - mom.m2 * mom.m2) > 1e-10) {
                    return "identity violated at N=" + std::to_string(N);
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("states: squeezed vacuum has zero odd components", [&] {
        for (double N : {0.5, 1.0, 3.0, 10.0}) {
            const ProbeState state = squeezed_vacuum_state(N, policy);
            for (int n = 1; n < state.dim(); n += 2) {
                if (state.population(n) != 0.0) return "odd component at n=" + std::to_string(n);
            }
        }
        return std::string();
    }));

    results.push_back(run_check("states: closed-form moments monotone in N", [&] {
        double prev_c[5] = {0, 0, 0, 0, 0};
        double prev_g[5] = {0, 0, 0, 0, 0};
        for (double N = 0.0; N <= 20.0; N += 0.25) {
            const MomentSet c = coherent_moments(N);
            const MomentSet g = gaussian_saturating_moments(N);
            const double cur_c[5] = {c.m1, c.m2, c.m3, c.m4, c.var_n2};
            const double cur_g[5] = {g.m1, g.m2, g.m3, g.m4, g.var_n2};
            for (int i = 0; i < 5; ++i) {
                if (cur_c[i] < prev_c[i] || cur_g[i] < prev_g[i]) {
                    return "non-monotone component at N=" + std::to_string(N);
                }
                prev_c[i] = cur_c[i];
                prev_g[i] = cur_g[i];
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: kraus weights normalize to 1", [&] {
        for (int n : {0, 1, 5, 20, 60}) {
            for (double eta : etas) {
                double sum = 0.0;
                for (int k = 0; k <= n; ++k) sum += kraus_weight(n, k, eta);
                if (std::abs(sum - 1.0) > 1e-12) {
                    return "normalization defect at n=" + std::to_string(n);
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: minimum below probed variational points", [&] {
        for (double N : {1.0, 2.0, 5.0}) {
            for (double eta : {0.3, 0.6, 0.9}) {
                const ProbeState state = squeezed_vacuum_state(N, policy);
                const LossConfig cfg{eta, 30};
                const double fmin = minimize_variational_qfi(state, cfg).F_min;
                for (const VariationalPoint& pt :
                     {VariationalPoint{0.0, 0.0}, VariationalPoint{1.0, 1.0},
                      VariationalPoint{0.5, -1.0}, VariationalPoint{1.0, 3.0}}) {
                    if (fmin > variational_qfi(state, cfg, pt) + 1e-8) {
                        return format_point("sv", N, eta) + ": minimum above probed point";
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: minimizer matches the 101-point lambda1 scan", [&] {
        for (double N : {1.0, 4.0}) {
            for (double eta : {0.3, 0.9}) {
                const ProbeState state = squeezed_vacuum_state(N, policy);
                const LossConfig cfg{eta, 30};
                const double exact = minimize_variational_qfi(state, cfg).F_min;
                const double scanned = minimize_variational_qfi_scan(state, cfg).F_min;
                if (exact > scanned + 1e-9 || rel_diff(exact, scanned) > 1e-6) {
                    return format_point("sv", N, eta) + ": scan disagrees";
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("fmin_analytic_general equivalence", [&] {
        for (double N : ns) {
            for (double eta : {0.3, 0.6, 0.9}) {
                for (int fam = 0; fam < 2; ++fam) {
                    const ProbeState state = fam == 0 ? squeezed_vacuum_state(N, policy)
                                                      : coherent_state(N, policy);
                    const auto result = minimize_variational_qfi(state, LossConfig{eta, 30});
                    if (std::abs(result.pt.lambda1 - 1.0) > 1e-9) continue;
                    const double analytic = detail::fmin_analytic_general_impl(
                        moments_from_state(state), eta, options.appendix_mutation);
                    if (rel_diff(analytic, result.F_min) > 1e-6) {
                        return format_point(fam == 0 ? "sv" : "coherent", N, eta) +
                               ": analytic " + std::to_string(analytic) + " vs minimized " +
                               std::to_string(result.F_min);
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("fmin_analytic_sv matches general form on Gaussian moments", [&] {
        for (double N : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
            for (double eta : etas) {
                const double sv = fmin_analytic_sv(N, eta);
                const double gen = detail::fmin_analytic_general_impl(
                    gaussian_saturating_moments(N), eta, options.appendix_mutation);
                if (rel_diff(sv, gen) > 1e-10) {
                    return format_point("sv", N, eta) + ": rel diff " +
                           std::to_string(rel_diff(sv, gen));
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: fmin_analytic_sv nondecreasing in eta", [&] {
        for (double N : {0.5, 1.0, 5.0, 20.0}) {
            double prev = 0.0;
            for (double eta = 0.02; eta < 1.0; eta += 0.02) {
                const double cur = fmin_analytic_sv(N, eta);
                if (cur + 1e-12 < prev) return "decrease at N=" + std::to_string(N);
                prev = cur;
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: averaged and weak-value bounds nonnegative", [&] {
        for (double N : {1.0, 5.0}) {
            for (double eta : {0.3, 0.9}) {
                const ProbeState state = squeezed_vacuum_state(N, policy);
                const LossConfig cfg{eta, 30};
                if (bound_averaged(state, cfg) < 0.0 || bound_weak_value(state, cfg) < 0.0) {
                    return format_point("sv", N, eta) + ": negative bound";
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("loss: every bound collapses to 4 var_n2 at eta = 1", [&] {
        for (int fam = 0; fam < 2; ++fam) {
            const double N = fam == 0 ? 1.0 : 2.0;
            const ProbeState state =
                fam == 0 ? squeezed_vacuum_state(N, policy) : coherent_state(N, policy);
            const MomentSet mom = moments_from_state(state);
            const double expected = 4.0 * mom.var_n2;
            const LossConfig cfg{1.0, 30};
            const double values[] = {bound_lossless(mom),
                                     bound_before_loss(mom, 1.0),
                                     minimize_variational_qfi(state, cfg).F_min,
                                     fmin_analytic_general(mom, 1.0),
                                     bound_averaged(state, cfg),
                                     bound_weak_value(state, cfg)};
                for (double v : values) {
                    if (rel_diff(v, expected) > 1e-9) {
                        return "bound deviates at eta=1: " + std::to_string(v) + " vs " +
                               std::to_string(expected);
                    }
                }
        }
        if (rel_diff(fmin_analytic_sv(1.0, 1.0),
                     4.0 * gaussian_saturating_moments(1.0).var_n2) > 1e-9) {
            return std::string("fmin_analytic_sv deviates at eta=1");
        }
        return std::string();
    }));

    {
        // Replication finding, not a hard gate: counterexamples are logged in
        // the detail field and the check still passes.
        CheckResult replication{"loss: lambda1 = 1 replication (counterexamples logged)", true,
                                ""};
        int counterexamples = 0;
        std::ostringstream log;
        for (double N : ns) {
            for (double eta : {0.3, 0.6, 0.9}) {
                for (int fam = 0; fam < 2; ++fam) {
                    const ProbeState state = fam == 0 ? squeezed_vacuum_state(N, policy)
                                                      : coherent_state(N, policy);
                    const auto result = minimize_variational_qfi(state, LossConfig{eta, 30});
                    if (std::abs(result.pt.lambda1 - 1.0) > 1e-6) {
                        ++counterexamples;
                        log << " [" << format_point(fam == 0 ? "sv" : "coherent", N, eta)
                            << " lambda1=" << result.pt.lambda1 << "]";
                    }
                }
            }
        }
        if (counterexamples > 0) {
            std::ostringstream os;
            os << counterexamples << " counterexample(s) logged:" << log.str();
            replication.detail = os.str();
        }
        results.push_back(std::move(replication));
    }

    return results;
}

// ---------------------------------------------------------------------------
// dephasing suite
// ---------------------------------------------------------------------------

std::vector<CheckResult> dephasing_checks(const VerifyOptions&) {
    std::vector<CheckResult> results;
    const TruncationPolicy policy{1e-12, 1024};

    results.push_back(run_check("dephasing: diagonal preserved, coherences damped monotonically", [&] {
        const ProbeState state = coherent_state(2.0, policy);
        Eigen::MatrixXd prev_offdiag;
        for (double bd : {0.0, 0.2, 0.5, 1.0, 2.0}) {
            const Eigen::MatrixXcd rho = apply_linear_dephasing(state, 0.4, bd);
            for (int n = 0; n < state.dim(); ++n) {
                if (std::abs(rho(n, n).real() - state.population(n)) > 1e-14 ||
                    std::abs(rho(n, n).imag()) > 1e-14) {
                    return std::string("diagonal changed");
                }
            }
            Eigen::MatrixXd magnitudes = rho.cwiseAbs();
            if (prev_offdiag.size() > 0) {
                for (int n = 0; n < state.dim(); ++n) {
                    for (int m = 0; m < state.dim(); ++m) {
                        if (n != m && magnitudes(n, m) > prev_offdiag(n, m) + 1e-15) {
                            return std::string("off-diagonal grew with beta at (") +
                                   std::to_string(n) + "," + std::to_string(m) + ")";
                        }
                    }
                }
            }
            prev_offdiag = std::move(magnitudes);
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: exact QFI below the variational bound", [&] {
        for (int fam = 0; fam < 2; ++fam) {
            for (double N : {1.0, 2.0, 5.0}) {
                const ProbeState state = fam == 0 ? coherent_state(N, policy)
                                                  : squeezed_vacuum_state(N, policy);
                const MomentSet mom = moments_from_state(state);
                for (double bd : {0.1, 0.5, 1.0}) {
                    const double exact = qfi_exact_dephasing(state, bd);
                    const double bound = bound_linear_dephasing(mom, bd);
                    if (exact > 1.0 / (bound * bound) + 1e-8) {
                        return format_point(fam == 0 ? "coherent" : "sv", N, bd) +
                               ": exact QFI exceeds bound";
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: bound increasing in beta, nonincreasing in N", [&] {
        for (int fam = 0; fam < 2; ++fam) {
            double prev = 0.0;
            for (double bd = 0.0; bd <= 2.0; bd += 0.1) {
                const MomentSet mom =
                    fam == 0 ? coherent_moments(3.0) : gaussian_saturating_moments(3.0);
                const double cur = bound_linear_dephasing(mom, bd);
                if (cur < prev - 1e-15) return std::string("bound decreased in beta");
                prev = cur;
            }
            double prev_n = 1e300;
            for (double N = 0.5; N <= 40.0; N *= 2.0) {
                const MomentSet mom =
                    fam == 0 ? coherent_moments(N) : gaussian_saturating_moments(N);
                const double cur = bound_linear_dephasing(mom, 0.7);
                if (cur > prev_n + 1e-15) return std::string("bound increased in N");
                prev_n = cur;
            }
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: asymptotic bound scales exactly as 1/N", [&] {
        const double base_g = asymptotic_dephasing(1.0, 0.8, StateFamily::squeezed_vacuum);
        const double base_c = asymptotic_dephasing(1.0, 0.8, StateFamily::coherent);
        for (double N : {2.0, 10.0, 1e3, 1e6}) {
            if (rel_diff(N * asymptotic_dephasing(N, 0.8, StateFamily::squeezed_vacuum),
                         base_g) > 1e-12 ||
                rel_diff(N * asymptotic_dephasing(N, 0.8, StateFamily::coherent), base_c) >
                    1e-12) {
                return std::string("N * asymptote not constant");
            }
        }
        if (rel_diff(base_g / base_c, 1.0 / std::sqrt(3.0)) > 1e-14) {
            return std::string("gaussian/coherent ratio is not 1/sqrt(3)");
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: full bound converges to the asymptote", [&] {
        const double N = 1e4;
        const double bd = 1.3;
        const double gauss = N * bound_linear_dephasing(gaussian_saturating_moments(N), bd);
        const double coh = N * bound_linear_dephasing(coherent_moments(N), bd);
        if (rel_diff(gauss, bd / std::sqrt(6.0)) > 0.01) return std::string("gaussian limit off");
        if (rel_diff(coh, bd / std::sqrt(2.0)) > 0.01) return std::string("coherent limit off");
        return std::string();
    }));

    results.push_back(run_check("dephasing: variational minimum reproduces the bound", [&] {
        for (double N : {1.0, 3.0}) {
            for (double bd : {0.2, 1.0}) {
                const MomentSet mom = gaussian_saturating_moments(N);
                const double lam = lambda_min(mom, bd);
                if (!(lam >= 0.0 && lam < 1.0)) return std::string("lambda_min out of [0, 1)");
                const double F = variational_qfi_dephasing(mom, bd, lam);
                const double bound = bound_linear_dephasing(mom, bd);
                if (rel_diff(F, 1.0 / (bound * bound)) > 1e-10) {
                    return std::string("quadratic-minimum identity violated");
                }
                const double h = 1e-6;
                const double deriv = (variational_qfi_dephasing(mom, bd, lam + h) -
                                      variational_qfi_dephasing(mom, bd, lam - h)) /
                                     (2.0 * h);
                if (std::abs(deriv) / std::max(F, 1.0) > 1e-6) {
                    return std::string("lambda_min is not stationary");
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: environment squeezing map", [&] {
        if (env_squeezing_delta(0.0) != 1.0) return std::string("Delta(0) != 1");
        if (rel_diff(env_squeezing_delta(0.5625), 0.5) > 1e-12) {
            return std::string("Delta(0.5625) != 0.5");
        }
        if (rel_diff(env_squeezing_delta(1e4), 1.0 / (2.0 * 100.0)) > 1e-4) {
            return std::string("large-N_E asymptote off");
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: second-order asymptote sqrt(2) gamma Delta", [&] {
        const MomentSet mom = gaussian_saturating_moments(1e4);  // var_n2 ~ 1e18
        if (rel_diff(bound_second_order_dephasing(mom, 1.0), std::sqrt(2.0)) > 0.01) {
            return std::string("large-variance asymptote off");
        }
        const auto env = bound_with_environment(10.0, 1e4, 1.0, StateFamily::squeezed_vacuum,
                                                NoiseOrder::second_order);
        if (rel_diff(env.delta_phi_asymptotic, 1.0 / (std::sqrt(2.0) * 100.0)) > 0.01) {
            return std::string("environment asymptote off");
        }
        return std::string();
    }));

    results.push_back(run_check("dephasing: validity radius formula", [&] {
        const MomentSet mom = gaussian_saturating_moments(1.0);
        if (rel_diff(validity_radius(mom, 1.0), 2.0 + 5.0 / 352.0) > 1e-12) {
            return std::string("radius formula off");
        }
        if (validity_radius(mom, 100.0) < 2.0 * 100.0 * 100.0) {
            return std::string("radius must grow as 2 (beta Delta)^2");
        }
        return std::string();
    }));

    return results;
}

// ---------------------------------------------------------------------------
// oracle suite
// ---------------------------------------------------------------------------

std::vector<CheckResult> oracle_checks(const VerifyOptions&) {
    std::vector<CheckResult> results;
    const TruncationPolicy policy{1e-10, 256};

    const auto grid_states = [&] {
        std::vector<std::pair<std::string, ProbeState>> states;
        for (double N : {1.0, 2.0, 3.0}) {
            states.emplace_back("coherent " + std::to_string(N), coherent_state(N, policy));
            states.emplace_back("sv " + std::to_string(N), squeezed_vacuum_state(N, policy));
        }
        states.emplace_back("fock 1", fock_basis_state(1));
        states.emplace_back("fock 2", fock_basis_state(2));
        return states;
    };

    results.push_back(run_check("oracle: purification QFI dominates exact QFI", [&] {
        for (const auto& [label, state] : grid_states()) {
            for (double eta : {0.3, 0.6, 0.9}) {
                const LossConfig cfg{eta, 30};
                for (double l1 : {0.0, 0.5, 1.0}) {
                    double exact_worst = 0.0;
                    for (double phi : {0.0, 0.1, 0.5}) {
                        const DensityMatrix rho = apply_loss_channel(state, phi, eta, l1);
                        const Eigen::MatrixXcd drho = channel_derivative(state, phi, eta, l1);
                        exact_worst =
                            std::max(exact_worst, qfi_exact(rho, drho, state.tail_mass));
                    }
                    for (double l2 : {-1.0, 0.0, 1.0, 2.0}) {
                        const double upper =
                            variational_qfi(state, cfg, VariationalPoint{l1, l2});
                        if (exact_worst > upper + 1e-8) {
                            return label + ": dominance violated at eta=" +
                                   std::to_string(eta) + " l1=" + std::to_string(l1) +
                                   " l2=" + std::to_string(l2);
                        }
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: QFI invariant in phi at lambda1 = 1 and for dephasing", [&] {
        const ProbeState state = squeezed_vacuum_state(1.5, policy);
        double reference = -1.0;
        for (double phi : {0.0, 0.1, 0.5}) {
            const DensityMatrix rho = apply_loss_channel(state, phi, 0.6, 1.0);
            const Eigen::MatrixXcd drho = channel_derivative(state, phi, 0.6, 1.0);
            const double F = qfi_exact(rho, drho, state.tail_mass);
            if (reference < 0.0) reference = F;
            if (rel_diff(F, reference) > 1e-8) return std::string("loss family varies in phi");
        }
        const ProbeState coh = coherent_state(2.0, policy);
        const double base = qfi_exact_dephasing(coh, 0.5);
        for (double phi : {0.1, 0.5}) {
            DensityMatrix rho{apply_linear_dephasing(coh, phi, 0.5)};
            Eigen::MatrixXcd drho(rho.dim(), rho.dim());
            for (int n = 0; n < rho.dim(); ++n) {
                for (int m = 0; m < rho.dim(); ++m) {
                    const double gen = static_cast<double>(n) * n - static_cast<double>(m) * m;
                    drho(n, m) = std::complex<double>(0.0, -gen) * rho.elements(n, m);
                }
            }
            if (rel_diff(qfi_exact(rho, drho, coh.tail_mass), base) > 1e-8) {
                return std::string("dephasing family varies in phi");
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: analytic derivative matches finite differences", [&] {
        const double h = 1e-5;
        std::vector<std::pair<std::string, ProbeState>> states;
        states.emplace_back("fock 1", fock_basis_state(1));
        states.emplace_back("fock 2", fock_basis_state(2));
        for (double N : {1.0, 2.0, 3.0}) {
            states.emplace_back("coherent " + std::to_string(N), coherent_state(N, policy));
        }
        states.emplace_back("sv 0.5", squeezed_vacuum_state(0.5, policy));
        for (const auto& [label, state] : states) {
            for (double eta : {0.3, 0.6, 0.9}) {
                for (double l1 : {0.0, 0.5, 1.0}) {
                    for (double phi : {0.0, 0.3}) {
                        const Eigen::MatrixXcd analytic =
                            channel_derivative(state, phi, eta, l1);
                        const Eigen::MatrixXcd fd =
                            (apply_loss_channel(state, phi + h, eta, l1).elements -
                             apply_loss_channel(state, phi - h, eta, l1).elements) /
                            (2.0 * h);
                        const double worst = (analytic - fd).cwiseAbs().maxCoeff();
                        if (worst > 1e-6) {
                            return label + ": max element error " + std::to_string(worst);
                        }
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: channel preserves trace up to truncation leakage", [&] {
        for (const auto& [label, state] : grid_states()) {
            for (double eta : {0.3, 0.9}) {
                for (double phi : {0.0, 0.4}) {
                    const DensityMatrix rho = apply_loss_channel(state, phi, eta, 1.0);
                    const double deficit = 1.0 - rho.elements.trace().real();
                    if (deficit > state.tail_mass + 1e-10 || deficit < -1e-10) {
                        return label + ": trace deficit " + std::to_string(deficit);
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: Kraus channel matches beam-splitter construction", [&] {
        for (const auto& [label, state] : grid_states()) {
            for (double eta : {0.3, 0.6, 0.9}) {
                const DensityMatrix kraus = apply_loss_channel(state, 0.0, eta, 0.0);
                const DensityMatrix bs = loss_channel_beam_splitter(state, eta);
                const double worst = (kraus.elements - bs.elements).cwiseAbs().maxCoeff();
                if (worst > 1e-10) {
                    return label + ": constructions disagree by " + std::to_string(worst);
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: purification QFI equals the variational sums", [&] {
        for (const auto& [label, state] : grid_states()) {
            for (double eta : {0.3, 0.9}) {
                for (const VariationalPoint& pt :
                     {VariationalPoint{1.0, 1.0}, VariationalPoint{0.5, -0.5},
                      VariationalPoint{0.0, 0.0}}) {
                    const KrausFamily family =
                        make_loss_kraus_family(state.dim(), eta, 0.2, pt);
                    const double matrix_route = qfi_purification(family, state);
                    const double sum_route =
                        variational_qfi(state, LossConfig{eta, 30}, pt);
                    if (std::abs(matrix_route - sum_route) >
                        1e-8 * std::max(1.0, std::abs(sum_route))) {
                        return label + ": purification route deviates";
                    }
                }
            }
        }
        return std::string();
    }));

    results.push_back(run_check("oracle: pure-state identities", [&] {
        if (qfi_pure(fock_basis_state(3)) != 0.0) return std::string("fock QFI nonzero");
        const ProbeState coh = coherent_state(1.0, policy);
        const DensityMatrix rho = apply_loss_channel(coh, 0.3, 1.0, 1.0);
        const Eigen::MatrixXcd drho = channel_derivative(coh, 0.3, 1.0, 1.0);
        if (rel_diff(qfi_exact(rho, drho, coh.tail_mass), 44.0) > 1e-6) {
            return std::string("lossless coherent(1) QFI differs from 44");
        }
        const ProbeState small = coherent_state(1.5, TruncationPolicy{1e-10, 32});
        const KrausFamily trivial = make_dephasing_kraus_family(small.dim(), 0.4, 0.0);
        if (rel_diff(qfi_purification(trivial, small), qfi_pure(small)) > 1e-8) {
            return std::string("trivial dephasing purification deviates from 4 var_n2");
        }
        return std::string();
    }));

    return results;
}

}  // namespace

VerifySuite suite_from_string(const std::string& name) {
    if (name == "all") return VerifySuite::all;
    if (name == "loss") return VerifySuite::loss;
    if (name == "dephasing") return VerifySuite::dephasing;
    if (name == "oracle") return VerifySuite::oracle;
    throw std::invalid_argument("unknown suite: " + name);
}

std::vector<CheckResult> run_loss_suite(const VerifyOptions& options) {
    return loss_checks(options);
}
std::vector<CheckResult> run_dephasing_suite(const VerifyOptions& options) {
    return dephasing_checks(options);
}
std::vector<CheckResult> run_oracle_suite(const VerifyOptions& options) {
    return oracle_checks(options);
}

bool run_verification(VerifySuite suite, std::ostream& out, const VerifyOptions& options) {
    std::vector<CheckResult> results;
    const auto append = [&](std::vector<CheckResult> more) {
        results.insert(results.end(), std::make_move_iterator(more.begin()),
                       std::make_move_iterator(more.end()));
    };
    if (suite == VerifySuite::all || suite == VerifySuite::loss) append(run_loss_suite(options));
    if (suite == VerifySuite::all || suite == VerifySuite::dephasing) {
        append(run_dephasing_suite(options));
    }
    if (suite == VerifySuite::all || suite == VerifySuite::oracle) {
        append(run_oracle_suite(options));
    }

    bool all_passed = true;
    for (const CheckResult& result : results) {
        out << (result.passed ? "[PASS] " : "[FAIL] ") << result.name;
        if (!result.detail.empty()) out << ": " << result.detail;
        out << "\n";
        all_passed = all_passed && result.passed;
    }
    return all_passed;
}

}  // namespace kerrqfi
