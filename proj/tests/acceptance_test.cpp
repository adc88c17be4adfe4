// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and pins its own tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kerrqfi/curves.hpp"
#include "kerrqfi/dephasing.hpp"
#include "kerrqfi/lossbounds.hpp"
#include "kerrqfi/oracle.hpp"
#include "kerrqfi/states.hpp"

using namespace kerrqfi;

namespace {

int g_failures = 0;

double rel(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void criterion(int index, const std::string& name, double time_budget_s,
               const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty() && time_budget_s > 0.0 && elapsed > time_budget_s) {
        std::ostringstream os;
        os << "runtime " << elapsed << " s exceeds budget " << time_budget_s << " s";
        detail = os.str();
    }
    if (detail.empty()) {
        std::printf("[PASS] criterion %d: %s (%.2f s)\n", index, name.c_str(), elapsed);
    } else {
        std::printf("[FAIL] criterion %d: %s (%.2f s): %s\n", index, name.c_str(), elapsed,
                    detail.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

std::string check_pk_anchor() {
    const ProbeState state = squeezed_vacuum_state(20.0, TruncationPolicy{1e-10, 1024});
    const auto probs = loss_probabilities(state, LossConfig{0.9, 30});
    double total = 0.0;
    for (double p : probs) total += p;
    if (std::abs(total - 0.9998) > 5e-4) {
        return "sum p_k = " + std::to_string(total) + " outside 0.9998 +/- 5e-4";
    }
    return {};
}

std::string check_loss_curve_bundle() {
    // Converged k sums: at k_max = 30 the truncation alone drives the
    // averaged bound 3% away from the analytic one at N = 20.
    const double eta = 0.9;
    const LossConfig cfg{eta, 120};
    const TruncationPolicy policy{1e-10, 1024};
    const auto grid = photon_number_grid(1.0, 20.0, 40);

    for (double N : grid) {
        const ProbeState state = squeezed_vacuum_state(N, policy);
        if (state.dim() > 1024) return "dim exceeded 1024";
        const double analytic = delta_phi_from_F(fmin_analytic_sv(N, eta));
        const double averaged = delta_phi_from_F(bound_averaged(state, cfg));
        if (std::abs(analytic - averaged) / analytic > 0.02) {
            return "averaged vs analytic gap " +
                   std::to_string(std::abs(analytic - averaged) / analytic) + " at N = " +
                   std::to_string(N);
        }
    }

    const double N = 20.0;
    const ProbeState state = squeezed_vacuum_state(N, policy);
    const MomentSet mom = gaussian_saturating_moments(N);
    const double analytic = delta_phi_from_F(fmin_analytic_sv(N, eta));
    const double asymptotic = delta_phi_from_F(fmin_asymptotic(N, eta));
    const double weak = delta_phi_from_F(bound_weak_value(state, cfg));
    const double before = delta_phi_from_F(bound_before_loss(mom, eta));
    const double lossless = delta_phi_from_F(bound_lossless(mom));
    if (!(analytic >= asymptotic && asymptotic >= weak && weak >= before &&
          before >= lossless)) {
        std::ostringstream os;
        os << "ordering violated at N = 20: analytic " << analytic << ", asymptotic "
           << asymptotic << ", weak " << weak << ", before " << before << ", lossless "
           << lossless;
        return os.str();
    }
    return {};
}

std::string check_appendix_equivalence() {
    for (double N : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        for (double eta : {0.3, 0.6, 0.9}) {
            const double sv = fmin_analytic_sv(N, eta);
            const double general = fmin_analytic_general(gaussian_saturating_moments(N), eta);
            if (rel(sv, general) > 1e-10) {
                return "sv vs general rel diff " + std::to_string(rel(sv, general));
            }
            const ProbeState state = squeezed_vacuum_state(N, TruncationPolicy{1e-13, 4096});
            const double minimized = minimize_variational_qfi(state, LossConfig{eta, 30}).F_min;
            if (rel(general, minimized) > 1e-6) {
                return "general vs minimized rel diff " +
                       std::to_string(rel(general, minimized)) + " at N = " +
                       std::to_string(N) + ", eta = " + std::to_string(eta);
            }
        }
    }
    return {};
}

std::string check_asymptotic_ratio() {
    const double ratio = fmin_analytic_sv(1e4, 0.9) / (240.0 * 0.729 * 1e12 / 0.1);
    if (!(ratio >= 0.95 && ratio <= 1.05)) {
        return "leading-term ratio " + std::to_string(ratio) + " outside [0.95, 1.05]";
    }
    return {};
}

std::string check_degenerations() {
    for (int fam = 0; fam < 2; ++fam) {
        const ProbeState state = fam == 0 ? squeezed_vacuum_state(1.0) : coherent_state(2.0);
        const MomentSet mom = moments_from_state(state);
        const double expected = 4.0 * mom.var_n2;
        const LossConfig cfg{1.0, 30};
        const double bounds[] = {bound_lossless(mom),
                                 bound_before_loss(mom, 1.0),
                                 minimize_variational_qfi(state, cfg).F_min,
                                 fmin_analytic_general(mom, 1.0),
                                 bound_averaged(state, cfg),
                                 bound_weak_value(state, cfg)};
        for (double b : bounds) {
            if (rel(b, expected) > 1e-9) {
                return "loss bound " + std::to_string(b) + " vs 4 var_n2 " +
                       std::to_string(expected) + " at eta = 1";
            }
        }
    }
    if (rel(fmin_analytic_sv(1.0, 1.0), 4.0 * gaussian_saturating_moments(1.0).var_n2) > 1e-9) {
        return "fmin_analytic_sv(1, 1) deviates from 4 var_n2";
    }

    for (const MomentSet& mom : {coherent_moments(2.0), gaussian_saturating_moments(1.0)}) {
        const double noiseless = 0.5 / std::sqrt(mom.var_n2);
        if (bound_linear_dephasing(mom, 0.0) != noiseless) {
            return "linear dephasing bound not exactly noiseless at beta Delta = 0";
        }
        if (bound_second_order_dephasing(mom, 0.0) != noiseless) {
            return "second-order dephasing bound not exactly noiseless at gamma Delta = 0";
        }
    }
    return {};
}

std::string check_oracle_dominance() {
    const TruncationPolicy policy{1e-10, 256};
    std::vector<ProbeState> states;
    for (double N : {1.0, 2.0, 3.0}) {
        states.push_back(coherent_state(N, policy));
        states.push_back(squeezed_vacuum_state(N, policy));
    }
    states.push_back(fock_basis_state(1));
    states.push_back(fock_basis_state(2));

    for (const ProbeState& state : states) {
        if (state.dim() > 256) return "oracle state exceeded dim 256";
        for (double eta : {0.3, 0.6, 0.9}) {
            const LossConfig cfg{eta, 30};
            for (double l1 : {0.0, 0.5, 1.0}) {
                double exact_worst = 0.0;
                for (double phi : {0.0, 0.1, 0.5}) {
                    const DensityMatrix rho = apply_loss_channel(state, phi, eta, l1);
                    const Eigen::MatrixXcd drho = channel_derivative(state, phi, eta, l1);
                    exact_worst = std::max(exact_worst, qfi_exact(rho, drho, state.tail_mass));
                }
                for (double l2 : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
                    const double upper = variational_qfi(state, cfg, VariationalPoint{l1, l2});
                    if (exact_worst > upper + 1e-8) {
                        std::ostringstream os;
                        os << "exact " << exact_worst << " above purification " << upper
                           << " at eta " << eta << ", lambda1 " << l1 << ", lambda2 " << l2;
                        return os.str();
                    }
                }
            }
        }
    }

    for (int fam = 0; fam < 2; ++fam) {
        for (double N : {1.0, 2.0, 5.0}) {
            const ProbeState state =
                fam == 0 ? coherent_state(N, policy) : squeezed_vacuum_state(N, policy);
            const MomentSet mom = moments_from_state(state);
            for (double bd : {0.1, 0.5, 1.0}) {
                const double exact = qfi_exact_dephasing(state, bd);
                const double bound = bound_linear_dephasing(mom, bd);
                if (exact > 1.0 / (bound * bound) + 1e-8) {
                    return "dephased exact QFI above bound at N = " + std::to_string(N);
                }
            }
        }
    }
    return {};
}

std::string check_dephasing_asymptotics() {
    const double bd = 1.0;
    const double N = 1e4;
    const double gauss = N * bound_linear_dephasing(gaussian_saturating_moments(N), bd);
    if (rel(gauss, bd / std::sqrt(6.0)) > 0.01) {
        return "gaussian N*bound = " + std::to_string(gauss) + " vs " +
               std::to_string(bd / std::sqrt(6.0));
    }
    const double coh = N * bound_linear_dephasing(coherent_moments(N), bd);
    if (rel(coh, bd / std::sqrt(2.0)) > 0.01) {
        return "coherent N*bound = " + std::to_string(coh) + " vs " +
               std::to_string(bd / std::sqrt(2.0));
    }
    const double ratio = asymptotic_dephasing(7.0, 0.9, StateFamily::squeezed_vacuum) /
                         asymptotic_dephasing(7.0, 0.9, StateFamily::coherent);
    if (rel(ratio, 1.0 / std::sqrt(3.0)) > 1e-14) {
        return "asymptotic ratio deviates from 1/sqrt(3) by " +
               std::to_string(rel(ratio, 1.0 / std::sqrt(3.0)));
    }
    return {};
}

std::string check_environment_squeezing() {
    if (env_squeezing_delta(0.0) != 1.0) return "Delta(0) != 1";
    const auto env = bound_with_environment(1e4, 1e4, 1.0, StateFamily::squeezed_vacuum,
                                            NoiseOrder::second_order);
    const double published = 1.0 / (std::sqrt(2.0) * std::sqrt(1e4));
    if (rel(env.delta_phi, published) > 0.01) {
        return "second-order env bound " + std::to_string(env.delta_phi) + " vs " +
               std::to_string(published);
    }
    return {};
}

std::string check_lambda1_replication() {
    int counterexamples = 0;
    std::ostringstream log;
    for (double N : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        for (double eta : {0.3, 0.6, 0.9}) {
            for (int fam = 0; fam < 2; ++fam) {
                const ProbeState state =
                    fam == 0 ? squeezed_vacuum_state(N) : coherent_state(N);
                const auto result = minimize_variational_qfi(state, LossConfig{eta, 30});
                if (std::abs(result.pt.lambda1 - 1.0) > 1e-6) {
                    ++counterexamples;
                    log << " (" << (fam == 0 ? "sv" : "coherent") << " N=" << N
                        << " eta=" << eta << " lambda1=" << result.pt.lambda1 << ")";
                }
            }
        }
    }
    if (counterexamples > 0) {
        // Replication check: counterexamples are reported, not failed.
        std::printf("       note: lambda1 = 1 counterexamples logged:%s\n", log.str().c_str());
    }
    return {};
}

std::string check_numerical_hygiene() {
    // Finite differences validate the analytic channel derivative on states
    // where the h = 1e-5 central-difference oracle itself converges below
    // the 1e-6 gate (squeezed tails past N ~ 1 exceed the oracle's own
    // truncation error there).
    const double h = 1e-5;
    const TruncationPolicy policy{1e-10, 256};
    std::vector<ProbeState> fd_states;
    fd_states.push_back(fock_basis_state(1));
    fd_states.push_back(fock_basis_state(2));
    for (double N : {1.0, 2.0, 3.0}) fd_states.push_back(coherent_state(N, policy));
    fd_states.push_back(squeezed_vacuum_state(0.5, policy));
    for (const ProbeState& state : fd_states) {
        for (double eta : {0.3, 0.6, 0.9}) {
            for (double l1 : {0.0, 0.5, 1.0}) {
                for (double phi : {0.0, 0.3}) {
                    const Eigen::MatrixXcd analytic = channel_derivative(state, phi, eta, l1);
                    const Eigen::MatrixXcd fd =
                        (apply_loss_channel(state, phi + h, eta, l1).elements -
                         apply_loss_channel(state, phi - h, eta, l1).elements) /
                        (2.0 * h);
                    const double worst = (analytic - fd).cwiseAbs().maxCoeff();
                    if (worst > 1e-6) {
                        return "derivative vs finite difference error " +
                               std::to_string(worst);
                    }
                }
            }
        }
    }

    // Closed-form moments vs state-vector moments, absolute 1e-6 up to N = 10.
    const TruncationPolicy deep{1e-19, 4096};
    for (double N : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const MomentSet coh_meas = moments_from_state(coherent_state(N, deep));
        const MomentSet coh_closed = coherent_moments(N);
        const MomentSet sv_meas = moments_from_state(squeezed_vacuum_state(N, deep));
        const MomentSet sv_closed = gaussian_saturating_moments(N);
        const double worst = std::max(
            {std::abs(coh_meas.m1 - coh_closed.m1), std::abs(coh_meas.m2 - coh_closed.m2),
             std::abs(coh_meas.m3 - coh_closed.m3), std::abs(coh_meas.m4 - coh_closed.m4),
             std::abs(sv_meas.m1 - sv_closed.m1), std::abs(sv_meas.m2 - sv_closed.m2),
             std::abs(sv_meas.m3 - sv_closed.m3), std::abs(sv_meas.m4 - sv_closed.m4)});
        if (worst > 1e-6) {
            return "closed-form vs state moments deviate by " + std::to_string(worst) +
                   " at N = " + std::to_string(N);
        }

        for (const MomentSet& mom : {coh_meas, coh_closed, sv_meas, sv_closed}) {
            if (rel(mom.var_n2, mom.m4 - mom.m2 * mom.m2) > 1e-10) {
                return "var_n2 identity violated";
            }
        }
    }
    return {};
}

}  // namespace

int main() {
    criterion(1, "loss-probability anchor: sv N=20, eta=0.9, k_max=30", 5.0, check_pk_anchor);
    criterion(2, "loss curves: averaged within 2% of analytic, N = 20 ordering", 60.0, check_loss_curve_bundle);
    criterion(3, "analytic minima equivalent to the numeric minimization", 0.0,
              check_appendix_equivalence);
    criterion(4, "asymptotic loss bound leading term at N = 1e4", 1.0, check_asymptotic_ratio);
    criterion(5, "eta = 1 and zero-noise degenerations", 0.0, check_degenerations);
    criterion(6, "oracle dominance over the (state, eta, lambda, phi) grid", 60.0,
              check_oracle_dominance);
    criterion(7, "dephasing asymptotics and the sqrt(3) family ratio", 0.0,
              check_dephasing_asymptotics);
    criterion(8, "environment squeezing bounds", 0.0, check_environment_squeezing);
    criterion(9, "lambda1 = 1 optimality replication", 0.0, check_lambda1_replication);
    criterion(10, "numerical hygiene: derivatives, moments, variance identity", 0.0,
              check_numerical_hygiene);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
