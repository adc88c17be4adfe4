#include "kerrqfi/dephasing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kerrqfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonneg(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    }
}

}  // namespace

std::string to_string(NoiseOrder order) {
    return order == NoiseOrder::linear ? "linear" : "second_order";
}

std::string to_string(StateFamily family) {
    switch (family) {
        case StateFamily::coherent: return "coherent";
        case StateFamily::squeezed_vacuum: return "squeezed_vacuum";
        case StateFamily::fock: return "fock";
    }
    throw std::logic_error("unknown family");
}

StateFamily family_from_string(const std::string& name) {
    if (name == "coherent") return StateFamily::coherent;
    if (name == "squeezed_vacuum") return StateFamily::squeezed_vacuum;
    if (name == "fock") return StateFamily::fock;
    throw std::invalid_argument("unknown state family: " + name);
}

double effective_spread(const DephasingConfig& cfg) {
    require_nonneg(cfg.strength_spread, "strength_spread");
    if (!cfg.env_excitations) return cfg.strength_spread;
    return cfg.strength_spread * env_squeezing_delta(*cfg.env_excitations);
}

double dephasing_bound(const MomentSet& mom, const DephasingConfig& cfg) {
    const double spread = effective_spread(cfg);
    return cfg.order == NoiseOrder::linear ? bound_linear_dephasing(mom, spread)
                                           : bound_second_order_dephasing(mom, spread);
}

Eigen::MatrixXcd apply_linear_dephasing(const ProbeState& state, double phi, double beta_delta) {
    validate(state);
    require_nonneg(beta_delta, "beta_delta");
    const int dim = state.dim();
    const double b2 = beta_delta * beta_delta;
    Eigen::MatrixXcd rho(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            const double dn = static_cast<double>(n - m);
            const double phase = -phi * static_cast<double>(n + m) * dn;  // -(n^2 - m^2) phi
            const std::complex<double> factor =
                std::exp(std::complex<double>(-b2 * dn * dn, phase));
            rho(n, m) = state.amplitudes[static_cast<std::size_t>(n)] *
                        std::conj(state.amplitudes[static_cast<std::size_t>(m)]) * factor;
        }
    }
    return rho;
}

double variational_qfi_dephasing(const MomentSet& mom, double beta_delta, double lam) {
    require_nonneg(beta_delta, "beta_delta");
    if (beta_delta == 0.0) return 4.0 * mom.var_n2;
    const double one_minus = 1.0 - lam;
    return one_minus * one_minus * 4.0 * mom.var_n2 +
           lam * lam / (2.0 * beta_delta * beta_delta) * 4.0 * mom.m2;
}

double lambda_min(const MomentSet& mom, double beta_delta) {
    require_nonneg(beta_delta, "beta_delta");
    if (mom.m2 <= 0.0 && mom.var_n2 <= 0.0) {
        throw std::invalid_argument("lambda_min undefined for a vacuum probe");
    }
    const double twob2v = 2.0 * beta_delta * beta_delta * mom.var_n2;
    return twob2v / (mom.m2 + twob2v);
}

double bound_linear_dephasing(const MomentSet& mom, double beta_delta) {
    require_nonneg(beta_delta, "beta_delta");
    if (!(mom.var_n2 > 0.0) || !(mom.m2 > 0.0)) {
        throw std::invalid_argument("bound_linear_dephasing requires var_n2 > 0 and m2 > 0");
    }
    if (beta_delta == 0.0) return 0.5 / std::sqrt(mom.var_n2);
    return std::sqrt(1.0 / (4.0 * mom.var_n2) +
                     2.0 * beta_delta * beta_delta / (4.0 * mom.m2));
}

double asymptotic_dephasing(double N, double beta_delta, StateFamily family) {
    if (!(N > 0.0)) throw std::invalid_argument("N must be positive");
    require_nonneg(beta_delta, "beta_delta");
    switch (family) {
        case StateFamily::squeezed_vacuum: return beta_delta / (std::sqrt(6.0) * N);
        case StateFamily::coherent: return beta_delta / (std::sqrt(2.0) * N);
        case StateFamily::fock: break;
    }
    throw std::invalid_argument("asymptotic_dephasing applies to the Gaussian and coherent families");
}

double validity_radius(const MomentSet& mom, double beta_delta) {
    require_nonneg(beta_delta, "beta_delta");
    if (mom.var_n2 <= 0.0) return kInf;
    return 2.0 * beta_delta * beta_delta + mom.m2 / mom.var_n2;
}

double env_squeezing_delta(double N_E) {
    require_nonneg(N_E, "N_E");
    return 1.0 / (std::sqrt(N_E) + std::sqrt(N_E + 1.0));
}

double bound_second_order_dephasing(const MomentSet& mom, double gamma_delta) {
    require_nonneg(gamma_delta, "gamma_delta");
    if (!(mom.var_n2 > 0.0)) {
        throw std::invalid_argument("bound_second_order_dephasing requires var_n2 > 0");
    }
    if (gamma_delta == 0.0) return 0.5 / std::sqrt(mom.var_n2);
    return std::sqrt(1.0 / (4.0 * mom.var_n2) + 2.0 * gamma_delta * gamma_delta);
}

EnvironmentBound bound_with_environment(double N, double N_E, double strength,
                                        StateFamily family, NoiseOrder order) {
    require_nonneg(strength, "strength");
    const double delta = env_squeezing_delta(N_E);
    const double spread = strength * delta;
    const MomentSet mom = family == StateFamily::coherent ? coherent_moments(N)
                                                          : gaussian_saturating_moments(N);
    EnvironmentBound out;
    if (order == NoiseOrder::linear) {
        if (!(N > 0.0)) throw std::invalid_argument("N must be positive for the linear bound");
        out.delta_phi = bound_linear_dephasing(mom, spread);
        out.delta_phi_asymptotic = asymptotic_dephasing(N, spread, family);
    } else {
        out.delta_phi = bound_second_order_dephasing(mom, spread);
        out.delta_phi_asymptotic = std::sqrt(2.0) * spread;
    }
    return out;
}

}  // namespace kerrqfi
