#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerrqfi/states.hpp"

namespace kerrqfi {

enum class NoiseOrder { linear, second_order };
enum class StateFamily { coherent, squeezed_vacuum, fock };

std::string to_string(NoiseOrder order);
std::string to_string(StateFamily family);
StateFamily family_from_string(const std::string& name);

/// Phase-diffusion configuration. strength_spread is the product beta*Delta
/// (linear) or gamma*Delta (second order). When env_excitations N_E is set,
/// the effective spread is strength * exp(-arcsinh sqrt(N_E)) with the
/// strength read off at Delta = 1.
struct DephasingConfig {
    NoiseOrder order = NoiseOrder::linear;
    double strength_spread = 0.0;
    std::optional<double> env_excitations;
};

/// The spread actually entering the bounds: strength_spread scaled by
/// env_squeezing_delta when an environment occupation is configured.
double effective_spread(const DephasingConfig& cfg);

/// Dispatches to bound_linear_dephasing or bound_second_order_dephasing with
/// the effective spread.
double dephasing_bound(const MomentSet& mom, const DephasingConfig& cfg);

/// Dephased probe state
///   rho_nm = psi_n conj(psi_m) exp(-i phi (n^2 - m^2) - (beta Delta)^2 (n - m)^2).
Eigen::MatrixXcd apply_linear_dephasing(const ProbeState& state, double phi, double beta_delta);

/// Variational purification QFI
///   F = (1 - lam)^2 4 (Delta n^2)^2 + lam^2/(2 (beta Delta)^2) * 4 <n^2>.
/// At beta_delta = 0 only lam = 0 is meaningful; returns 4 (Delta n^2)^2.
double variational_qfi_dephasing(const MomentSet& mom, double beta_delta, double lam);

/// Minimizer of the quadratic above:
///   lambda_min = 2 b^2 (Delta n^2)^2 / (<n^2> + 2 b^2 (Delta n^2)^2), b = beta Delta.
double lambda_min(const MomentSet& mom, double beta_delta);

/// Phase error lower bound for linear phase diffusion:
///   delta phi >= sqrt(1/(4 (Delta n^2)^2) + 2 b^2/(4 <n^2>)).
double bound_linear_dephasing(const MomentSet& mom, double beta_delta);

/// Large-N asymptote beta Delta/(sqrt(6) N) for the Gaussian family and
/// beta Delta/(sqrt(2) N) for coherent states.
double asymptotic_dephasing(double N, double beta_delta, StateFamily family);

/// Small-phi validity scale 2 b^2 + <n^2>/(Delta n^2)^2; the caller applies
/// its own safety factor for the "<<".
double validity_radius(const MomentSet& mom, double beta_delta);

/// Environment squeezing map Delta = exp(-arcsinh sqrt(N_E))
///                                 = 1/(sqrt(N_E) + sqrt(N_E + 1)).
double env_squeezing_delta(double N_E);

/// Phase error lower bound for second-order phase diffusion:
///   delta phi >= sqrt(1/(4 (Delta n^2)^2) + 2 g^2), g = gamma Delta.
double bound_second_order_dephasing(const MomentSet& mom, double gamma_delta);

struct EnvironmentBound {
    double delta_phi = 0.0;             // full bound with Delta(N_E) composed in
    double delta_phi_asymptotic = 0.0;  // large-N(, N_E) asymptotic form
};

/// Composes env_squeezing_delta with the corresponding dephasing bound for a
/// probe of mean photon number N drawn from `family`. The asymptotic member
/// carries beta Delta/(sqrt 2 N) resp. sqrt(2) gamma Delta.
EnvironmentBound bound_with_environment(double N, double N_E, double strength,
                                        StateFamily family, NoiseOrder order);

}  // namespace kerrqfi
