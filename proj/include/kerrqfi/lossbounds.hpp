#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrqfi/states.hpp"

namespace kerrqfi {

/// One-arm photon loss configuration: transmissivity eta in [0, 1] and the
/// loss-count truncation used by the averaged / weak-value bounds.
struct LossConfig {
    double eta = 0.9;
    int k_max = 30;
};

/// Variational parameters of the generalized loss Kraus family.
/// lambda1 interpolates the physical placement of the loss (constrained to
/// [0, 1] for physically meaningful minimization); lambda2 reparameterizes
/// purifications of a fixed map and is unconstrained.
struct VariationalPoint {
    double lambda1 = 1.0;
    double lambda2 = 0.0;
};

enum class Method {
    lossless,
    before_loss,
    variational_min,
    analytic_general,
    analytic_sv,
    asymptotic,
    averaged,
    weak_value,
    linear_reference,
};

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// One evaluated bound: F_upper is an upper bound on the quantum Fisher
/// information (rad^-2), delta_phi_lower the matching Cramer-Rao phase error
/// lower bound (rad), with delta_phi_lower = 1/sqrt(m * F_upper).
struct BoundSample {
    Method method = Method::lossless;
    std::map<std::string, double> params;
    double F_upper = 0.0;
    double delta_phi_lower = 0.0;
};

/// Raised when a closed-form denominator is within tolerance of zero.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Binomial loss weight c_nk(eta) = (1-eta)^k/k! * eta^(n-k) * n!/(n-k)!.
/// Zero for k > n; computed in log space for large n.
double kraus_weight(int n, int k, double eta);

/// p_k for k = 0..k_max, the probability of losing exactly k photons.
std::vector<double> loss_probabilities(const ProbeState& state, const LossConfig& cfg);

/// Purification QFI 4[<H1> - <H2>^2] of the generalized loss Kraus family at
/// the given variational point, with the k-sums running over the full
/// binomial support k <= n.
double variational_qfi(const ProbeState& state, const LossConfig& cfg,
                       const VariationalPoint& pt);

struct MinimizationResult {
    double F_min = 0.0;
    VariationalPoint pt;
};

/// Exact minimum of variational_qfi over lambda2 (unconstrained) and
/// lambda1 in [0, 1]. The objective is a convex quadratic, so the optimum is
/// the clamped stationary point; flat lambda1 directions resolve to
/// lambda1 = 1.
MinimizationResult minimize_variational_qfi(const ProbeState& state, const LossConfig& cfg);

/// Cross-check mode: scan lambda1 over a uniform grid on [0, 1] with the
/// closed-form optimal lambda2 per grid point.
MinimizationResult minimize_variational_qfi_scan(const ProbeState& state, const LossConfig& cfg,
                                                 int grid_points = 101);

/// Closed form of min_{lambda2} F at lambda1 = 1 as a rational function of
/// the first four number moments. Throws SingularityError when the
/// denominator is within 1e-14 (relative) of zero.
double fmin_analytic_general(const MomentSet& mom, double eta);

/// Squeezed-vacuum specialization of fmin_analytic_general as a rational
/// function of N and eta.
double fmin_analytic_sv(double N, double eta);

/// Large-N leading term 240 eta^3 N^3 / (1 - eta); +infinity at eta = 1.
double fmin_asymptotic(double N, double eta);

/// Bound for loss occurring before the Kerr interaction (polynomial in eta
/// and the moments).
double bound_before_loss(const MomentSet& mom, double eta);

/// Trivial lossless bound 4 (Delta n^2)^2.
double bound_lossless(const MomentSet& mom);

/// Convexity bound sum_k p_k F_Q[|psi_k>], |psi_k> = E_k|psi>/sqrt(p_k).
double bound_averaged(const ProbeState& state, const LossConfig& cfg);

/// Weak-value bound sum_k p_k 4 Var(n^2) in the conditional state
/// sqrt(Pi_k)|psi>/sqrt(p_k), Pi_k = E_k^dag E_k.
double bound_weak_value(const ProbeState& state, const LossConfig& cfg);

/// Lossy linear-scheme reference sqrt((1-eta)/eta)/(2 sqrt(N)), returned on
/// the delta-phi scale.
double linear_loss_reference(double N, double eta);

/// Cramer-Rao conversion 1/sqrt(m F); +infinity for F = 0.
double delta_phi_from_F(double F, int repetitions = 1);

/// Assembles a BoundSample with the Cramer-Rao conversion applied.
BoundSample make_bound_sample(Method method, double F_upper, int repetitions = 1,
                              std::map<std::string, double> params = {});

namespace detail {
/// Implementation hook for the verification suite's mutation fixture: adds
/// `mutation` to one coefficient of the general closed form.
double fmin_analytic_general_impl(const MomentSet& mom, double eta, double mutation);
}  // namespace detail

}  // namespace kerrqfi
