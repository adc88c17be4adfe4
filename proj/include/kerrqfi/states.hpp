#pragma once

#include <complex>
#include <vector>

namespace kerrqfi {

/// Controls how the Fock-space truncation dimension is chosen when building
/// probe states: grow the dimension until the discarded probability mass
/// drops below tail_tolerance, capped at max_dim.
struct TruncationPolicy {
    double tail_tolerance = 1e-10;
    int max_dim = 4096;
};

/// Single-mode probe state |psi> in a truncated Fock basis.
/// Invariant: sum_n |psi_n|^2 + tail_mass = 1 (within 1e-12).
struct ProbeState {
    std::vector<std::complex<double>> amplitudes;
    double tail_mass = 0.0;

    int dim() const { return static_cast<int>(amplitudes.size()); }

    /// Diagonal population |psi_n|^2.
    double population(int n) const { return std::norm(amplitudes[static_cast<std::size_t>(n)]); }
};

/// First four raw moments of the photon number operator plus the variance of
/// n^2, i.e. (Delta n^2)^2 = m4 - m2^2.
struct MomentSet {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double var_n2 = 0.0;
};

/// Coherent state with mean photon number N (Poisson populations).
ProbeState coherent_state(double N, const TruncationPolicy& policy = {});

/// Squeezed vacuum with mean photon number N (sinh^2 r = N); only even Fock
/// components are nonzero.
ProbeState squeezed_vacuum_state(double N, const TruncationPolicy& policy = {});

/// Number eigenstate |n>.
ProbeState fock_basis_state(int n);

/// Raw moments m_q = sum_n n^q |psi_n|^2 evaluated on the truncated vector.
MomentSet moments_from_state(const ProbeState& state);

/// Closed-form moments of the Gaussian family that saturates the squeezed
/// vacuum moment bounds:
///   m2 = 3N^2 + 2N,  m3 = 15N^3 + 18N^2 + 4N,
///   m4 = 105N^4 + 180N^3 + 84N^2 + 8N,  var_n2 = 96N^4 + 168N^3 + 80N^2 + 8N.
MomentSet gaussian_saturating_moments(double N);

/// Closed-form Poisson moments of a coherent state:
///   m2 = N^2 + N,  m3 = N^3 + 3N^2 + N,  m4 = N^4 + 6N^3 + 7N^2 + N,
///   var_n2 = 4N^3 + 6N^2 + N.
MomentSet coherent_moments(double N);

/// Throws std::invalid_argument if the state violates its normalization or
/// shape invariants.
void validate(const ProbeState& state);

}  // namespace kerrqfi
