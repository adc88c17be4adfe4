#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kerrqfi/lossbounds.hpp"
#include "kerrqfi/states.hpp"

namespace kerrqfi {

/// Density operator on the truncated Fock space. Hermitian within 1e-12;
/// trace within 1e-10 of 1 minus the probe's truncation leakage.
struct DensityMatrix {
    Eigen::MatrixXcd elements;

    int dim() const { return static_cast<int>(elements.rows()); }
};

/// Throws std::invalid_argument when the matrix fails Hermiticity, trace or
/// positivity checks. `trace_deficit` is the probability mass legitimately
/// lost to truncation.
void validate(const DensityMatrix& rho, double trace_deficit = 0.0);

/// Kraus representation of a channel family at a reference phi together with
/// the phi-derivatives of the operators.
struct KrausFamily {
    std::vector<Eigen::MatrixXcd> operators;
    std::vector<Eigen::MatrixXcd> derivatives;
};

/// Generalized one-arm loss family at (eta, pt), dim x dim, k = 0..dim-1.
/// Exactly complete on the retained space.
KrausFamily make_loss_kraus_family(int dim, double eta, double phi, const VariationalPoint& pt);

/// Kraus form of the linear-dephasing channel composed with the Kerr unitary
/// (the trivial purification): K_j = sqrt((2b)^j/j!) n^j exp(-b n^2 - i phi n^2),
/// b = (beta Delta)^2. Truncated in j so the completeness defect on the
/// retained space stays below `tail_tolerance`.
KrausFamily make_dephasing_kraus_family(int dim, double beta_delta, double phi,
                                        double tail_tolerance = 1e-12);

/// rho(phi) = sum_k E_k(phi) |psi><psi| E_k(phi)^dag for the generalized loss
/// family. lambda2 is fixed to 0 internally: it only rephases each Kraus
/// branch globally and provably cancels in the map.
DensityMatrix apply_loss_channel(const ProbeState& state, double phi, double eta, double lambda1);

/// Analytic d rho / d phi of apply_loss_channel (each branch generator is
/// diagonal in the number basis). Hermitian and traceless.
Eigen::MatrixXcd channel_derivative(const ProbeState& state, double phi, double eta,
                                    double lambda1);

/// Loss channel at phi = 0 via an independently coded two-mode beam splitter
/// and partial trace (anti-transcription cross-check for apply_loss_channel).
DensityMatrix loss_channel_beam_splitter(const ProbeState& state, double eta);

/// Exact quantum Fisher information via the symmetric logarithmic
/// derivative: eigendecompose rho and sum 2|<i|drho|j>|^2/(p_i + p_j) over
/// pairs with p_i + p_j above the floor (1e-12 relative to the trace).
double qfi_exact(const DensityMatrix& rho, const Eigen::MatrixXcd& drho,
                 double trace_deficit = 0.0);

/// Pure-state QFI 4(<n^4> - <n^2>^2) for the Kerr generator.
double qfi_pure(const ProbeState& state);

/// Purification QFI 4[<H1> - <H2>^2] with H1 = sum dE^dag dE and
/// H2 = i sum dE^dag E, expectations in `state`.
double qfi_purification(const KrausFamily& kraus, const ProbeState& state,
                        double completeness_tolerance = 1e-6);

/// Exact QFI of the linearly dephased family at phi = 0 (the family's QFI is
/// phi-independent).
double qfi_exact_dephasing(const ProbeState& state, double beta_delta);

}  // namespace kerrqfi
