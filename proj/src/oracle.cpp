#include "kerrqfi/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "kerrqfi/dephasing.hpp"

namespace kerrqfi {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void require_eta_l1(double eta, double lambda1) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0)) {
        throw std::invalid_argument("lambda1 must lie in [0, 1]");
    }
}

// Branch vector v_k = E_k(phi)|psi> and its generator diagonal g_k(j) with
// lambda2 = 0: g = n^2 - 2 lambda1 k n evaluated at n = j + k.
struct Branch {
    VectorXcd v;
    Eigen::VectorXd g;
};

Branch loss_branch(const ProbeState& state, int k, double phi, double eta, double lambda1) {
    const int dim = state.dim();
    Branch br{VectorXcd::Zero(dim), Eigen::VectorXd::Zero(dim)};
    for (int j = 0; j + k < dim; ++j) {
        const int n = j + k;
        const double c = kraus_weight(n, k, eta);
        if (c == 0.0) continue;
        const double gen = static_cast<double>(n) * n - 2.0 * lambda1 * k * n;
        br.v(j) = state.amplitudes[static_cast<std::size_t>(n)] * std::sqrt(c) *
                  std::exp(std::complex<double>(0.0, -phi * gen));
        br.g(j) = gen;
    }
    return br;
}

}  // namespace

void validate(const DensityMatrix& rho, double trace_deficit) {
    const int dim = rho.dim();
    if (dim < 1 || rho.elements.cols() != dim) {
        throw std::invalid_argument("density matrix must be square and nonempty");
    }
    const double herm_defect = (rho.elements - rho.elements.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-12) {
        throw std::invalid_argument("density matrix is not Hermitian (defect " +
                                    std::to_string(herm_defect) + ")");
    }
    const double trace = rho.elements.trace().real();
    if (std::abs(trace - (1.0 - trace_deficit)) > 1e-10 + 1e-12 * dim) {
        throw std::invalid_argument("density matrix trace " + std::to_string(trace) +
                                    " inconsistent with expected deficit");
    }
}

KrausFamily make_loss_kraus_family(int dim, double eta, double phi, const VariationalPoint& pt) {
    if (dim < 1) throw std::invalid_argument("dim must be positive");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    KrausFamily family;
    for (int k = 0; k < dim; ++k) {
        MatrixXcd E = MatrixXcd::Zero(dim, dim);
        MatrixXcd dE = MatrixXcd::Zero(dim, dim);
        for (int n = k; n < dim; ++n) {
            const double c = kraus_weight(n, k, eta);
            if (c == 0.0) continue;
            const double gen = static_cast<double>(n) * n - 2.0 * pt.lambda1 * k * n +
                               pt.lambda2 * static_cast<double>(k) * k;
            const std::complex<double> val =
                std::sqrt(c) * std::exp(std::complex<double>(0.0, -phi * gen));
            E(n - k, n) = val;
            dE(n - k, n) = std::complex<double>(0.0, -gen) * val;
        }
        family.operators.push_back(std::move(E));
        family.derivatives.push_back(std::move(dE));
    }
    return family;
}

KrausFamily make_dephasing_kraus_family(int dim, double beta_delta, double phi,
                                        double tail_tolerance) {
    if (dim < 1) throw std::invalid_argument("dim must be positive");
    if (!(beta_delta >= 0.0)) throw std::invalid_argument("beta_delta must be >= 0");
    const double b = beta_delta * beta_delta;
    const double n_max = static_cast<double>(dim - 1);
    const double mean = 2.0 * b * n_max * n_max;  // Poisson weight parameter at the edge

    KrausFamily family;
    // Completeness on row n is a Poisson(2 b n^2) cumulative; grow j until the
    // worst row (n = dim - 1) is covered.
    double log_term = -mean;  // log of Poisson pmf at j = 0
    double covered = std::exp(log_term);
    int j_max = 0;
    while (1.0 - covered > tail_tolerance && j_max < 100000) {
        ++j_max;
        log_term += std::log(mean) - std::log(static_cast<double>(j_max));
        covered += std::exp(log_term);
    }
    if (mean == 0.0) j_max = 0;

    double log_factorial_j = 0.0;  // log j!
    for (int j = 0; j <= j_max; ++j) {
        if (j > 1) log_factorial_j += std::log(static_cast<double>(j));
        MatrixXcd E = MatrixXcd::Zero(dim, dim);
        MatrixXcd dE = MatrixXcd::Zero(dim, dim);
        for (int n = 0; n < dim; ++n) {
            const double n2 = static_cast<double>(n) * n;
            // log K_j(n) = (j/2) log(2 b n^2) - (1/2) log j! - b n^2
            double log_k;
            if (j == 0) {
                log_k = -b * n2;
            } else if (n == 0) {
                continue;  // n^j = 0
            } else {
                log_k = 0.5 * j * std::log(2.0 * b * n2) - 0.5 * log_factorial_j - b * n2;
            }
            const std::complex<double> val =
                std::exp(log_k) * std::exp(std::complex<double>(0.0, -phi * n2));
            E(n, n) = val;
            dE(n, n) = std::complex<double>(0.0, -n2) * val;
        }
        family.operators.push_back(std::move(E));
        family.derivatives.push_back(std::move(dE));
    }
    return family;
}

DensityMatrix apply_loss_channel(const ProbeState& state, double phi, double eta,
                                 double lambda1) {
    validate(state);
    require_eta_l1(eta, lambda1);
    const int dim = state.dim();
    MatrixXcd rho = MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const Branch br = loss_branch(state, k, phi, eta, lambda1);
        rho.noalias() += br.v * br.v.adjoint();
    }
    return DensityMatrix{std::move(rho)};
}

Eigen::MatrixXcd channel_derivative(const ProbeState& state, double phi, double eta,
                                    double lambda1) {
    validate(state);
    require_eta_l1(eta, lambda1);
    const int dim = state.dim();
    MatrixXcd half = MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const Branch br = loss_branch(state, k, phi, eta, lambda1);
        const VectorXcd dv =
            (std::complex<double>(0.0, -1.0) * br.g.cast<std::complex<double>>().array() *
             br.v.array())
                .matrix();
        half.noalias() += dv * br.v.adjoint();
    }
    // Symmetrize last so the result is Hermitian to the bit.
    MatrixXcd drho = half + half.adjoint();
    return drho;
}

DensityMatrix loss_channel_beam_splitter(const ProbeState& state, double eta) {
    validate(state);
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
    const int dim = state.dim();

    // Pascal triangle for the binomial coefficients; independent of the
    // log-space kraus_weight route.
    std::vector<std::vector<double>> choose(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) {
        auto& row = choose[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(n) + 1, 1.0);
        for (int k = 1; k < n; ++k) {
            row[static_cast<std::size_t>(k)] =
                choose[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                choose[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
        }
    }

    // Two-mode state Psi[s][e] after |n>_S|0>_E -> sum_k B(n,k)|n-k>_S|k>_E.
    const double sqrt_eta = std::sqrt(eta);
    const double sqrt_loss = std::sqrt(1.0 - eta);
    MatrixXcd psi = MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        const auto amp = state.amplitudes[static_cast<std::size_t>(n)];
        if (amp == std::complex<double>(0.0, 0.0)) continue;
        for (int k = 0; k <= n; ++k) {
            const double coeff = std::sqrt(choose[static_cast<std::size_t>(n)]
                                                 [static_cast<std::size_t>(k)]) *
                                 std::pow(sqrt_eta, n - k) * std::pow(sqrt_loss, k);
            psi(n - k, k) += amp * coeff;
        }
    }

    // rho_S = Tr_E |Psi><Psi|
    MatrixXcd rho = psi * psi.adjoint();
    return DensityMatrix{std::move(rho)};
}

double qfi_exact(const DensityMatrix& rho, const Eigen::MatrixXcd& drho, double trace_deficit) {
    validate(rho, trace_deficit);
    const int dim = rho.dim();
    if (drho.rows() != dim || drho.cols() != dim) {
        throw std::invalid_argument("drho dimension mismatch");
    }
    const double herm_defect = (drho - drho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-10) {
        throw std::invalid_argument("drho is not Hermitian (defect " +
                                    std::to_string(herm_defect) + ")");
    }
    if (std::abs(drho.trace().real()) > 1e-8) {
        throw std::invalid_argument("drho must be traceless");
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(rho.elements);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    const auto& p = solver.eigenvalues();
    if (p.minCoeff() < -1e-10) {
        throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
    }
    const MatrixXcd transformed = solver.eigenvectors().adjoint() * drho * solver.eigenvectors();

    const double floor = 1e-12 * rho.elements.trace().real();
    double F = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double denom = p(i) + p(j);
            if (denom <= floor) continue;
            F += 2.0 * std::norm(transformed(i, j)) / denom;
        }
    }
    return F;
}

double qfi_pure(const ProbeState& state) {
    const MomentSet mom = moments_from_state(state);
    return 4.0 * mom.var_n2;
}

double qfi_purification(const KrausFamily& kraus, const ProbeState& state,
                        double completeness_tolerance) {
    validate(state);
    if (kraus.operators.empty() || kraus.operators.size() != kraus.derivatives.size()) {
        throw std::invalid_argument("Kraus family must pair operators with derivatives");
    }
    const int dim = static_cast<int>(kraus.operators.front().rows());
    if (dim < state.dim()) {
        throw std::invalid_argument("Kraus operators smaller than the state dimension");
    }

    MatrixXcd completeness = MatrixXcd::Zero(dim, dim);
    MatrixXcd H1 = MatrixXcd::Zero(dim, dim);
    MatrixXcd H2 = MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < kraus.operators.size(); ++k) {
        const auto& E = kraus.operators[k];
        const auto& dE = kraus.derivatives[k];
        completeness.noalias() += E.adjoint() * E;
        H1.noalias() += dE.adjoint() * dE;
        H2.noalias() += dE.adjoint() * E;
    }
    const double defect =
        (completeness - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (defect > completeness_tolerance) {
        throw std::invalid_argument("Kraus completeness violated (defect " +
                                    std::to_string(defect) + ")");
    }
    // H2 is anti-Hermitian by completeness; i*H2 is the Hermitian generator
    // entering the squared term.
    H2 *= std::complex<double>(0.0, 1.0);

    VectorXcd psi = VectorXcd::Zero(dim);
    for (int n = 0; n < state.dim(); ++n) psi(n) = state.amplitudes[static_cast<std::size_t>(n)];
    const double h1 = (psi.adjoint() * H1 * psi)(0, 0).real();
    const double h2 = (psi.adjoint() * H2 * psi)(0, 0).real();
    return 4.0 * (h1 - h2 * h2);
}

double qfi_exact_dephasing(const ProbeState& state, double beta_delta) {
    validate(state);
    const int dim = state.dim();
    DensityMatrix rho{apply_linear_dephasing(state, 0.0, beta_delta)};
    MatrixXcd drho(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            const double gen = static_cast<double>(n) * n - static_cast<double>(m) * m;
            drho(n, m) = std::complex<double>(0.0, -gen) * rho.elements(n, m);
        }
    }
    return qfi_exact(rho, drho, state.tail_mass);
}

}  // namespace kerrqfi
