#include "kerrqfi/lossbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kerrqfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
    }
}

// log n! table, grown on demand.
const double* log_factorial_table(int up_to) {
    thread_local std::vector<double> table{0.0, 0.0};
    while (static_cast<int>(table.size()) <= up_to) {
        const double next_index = static_cast<double>(table.size());
        table.push_back(table.back() + std::log(next_index));
    }
    return table.data();
}

// Covariance statistics of (a, u, v) = (n^2, k n, k^2) under the joint
// distribution rho_nn * c_nk, reduced to the first four moments of n via the
// binomial factorial moments E[(k)_j | n] = (n)_j (1-eta)^j. Exact for the
// full k <= n sums.
struct CovStats {
    double Va, Vu, Vv, Cau, Cav, Cuv;
};

CovStats covariance_stats(const MomentSet& mom, double eta) {
    const double p = 1.0 - eta;
    const double m1 = mom.m1, m2 = mom.m2, m3 = mom.m3, m4 = mom.m4;
    const double fa2 = m2 - m1;                      // E[n(n-1)]
    const double fa3 = m3 - 3.0 * m2 + 2.0 * m1;     // E[n(n-1)(n-2)]
    const double fa4 = m4 - 6.0 * m3 + 11.0 * m2 - 6.0 * m1;

    const double E_a = m2;
    const double E_a2 = m4;
    const double E_u = p * m2;
    const double E_u2 = p * p * (m4 - m3) + p * m3;
    const double E_v = p * p * fa2 + p * m1;
    const double E_v2 = p * p * p * p * fa4 + 6.0 * p * p * p * fa3 + 7.0 * p * p * fa2 + p * m1;
    const double E_au = p * m4;
    const double E_av = E_u2;  // a*v = n^2 k^2 = u^2
    const double E_uv = p * p * p * (m4 - 3.0 * m3 + 2.0 * m2) + 3.0 * p * p * (m3 - m2) + p * m2;

    return CovStats{E_a2 - E_a * E_a, E_u2 - E_u * E_u,   E_v2 - E_v * E_v,
                    E_au - E_a * E_u, E_av - E_a * E_v,   E_uv - E_u * E_v};
}

// F/4 at (lambda1, lambda2) from the covariance statistics.
double quarter_qfi(const CovStats& s, double l1, double l2) {
    return s.Va + 4.0 * l1 * l1 * s.Vu + l2 * l2 * s.Vv - 4.0 * l1 * s.Cau + 2.0 * l2 * s.Cav -
           4.0 * l1 * l2 * s.Cuv;
}

MinimizationResult minimize_from_moments(const MomentSet& mom, double eta) {
    const CovStats s = covariance_stats(mom, eta);
    const double scale = std::max({s.Va, s.Vu, s.Vv, 1.0});

    if (s.Vv <= 1e-30 * scale) {
        // k is (almost surely) constant: only the vacuum probe once the eta
        // endpoints are excluded. Every point is optimal.
        VariationalPoint pt{1.0, 0.0};
        return {4.0 * quarter_qfi(s, pt.lambda1, pt.lambda2), pt};
    }

    // Partial minimization over lambda2: l2*(l1) = (2 l1 Cuv - Cav)/Vv.
    // g(l1) = F/4 at (l1, l2*(l1)) is convex with quadratic coefficient
    // 4(Vu - Cuv^2/Vv) >= 0 (Cauchy-Schwarz).
    const double qc = s.Vu - s.Cuv * s.Cuv / s.Vv;
    const double lin = s.Cau - s.Cav * s.Cuv / s.Vv;

    double l1;
    if (qc <= 1e-14 * scale) {
        l1 = 1.0;  // flat direction: every lambda1 is optimal, pin the boundary
    } else {
        l1 = std::clamp(lin / (2.0 * qc), 0.0, 1.0);
    }
    const double l2 = (2.0 * l1 * s.Cuv - s.Cav) / s.Vv;
    return {4.0 * quarter_qfi(s, l1, l2), VariationalPoint{l1, l2}};
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::lossless: return "lossless";
        case Method::before_loss: return "before_loss";
        case Method::variational_min: return "variational_min";
        case Method::analytic_general: return "analytic_general";
        case Method::analytic_sv: return "analytic_sv";
        case Method::asymptotic: return "asymptotic";
        case Method::averaged: return "averaged";
        case Method::weak_value: return "weak_value";
        case Method::linear_reference: return "linear_reference";
    }
    throw std::logic_error("unknown method");
}

Method method_from_string(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Method::linear_reference); ++i) {
        const auto method = static_cast<Method>(i);
        if (to_string(method) == name) return method;
    }
    throw std::invalid_argument("unknown method name: " + name);
}

double kraus_weight(int n, int k, double eta) {
    require_eta(eta);
    if (n < 0 || k < 0) throw std::invalid_argument("n and k must be nonnegative");
    if (k > n) return 0.0;
    if (eta == 1.0) return k == 0 ? 1.0 : 0.0;
    if (eta == 0.0) return k == n ? 1.0 : 0.0;
    const double* lf = log_factorial_table(n);
    const double log_c = lf[n] - lf[k] - lf[n - k] + (n - k) * std::log(eta) +
                         k * std::log1p(-eta);
    return std::exp(log_c);
}

std::vector<double> loss_probabilities(const ProbeState& state, const LossConfig& cfg) {
    validate(state);
    require_eta(cfg.eta);
    if (cfg.k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
    std::vector<double> probs(static_cast<std::size_t>(cfg.k_max) + 1, 0.0);
    for (int k = 0; k <= cfg.k_max; ++k) {
        double pk = 0.0;
        for (int n = k; n < state.dim(); ++n) {
            pk += state.population(n) * kraus_weight(n, k, cfg.eta);
        }
        probs[static_cast<std::size_t>(k)] = pk;
    }
    return probs;
}

double variational_qfi(const ProbeState& state, const LossConfig& cfg,
                       const VariationalPoint& pt) {
    validate(state);
    require_eta(cfg.eta);
    double H1 = 0.0;
    double H2 = 0.0;
    for (int n = 0; n < state.dim(); ++n) {
        const double rho_nn = state.population(n);
        if (rho_nn == 0.0) continue;
        for (int k = 0; k <= n; ++k) {
            const double c = kraus_weight(n, k, cfg.eta);
            const double f = static_cast<double>(n) * n - 2.0 * pt.lambda1 * k * n +
                             pt.lambda2 * static_cast<double>(k) * k;
            H1 += rho_nn * c * f * f;
            H2 += rho_nn * c * f;
        }
    }
    return 4.0 * (H1 - H2 * H2);
}

MinimizationResult minimize_variational_qfi(const ProbeState& state, const LossConfig& cfg) {
    validate(state);
    require_eta(cfg.eta);
    const MomentSet mom = moments_from_state(state);
    if (cfg.eta == 0.0) return {0.0, VariationalPoint{1.0, 0.0}};
    if (cfg.eta == 1.0) return {4.0 * mom.var_n2, VariationalPoint{1.0, 0.0}};
    return minimize_from_moments(mom, cfg.eta);
}

MinimizationResult minimize_variational_qfi_scan(const ProbeState& state, const LossConfig& cfg,
                                                 int grid_points) {
    validate(state);
    require_eta(cfg.eta);
    if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
    if (cfg.eta == 0.0) return {0.0, VariationalPoint{1.0, 0.0}};
    const MomentSet mom = moments_from_state(state);
    if (cfg.eta == 1.0) return {4.0 * mom.var_n2, VariationalPoint{1.0, 0.0}};

    const CovStats s = covariance_stats(mom, cfg.eta);
    MinimizationResult best{kInf, {}};
    for (int i = 0; i < grid_points; ++i) {
        const double l1 = static_cast<double>(i) / (grid_points - 1);
        const double l2 = s.Vv > 0.0 ? (2.0 * l1 * s.Cuv - s.Cav) / s.Vv : 0.0;
        const double F = 4.0 * quarter_qfi(s, l1, l2);
        if (F < best.F_min) best = {F, VariationalPoint{l1, l2}};
    }
    return best;
}

namespace detail {

double fmin_analytic_general_impl(const MomentSet& mom, double eta, double mutation) {
    require_eta(eta);
    const double e = eta;
    const double m1 = mom.m1, m2 = mom.m2, m3 = mom.m3, m4 = mom.m4;
    const double var = mom.var_n2;
    const double ee1 = e * (e - 1.0);
    const double sq = (2.0 * e - 1.0) * (2.0 * e - 1.0);

    const double t1 =
        (ee1 * sq * m1 * m1 + (6.0 * ee1 + 1.0) * sq * m1 -
         ee1 * ((7.0 + mutation) * sq * m2 - 4.0 * ee1 * m3)) * m4;
    const double t2 =
        ee1 * ((12.0 * ee1 + 1.0) * m3 - 4.0 * ee1 * (m1 + 6.0) * m1 - 4.0 * m1) * m3;
    const double t3 = -2.0 * ee1 * (2.0 * (ee1 + 1.0) + (8.0 * ee1 + 1.0) * m1) * m3 * m2;
    const double t4 = -(4.0 * ee1 * (ee1 * (m3 - 4.0) - 1.0) + (2.0 * ee1 + 1.0) * sq * m1) *
                      m2 * m2;
    const double t5 = 7.0 * ee1 * sq * m2 * m2 * m2;
    const double numerator = 4.0 * e * (t1 + t2 + t3 + t4 + t5);

    const double d1 = (1.0 - e) * (1.0 - e) * (1.0 - e) * var;
    const double d2 = -ee1 * (11.0 * e + 2.0 * (e - 1.0) * m1 - 4.0) * m2;
    const double d3 =
        e * (m1 + (e - 1.0) * (6.0 * (e - 1.0) * m3 + e * (m1 + 6.0) * m1));
    const double denominator = d1 + d2 + d3;

    const double den_scale = std::abs(d1) + std::abs(d2) + std::abs(d3);
    if (std::abs(denominator) <= 1e-14 * std::max(den_scale, 1.0)) {
        throw SingularityError("analytic minimum denominator within 1e-14 of zero (eta = " +
                               std::to_string(eta) + ")");
    }
    return numerator / denominator;
}

}  // namespace detail

double fmin_analytic_general(const MomentSet& mom, double eta) {
    return detail::fmin_analytic_general_impl(mom, eta, 0.0);
}

double fmin_analytic_sv(double N, double eta) {
    require_eta(eta);
    if (!(N >= 0.0) || !std::isfinite(N)) {
        throw std::invalid_argument("N must be finite and >= 0");
    }
    const double e = eta;
    const double ee1 = e * (e - 1.0);

    const double numerator =
        32.0 * N * e *
        (N * (ee1 * (16.0 * ee1 + 69.0) - 10.0) -
         3.0 * N * N * (3.0 * ee1 * (18.0 * ee1 - 31.0) + 7.0) -
         6.0 * N * N * N * (73.0 * e * (e * (2.0 * e * (e - 2.0) + 1.0) + 1.0) + 2.0) -
         6.0 * N * N * N * N * ee1 * (236.0 * ee1 - 37.0) -
         720.0 * N * N * N * N * N * e * e * (e - 1.0) * (e - 1.0) +
         6.0 * ee1 - 1.0);

    const double d1 = 4.0 * N * (e - 1.0) *
                      (24.0 * N * N * (e - 1.0) * (e - 1.0) +
                       21.0 * N * (e - 2.0) * (e - 1.0) + e * (2.0 * e - 17.0) + 20.0);
    const double d2 = 7.0 * e - 8.0;
    const double denominator = d1 + d2;
    if (std::abs(denominator) <= 1e-14 * std::max(std::abs(d1) + std::abs(d2), 1.0)) {
        throw SingularityError("squeezed-vacuum minimum denominator within 1e-14 of zero");
    }
    return numerator / denominator;
}

double fmin_asymptotic(double N, double eta) {
    require_eta(eta);
    if (eta == 1.0) return kInf;
    return 240.0 * eta * eta * eta * N * N * N / (1.0 - eta);
}

double bound_before_loss(const MomentSet& mom, double eta) {
    require_eta(eta);
    const double e = eta;
    const double m1 = mom.m1, m2 = mom.m2, m3 = mom.m3;
    return 4.0 * (e * e * e * e * mom.var_n2 - 6.0 * e * e * e * (e - 1.0) * m3 +
                  e * e * (11.0 * e * e - 18.0 * e + 7.0) * m2 -
                  e * (6.0 * e * e * e - 12.0 * e * e + 7.0 * e - 1.0) * m1 +
                  2.0 * e * e * e * (e - 1.0) * m2 * m1 -
                  e * e * (e - 1.0) * (e - 1.0) * m1 * m1);
}

double bound_lossless(const MomentSet& mom) { return 4.0 * mom.var_n2; }

double bound_averaged(const ProbeState& state, const LossConfig& cfg) {
    validate(state);
    require_eta(cfg.eta);
    const int dim = state.dim();
    double total = 0.0;
    for (int k = 0; k <= std::min(cfg.k_max, dim - 1); ++k) {
        // |psi_k>_j = psi_{j+k} sqrt(c_{j+k,k} / p_k)
        double pk = 0.0, s2 = 0.0, s4 = 0.0;
        for (int j = 0; j + k < dim; ++j) {
            const double w = state.population(j + k) * kraus_weight(j + k, k, cfg.eta);
            const double x = static_cast<double>(j);
            pk += w;
            s2 += w * x * x;
            s4 += w * x * x * x * x;
        }
        if (pk < 1e-15) continue;
        const double mean_n2 = s2 / pk;
        total += pk * 4.0 * (s4 / pk - mean_n2 * mean_n2);
    }
    return total;
}

double bound_weak_value(const ProbeState& state, const LossConfig& cfg) {
    validate(state);
    require_eta(cfg.eta);
    const int dim = state.dim();
    double total = 0.0;
    for (int k = 0; k <= std::min(cfg.k_max, dim - 1); ++k) {
        // Conditional state sqrt(Pi_k)|psi>/sqrt(p_k) with Pi_k = E_k^dag E_k
        // diagonal: populations c_nk |psi_n|^2 / p_k. The weak value
        // w_k = Re(Tr[Pi_k n^2 rho]/Tr[Pi_k rho]) is its n^2 mean.
        double pk = 0.0, s2 = 0.0, s4 = 0.0;
        for (int n = k; n < dim; ++n) {
            const double w = state.population(n) * kraus_weight(n, k, cfg.eta);
            const double x = static_cast<double>(n);
            pk += w;
            s2 += w * x * x;
            s4 += w * x * x * x * x;
        }
        if (pk < 1e-15) continue;
        const double wk = s2 / pk;
        total += pk * 4.0 * (s4 / pk - wk * wk);
    }
    return total;
}

double linear_loss_reference(double N, double eta) {
    if (!(N > 0.0)) throw std::invalid_argument("N must be positive");
    require_eta(eta);
    if (eta == 0.0) return kInf;
    return std::sqrt((1.0 - eta) / eta) / (2.0 * std::sqrt(N));
}

double delta_phi_from_F(double F, int repetitions) {
    if (!(F >= 0.0)) throw std::invalid_argument("F must be nonnegative");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");
    if (F == 0.0) return kInf;
    return 1.0 / std::sqrt(static_cast<double>(repetitions) * F);
}

BoundSample make_bound_sample(Method method, double F_upper, int repetitions,
                              std::map<std::string, double> params) {
    BoundSample sample;
    sample.method = method;
    sample.params = std::move(params);
    sample.F_upper = F_upper;
    sample.delta_phi_lower = std::isinf(F_upper) ? 0.0 : delta_phi_from_F(F_upper, repetitions);
    return sample;
}

}  // namespace kerrqfi
