#include "kerrqfi/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kerrqfi {

namespace {

void require_mean_photon(double N) {
    if (!std::isfinite(N) || N < 0.0) {
        throw std::invalid_argument("mean photon number must be finite and >= 0, got " +
                                    std::to_string(N));
    }
}

void require_policy(const TruncationPolicy& policy) {
    if (!(policy.tail_tolerance > 0.0 && policy.tail_tolerance < 1.0)) {
        throw std::invalid_argument("tail_tolerance must lie in (0, 1)");
    }
    if (policy.max_dim < 1) {
        throw std::invalid_argument("max_dim must be positive");
    }
}

}  // namespace

ProbeState coherent_state(double N, const TruncationPolicy& policy) {
    require_mean_photon(N);
    require_policy(policy);
    if (N == 0.0) return ProbeState{{{1.0, 0.0}}, 0.0};

    // Poisson populations by a recurrence centered on the mode (exp(-N)
    // itself underflows past N ~ 745). Above the mode p_{n+1}/p_n = N/(n+1)
    // < 1 shrinks, so the discarded mass is bounded geometrically and the
    // recorded tail is summed term by term; tolerances far below the
    // resolution of 1 - cumulative stay meaningful.
    const int mode = std::min(static_cast<int>(N), policy.max_dim - 1);
    double log_factorial = 0.0;
    for (int i = 2; i <= mode; ++i) log_factorial += std::log(static_cast<double>(i));
    const double log_p_mode = -N + mode * std::log(N) - log_factorial;

    std::vector<double> probs(static_cast<std::size_t>(mode) + 1, 0.0);
    probs[static_cast<std::size_t>(mode)] = std::exp(log_p_mode);
    for (int n = mode; n > 0; --n) {
        probs[static_cast<std::size_t>(n - 1)] =
            probs[static_cast<std::size_t>(n)] * n / N;
    }
    double p = probs.back();
    int n = mode;
    while (n + 1 < policy.max_dim) {
        const double p_next = p * N / (n + 1);
        const double ratio = N / (n + 2);
        probs.push_back(p_next);
        p = p_next;
        ++n;
        if (ratio < 1.0 && p * ratio / (1.0 - ratio) <= policy.tail_tolerance) break;
    }
    // Exact remaining mass, summed in the recurrence (absolutely accurate).
    double tail = 0.0;
    double q = p * N / (n + 1);
    for (int j = n + 1; q > 1e-300 && j < n + 200000; ++j) {
        tail += q;
        q *= N / (j + 1);
    }

    ProbeState state;
    state.amplitudes.reserve(probs.size());
    for (double prob : probs) state.amplitudes.push_back({std::sqrt(prob), 0.0});
    state.tail_mass = tail;
    return state;
}

ProbeState squeezed_vacuum_state(double N, const TruncationPolicy& policy) {
    require_mean_photon(N);
    require_policy(policy);
    if (N == 0.0) return ProbeState{{{1.0, 0.0}}, 0.0};

    // p_0 = 1/cosh r, p_{2m+2} = p_{2m} * tanh^2 r * (2m+1)/(2m+2),
    // with tanh^2 r = N/(N+1) and cosh r = sqrt(N+1). The step ratio is below
    // tanh^2 r, so the remaining mass past p_next is at most
    // p_next/(1 - tanh^2 r) = p_next (N+1).
    const double tanh2 = N / (N + 1.0);
    std::vector<double> even_probs;
    double p = 1.0 / std::sqrt(N + 1.0);
    int m = 0;
    for (;;) {
        even_probs.push_back(p);
        const double p_next = p * tanh2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
        if (p_next * (N + 1.0) <= policy.tail_tolerance) break;
        if (2 * (m + 1) + 1 > policy.max_dim) break;
        p = p_next;
        ++m;
    }

    ProbeState state;
    state.amplitudes.assign(2 * even_probs.size() - 1, {0.0, 0.0});
    double sign = 1.0;
    for (std::size_t i = 0; i < even_probs.size(); ++i) {
        state.amplitudes[2 * i] = {sign * std::sqrt(even_probs[i]), 0.0};
        sign = -sign;
    }
    double tail = 0.0;
    double q = p * tanh2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
    for (int j = m + 1; q > 1e-300 && j < m + 200000; ++j) {
        tail += q;
        q *= tanh2 * (2.0 * j + 1.0) / (2.0 * j + 2.0);
    }
    state.tail_mass = tail;
    return state;
}

ProbeState fock_basis_state(int n) {
    if (n < 0) throw std::invalid_argument("Fock index must be nonnegative");
    ProbeState state;
    state.amplitudes.assign(static_cast<std::size_t>(n) + 1, {0.0, 0.0});
    state.amplitudes.back() = {1.0, 0.0};
    state.tail_mass = 0.0;
    return state;
}

MomentSet moments_from_state(const ProbeState& state) {
    validate(state);
    MomentSet mom;
    for (int n = 0; n < state.dim(); ++n) {
        const double p = state.population(n);
        const double x = static_cast<double>(n);
        mom.m1 += p * x;
        mom.m2 += p * x * x;
        mom.m3 += p * x * x * x;
        mom.m4 += p * x * x * x * x;
    }
    mom.var_n2 = mom.m4 - mom.m2 * mom.m2;
    return mom;
}

MomentSet gaussian_saturating_moments(double N) {
    require_mean_photon(N);
    MomentSet mom;
    mom.m1 = N;
    mom.m2 = (3.0 * N + 2.0) * N;
    mom.m3 = ((15.0 * N + 18.0) * N + 4.0) * N;
    mom.m4 = (((105.0 * N + 180.0) * N + 84.0) * N + 8.0) * N;
    mom.var_n2 = (((96.0 * N + 168.0) * N + 80.0) * N + 8.0) * N;
    return mom;
}

MomentSet coherent_moments(double N) {
    require_mean_photon(N);
    MomentSet mom;
    mom.m1 = N;
    mom.m2 = (N + 1.0) * N;
    mom.m3 = ((N + 3.0) * N + 1.0) * N;
    mom.m4 = (((N + 6.0) * N + 7.0) * N + 1.0) * N;
    mom.var_n2 = ((4.0 * N + 6.0) * N + 1.0) * N;
    return mom;
}

void validate(const ProbeState& state) {
    if (state.dim() < 1) throw std::invalid_argument("probe state must have dim >= 1");
    double norm = 0.0;
    for (const auto& amp : state.amplitudes) norm += std::norm(amp);
    if (std::abs(norm + state.tail_mass - 1.0) > 1e-12) {
        throw std::invalid_argument("probe state norm + tail_mass deviates from 1 by " +
                                    std::to_string(norm + state.tail_mass - 1.0));
    }
    if (state.tail_mass < 0.0 || state.tail_mass > 1.0) {
        throw std::invalid_argument("tail_mass out of [0, 1]");
    }
}

}  // namespace kerrqfi
