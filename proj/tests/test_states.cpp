#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kerrqfi/states.hpp"

using namespace kerrqfi;

namespace {

// Independent oracle: raw Poisson moments by direct summation of the mass
// function, nothing shared with the library's log-space construction.
double poisson_raw_moment(double mean, int order, int terms = 400) {
    double total = 0.0;
    double pmf = std::exp(-mean);
    for (int n = 0; n < terms; ++n) {
        total += pmf * std::pow(static_cast<double>(n), order);
        pmf *= mean / (n + 1);
    }
    return total;
}

}  // namespace

TEST_CASE("coherent state: vacuum and Poisson populations") {
    const ProbeState vac = coherent_state(0.0);
    CHECK(vac.dim() == 1);
    CHECK(vac.amplitudes[0].real() == doctest::Approx(1.0));
    CHECK(vac.tail_mass == 0.0);

    const ProbeState one = coherent_state(1.0);
    CHECK(one.population(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // |psi_3|^2 = e^-1 / 3!
    CHECK(one.population(3) == doctest::Approx(std::exp(-1.0) / 6.0).epsilon(1e-12));

    const MomentSet mom = moments_from_state(one);
    CHECK(mom.m2 == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("coherent state: moments match the independent Poisson oracle") {
    // Deep truncation: the fourth moment carries the tail amplified by n^4.
    const TruncationPolicy deep{1e-15, 4096};
    for (double N : {0.5, 1.0, 2.0, 7.5}) {
        const MomentSet meas = moments_from_state(coherent_state(N, deep));
        for (int q = 1; q <= 4; ++q) {
            const double expected = poisson_raw_moment(N, q);
            const double got = q == 1 ? meas.m1 : q == 2 ? meas.m2 : q == 3 ? meas.m3 : meas.m4;
            CHECK(got == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    // Frozen oracle values at N = 1: (1, 2, 5, 15).
    const MomentSet one = moments_from_state(coherent_state(1.0, deep));
    CHECK(one.m1 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(one.m2 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(one.m3 == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(one.m4 == doctest::Approx(15.0).epsilon(1e-6));
}

TEST_CASE("squeezed vacuum: parity, mean photon number, moments") {
    const ProbeState vac = squeezed_vacuum_state(0.0);
    CHECK(vac.dim() == 1);

    const ProbeState sv = squeezed_vacuum_state(1.0, TruncationPolicy{1e-15, 4096});
    for (int n = 1; n < sv.dim(); n += 2) CHECK(sv.population(n) == 0.0);

    const MomentSet mom = moments_from_state(sv);
    CHECK(mom.m1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mom.m2 == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(mom.m3 == doctest::Approx(37.0).epsilon(1e-6));
    CHECK(mom.m4 == doctest::Approx(377.0).epsilon(1e-6));
    CHECK(mom.var_n2 == doctest::Approx(352.0).epsilon(1e-4));
}

TEST_CASE("fock basis states") {
    const ProbeState vac = fock_basis_state(0);
    CHECK(vac.dim() == 1);
    CHECK(vac.population(0) == 1.0);

    const ProbeState one = fock_basis_state(1);
    CHECK(one.dim() == 2);
    CHECK(one.population(1) == 1.0);
    CHECK(one.population(0) == 0.0);

    const MomentSet three = moments_from_state(fock_basis_state(3));
    CHECK(three.var_n2 == doctest::Approx(0.0).epsilon(1e-15));

    const MomentSet two = moments_from_state(fock_basis_state(2));
    CHECK(two.m1 == 2.0);
    CHECK(two.m2 == 4.0);
    CHECK(two.m3 == 8.0);
    CHECK(two.m4 == 16.0);
    CHECK(two.var_n2 == 0.0);
}

TEST_CASE("gaussian saturating moments") {
    const MomentSet zero = gaussian_saturating_moments(0.0);
    CHECK(zero.m1 == 0.0);
    CHECK(zero.m4 == 0.0);
    CHECK(zero.var_n2 == 0.0);

    const MomentSet one = gaussian_saturating_moments(1.0);
    CHECK(one.m2 == 5.0);
    CHECK(one.m3 == 37.0);
    CHECK(one.m4 == 377.0);
    CHECK(one.var_n2 == 352.0);
    CHECK(one.var_n2 == doctest::Approx(one.m4 - one.m2 * one.m2).epsilon(1e-12));
}

TEST_CASE("coherent moments closed forms") {
    const MomentSet zero = coherent_moments(0.0);
    CHECK(zero.m4 == 0.0);

    const MomentSet one = coherent_moments(1.0);
    CHECK(one.var_n2 == 11.0);
    CHECK(one.m2 == 2.0);

    const MomentSet two = coherent_moments(2.0);
    CHECK(two.m2 == 6.0);
    CHECK(two.m4 - two.m2 * two.m2 == doctest::Approx(58.0).epsilon(1e-12));
    // Brute-force Poisson sums pin the raw moments themselves.
    CHECK(two.m4 == doctest::Approx(poisson_raw_moment(2.0, 4)).epsilon(1e-10));
    CHECK(two.m3 == doctest::Approx(poisson_raw_moment(2.0, 3)).epsilon(1e-10));
}

TEST_CASE("closed forms track the state vector over an N grid") {
    const TruncationPolicy deep{1e-19, 4096};
    for (double N : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const ProbeState coh = coherent_state(N, deep);
        const ProbeState sv = squeezed_vacuum_state(N, deep);
        const MomentSet coh_meas = moments_from_state(coh);
        const MomentSet sv_meas = moments_from_state(sv);
        const MomentSet coh_closed = coherent_moments(N);
        const MomentSet sv_closed = gaussian_saturating_moments(N);

        const double dim_c = coh.dim();
        const double dim_s = sv.dim();
        const double tol_c = std::max(1e-6, coh.tail_mass * dim_c * dim_c * dim_c * dim_c);
        const double tol_s = std::max(1e-6, sv.tail_mass * dim_s * dim_s * dim_s * dim_s);
        CHECK(std::abs(coh_meas.m4 - coh_closed.m4) <= tol_c);
        CHECK(std::abs(coh_meas.m3 - coh_closed.m3) <= tol_c);
        CHECK(std::abs(sv_meas.m4 - sv_closed.m4) <= tol_s);
        CHECK(std::abs(sv_meas.m3 - sv_closed.m3) <= tol_s);
    }
}

TEST_CASE("power-mean ordering holds for produced moment sets") {
    for (double N : {0.5, 1.0, 3.0, 8.0}) {
        for (const MomentSet& mom : {coherent_moments(N), gaussian_saturating_moments(N),
                                     moments_from_state(squeezed_vacuum_state(N))}) {
            const double r1 = mom.m1;
            const double r2 = std::sqrt(mom.m2);
            const double r3 = std::cbrt(mom.m3);
            const double r4 = std::pow(mom.m4, 0.25);
            CHECK(r1 <= r2 * (1 + 1e-12));
            CHECK(r2 <= r3 * (1 + 1e-12));
            CHECK(r3 <= r4 * (1 + 1e-12));
        }
    }
}

TEST_CASE("truncation policy: cap fails over with recorded tail mass") {
    const TruncationPolicy tight{1e-10, 16};
    const ProbeState state = squeezed_vacuum_state(5.0, tight);
    CHECK(state.dim() <= 16);
    CHECK(state.tail_mass > 1e-10);
    CHECK_NOTHROW(validate(state));

    // Large N = 20 fits inside the default cap with a sub-tolerance tail.
    const ProbeState big = squeezed_vacuum_state(20.0);
    CHECK(big.dim() <= 4096);
    CHECK(big.tail_mass <= 1e-10);
}

TEST_CASE("state validation rejects broken normalization") {
    ProbeState broken;
    broken.amplitudes = {{0.5, 0.0}, {0.5, 0.0}};  // norm 0.5, no tail
    broken.tail_mass = 0.0;
    CHECK_THROWS_AS(validate(broken), std::invalid_argument);
    CHECK_THROWS_AS(moments_from_state(broken), std::invalid_argument);
    broken.tail_mass = 0.5;
    CHECK_NOTHROW(validate(broken));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(coherent_state(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_state(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(squeezed_vacuum_state(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(fock_basis_state(-1), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_saturating_moments(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_moments(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(coherent_state(1.0, TruncationPolicy{0.0, 64}), std::invalid_argument);
}
