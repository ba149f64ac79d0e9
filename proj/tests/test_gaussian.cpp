#include <doctest.h>

#include <cmath>
#include <complex>

#include "clocksta/gaussian.hpp"
#include "test_support.hpp"

using namespace clocksta;
using testsupport::Lcg;

TEST_CASE("vacuum state values") {
    const GaussianState v = vacuum_state(1.0, 2.0);
    CHECK(v.cov.a == doctest::Approx(0.25));
    CHECK(v.cov.d == doctest::Approx(1.0));
    CHECK(v.cov.b == 0.0);
    CHECK(v.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean_energy(v, {1.0, 2.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));  // hw/2
    CHECK(v.valid());
}

TEST_CASE("coherent state displacement and energy") {
    const std::complex<double> mu(1.0, 0.0);
    const GaussianState c = coherent_state(mu, 1.0, 1.0);
    CHECK(c.mean.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(c.mean.p == doctest::Approx(0.0));
    CHECK(coherent_state({0.0, 0.0}, 1.0, 1.0).mean.x == 0.0);
    CHECK(mean_energy(c, {1.0, 1.0, 1.0}) == doctest::Approx(1.5).epsilon(1e-12));

    const std::complex<double> mu2(0.3, -1.1);
    const GaussianState c2 = coherent_state(mu2, 1.0, 1.7);
    CHECK(mean_energy(c2, {1.0, 1.7, 1.0}) ==
          doctest::Approx(1.7 * (std::norm(mu2) + 0.5)).epsilon(1e-12));
}

TEST_CASE("energy variance: vacuum, coherent, squeezed") {
    const EnergyForm form{1.0, 1.3, 1.0};
    CHECK(energy_variance(vacuum_state(1.0, 1.3), form) == doctest::Approx(0.0).epsilon(1e-14));

    const std::complex<double> mu(0.8, 0.45);
    CHECK(energy_variance(coherent_state(mu, 1.0, 1.3), form) ==
          doctest::Approx(1.3 * 1.3 * std::norm(mu)).epsilon(1e-12));

    // squeezed vacuum via the dictionary: Var = 2 (hbar w)^2 |alpha beta|^2
    const double r = 0.6;
    BogoliubovPair p;
    p.alpha = std::cosh(r);
    p.beta = std::sinh(r);
    p.omega_ref = 1.3;
    const GaussianState sq = apply_map(symplectic_from_bogoliubov(p), vacuum_state(1.0, 1.3));
    CHECK(energy_variance(sq, form) ==
          doctest::Approx(2.0 * 1.3 * 1.3 * std::cosh(r) * std::cosh(r) * std::sinh(r) *
                          std::sinh(r))
              .epsilon(1e-12));
    CHECK(mean_energy(sq, form) ==
          doctest::Approx(1.3 * (std::sinh(r) * std::sinh(r) + 0.5)).epsilon(1e-12));
}

TEST_CASE("transport preserves purity and covariance determinant") {
    Lcg rng(3);
    for (int i = 0; i < 100; ++i) {
        const GaussianState s = testsupport::random_state(rng);
        const SymplecticMap S = testsupport::random_symplectic(rng);
        const GaussianState out = apply_map(S, s);
        CHECK(out.cov.det() == doctest::Approx(s.cov.det()).epsilon(1e-10));
        CHECK(out.purity() == doctest::Approx(s.purity()).epsilon(1e-9));
    }
    const GaussianState v = vacuum_state(1.0, 2.0);
    const SymplecticMap full_period = constant_frequency_map(2.0, 3.14159265358979323846);
    const GaussianState back = apply_map(full_period, v);
    CHECK((back.cov - v.cov).max_abs() < 1e-12);
}

TEST_CASE("overlap values and symmetry") {
    const GaussianState v = vacuum_state(1.0, 1.0);
    CHECK(hs_overlap(v, v) == doctest::Approx(1.0).epsilon(1e-12));

    // vacuum vs displaced vacuum: |<0|mu>|^2 = exp(-|mu|^2)
    const GaussianState c = coherent_state({1.0, 0.0}, 1.0, 1.0);
    CHECK(hs_overlap(v, c) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const GaussianState c2 = coherent_state({0.6, -0.8}, 1.0, 1.0);
    CHECK(hs_overlap(v, c2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    Lcg rng(5);
    for (int i = 0; i < 50; ++i) {
        const GaussianState a = testsupport::random_state(rng);
        const GaussianState b = testsupport::random_state(rng);
        CHECK(hs_overlap(a, b) == doctest::Approx(hs_overlap(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("Cauchy-Schwarz bound for the Hilbert-Schmidt inner product") {
    Lcg rng(9);
    for (int i = 0; i < 200; ++i) {
        const GaussianState a = testsupport::random_state(rng);
        const GaussianState b = testsupport::random_state(rng);
        const double lhs = hs_overlap(a, b) * hs_overlap(a, b);
        CHECK(lhs <= a.purity() * b.purity() * (1.0 + 1e-12));
    }
}

TEST_CASE("energy variance is nonnegative on physical states") {
    Lcg rng(13);
    for (int i = 0; i < 200; ++i) {
        const GaussianState s = testsupport::random_state(rng);
        CHECK(energy_variance(s, {1.0, rng.range(0.5, 2.0), 1.0}) >= -1e-12);
    }
}

TEST_CASE("purity scaling and hbar bookkeeping") {
    GaussianState v = vacuum_state(1.0, 1.0);
    v.cov = v.cov * 2.0;
    CHECK(v.purity() == doctest::Approx(0.5).epsilon(1e-12));

    // physical scaling: all formulas carry hbar explicitly
    const double hbar = 0.7;
    const GaussianState vh = vacuum_state(1.0, 2.0, hbar);
    CHECK(vh.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean_energy(vh, {1.0, 2.0, hbar}) == doctest::Approx(hbar).epsilon(1e-12));
    CHECK(energy_variance(vh, {1.0, 2.0, hbar}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("degenerate overlap input is rejected") {
    GaussianState bad = vacuum_state(1.0, 1.0);
    bad.cov = Mat2::diagonal(0.0, 0.0);
    CHECK_THROWS_AS(hs_overlap(bad, bad), std::domain_error);
}
