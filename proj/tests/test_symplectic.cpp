#include <doctest.h>

#include <cmath>
#include <complex>

#include "clocksta/protocol.hpp"
#include "clocksta/symplectic.hpp"
#include "test_support.hpp"

using namespace clocksta;
using testsupport::Lcg;

TEST_CASE("constant schedule reproduces the closed-form rotation") {
    const StaSchedule s(FrequencyProtocol::finite(2.0, 2.0, 3.0));
    const auto [S, traj] = propagate(s, 0.0);
    const SymplecticMap R = constant_frequency_map(2.0, 3.0);
    CHECK((S.M - R.M).max_abs() < 1e-9);
    CHECK(traj.wronskian_drift < 1e-10);
}

TEST_CASE("zero-length window gives the identity") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 1.0));
    const auto [S, traj] = propagate_window(s, 0.7, 0.3, 0.3);
    CHECK((S.M - Mat2::identity()).max_abs() == 0.0);
    CHECK(traj.steps == 0);
}

TEST_CASE("STA target is excitation-free at v = 0") {
    for (double tau : {0.2, 1.0, 5.0}) {
        const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, tau));
        const auto [S, traj] = propagate(s, 0.0);
        const BogoliubovPair bg = bogoliubov_from_symplectic(S);
        CHECK(std::abs(bg.beta) < 1e-6);
        CHECK(std::abs(std::abs(bg.alpha) - 1.0) < 1e-9);
        CHECK(traj.wronskian_drift < 1e-8);
    }
}

TEST_CASE("deeply nonadiabatic STA runs flag inverted segments") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 0.2));
    const auto [S, traj] = propagate(s, 0.0);
    CHECK(traj.unstable_segment());  // Omega_bar^2 dips negative, run still valid
    CHECK(std::fabs(S.M.det() - 1.0) < 1e-9);
}

TEST_CASE("dictionary on identity and rotation maps") {
    SymplecticMap id;
    id.omega_in = id.omega_out = 1.7;
    const BogoliubovPair b0 = bogoliubov_from_symplectic(id);
    CHECK(std::abs(b0.alpha - std::complex<double>(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(b0.beta) < 1e-15);

    const double w = 1.3, T = 0.9;
    const BogoliubovPair br = bogoliubov_from_symplectic(constant_frequency_map(w, T));
    CHECK(std::abs(br.alpha - std::exp(std::complex<double>(0.0, -w * T))) < 1e-12);
    CHECK(std::abs(br.beta) < 1e-12);
}

TEST_CASE("vacuum energy identity links beta to the covariance route") {
    Lcg rng(7);
    const double m = 1.0, w = 1.4, hbar = 1.0;
    const GaussianState vac = vacuum_state(m, w, hbar);
    const EnergyForm form{m, w, hbar};
    for (int i = 0; i < 50; ++i) {
        const SymplecticMap S = testsupport::random_symplectic(rng, w, m);
        const BogoliubovPair bg = bogoliubov_from_symplectic(S);
        const double lhs = hbar * w * std::norm(bg.beta);
        const double rhs = mean_energy(apply_map(S, vac), form) - mean_energy(vac, form);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("inverse dictionary: pinned cases and round trips") {
    BogoliubovPair unit;
    unit.omega_ref = 1.0;
    CHECK((symplectic_from_bogoliubov(unit).M - Mat2::identity()).max_abs() < 1e-15);

    BogoliubovPair squeeze;
    squeeze.alpha = std::cosh(0.3);
    squeeze.beta = std::sinh(0.3);
    squeeze.omega_ref = 1.0;
    const SymplecticMap S = symplectic_from_bogoliubov(squeeze);
    CHECK(S.M.b == doctest::Approx(0.0));
    CHECK(S.M.c == doctest::Approx(0.0));
    CHECK(S.M.a * S.M.d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(S.M.det() == doctest::Approx(1.0).epsilon(1e-12));

    Lcg rng(11);
    for (int i = 0; i < 100; ++i) {
        const SymplecticMap R = testsupport::random_symplectic(rng, 1.2, 1.0);
        const SymplecticMap back = symplectic_from_bogoliubov(bogoliubov_from_symplectic(R));
        CHECK((back.M - R.M).max_abs() < 1e-10);
    }
    for (int i = 0; i < 100; ++i) {
        const BogoliubovPair p = testsupport::random_bogoliubov(rng, 0.9);
        const BogoliubovPair back = bogoliubov_from_symplectic(symplectic_from_bogoliubov(p));
        CHECK(std::abs(back.alpha - p.alpha) < 1e-10);
        CHECK(std::abs(back.beta - p.beta) < 1e-10);
        CHECK(back.invariant_defect() < 1e-9);
    }
}

TEST_CASE("invalid inputs are rejected") {
    SymplecticMap bad;
    bad.M = Mat2::diagonal(2.0, 3.0);
    CHECK_THROWS_AS(bogoliubov_from_symplectic(bad), std::invalid_argument);

    BogoliubovPair badpair;
    badpair.alpha = 2.0;  // |alpha|^2 - |beta|^2 = 4
    CHECK_THROWS_AS(symplectic_from_bogoliubov(badpair), std::invalid_argument);

    CHECK_THROWS_AS(constant_frequency_map(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("composition of sub-window propagations matches the direct run") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 1.0));
    for (double v : {0.0, 0.15, -0.4}) {
        const auto whole = propagate(s, v);
        const auto first = propagate_window(s, v, 0.0, 0.37);
        const auto second = propagate_window(s, v, 0.37, 1.0);
        CHECK((second.first.M * first.first.M - whole.first.M).max_abs() < 1e-8);
    }
}

TEST_CASE("tolerance tightening is convergent") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 1.0));
    const auto loose = propagate(s, 0.3, {1e-8, 1e-10});
    const auto tight = propagate(s, 0.3, {1e-9, 1e-11});
    CHECK((loose.first.M - tight.first.M).max_abs() < 1e-8);
}

TEST_CASE("symplectic invariants over a (tau, v) grid") {
    for (double tau : {0.3, 1.0, 2.7}) {
        const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, tau));
        for (double v : {-1.0, -0.2, 0.0, 0.5, 1.5}) {
            const auto [S, traj] = propagate(s, v);
            CHECK(std::fabs(S.M.det() - 1.0) < 1e-9);
            CHECK(bogoliubov_from_symplectic(S).invariant_defect() < 1e-9);
        }
    }
}
