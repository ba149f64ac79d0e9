#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clocksta/protocol.hpp"

using namespace clocksta;

namespace {

constexpr double kPi = 3.14159265358979323846;

// high-precision finite differences on omega(t) = sqrt(omega_sq(t)), used as an
// independent route to the STA frequency
double sta_freq_sq_fd(const FrequencyProtocol& p, double t, double h) {
    const auto omega = [&](double s) { return std::sqrt(p.omega_sq(s, 0)); };
    const double w = omega(t);
    const double wdot =
        (-omega(t + 2 * h) + 8 * omega(t + h) - 8 * omega(t - h) + omega(t - 2 * h)) / (12 * h);
    const double wddot = (-omega(t + 2 * h) + 16 * omega(t + h) - 30 * w + 16 * omega(t - h) -
                          omega(t - 2 * h)) /
                         (12 * h * h);
    return w * w + 0.5 * wddot / w - 0.75 * (wdot / w) * (wdot / w);
}

}  // namespace

TEST_CASE("finite protocol endpoint and interior values") {
    const auto p = FrequencyProtocol::finite(1.0, 2.0, 1.0);
    CHECK(p.omega_sq(0.0) == doctest::Approx(1.0));
    CHECK(p.omega_sq(1.0) == doctest::Approx(4.0));
    // quintic at s = 1/2: 1 + 3 (10/8 - 15/16 + 6/32) = 2.5
    CHECK(p.omega_sq(0.5) == doctest::Approx(2.5).epsilon(1e-14));
    // endpoint derivatives vanish exactly by construction
    CHECK(p.omega_sq(0.0, 1) == 0.0);
    CHECK(p.omega_sq(0.0, 2) == 0.0);
    CHECK(p.omega_sq(1.0, 1) == 0.0);
    CHECK(p.omega_sq(1.0, 2) == 0.0);
    // d(omega^2)/dt at s = 1/2 equals 3 * 1.875
    CHECK(p.omega_sq(0.5, 1) == doctest::Approx(5.625).epsilon(1e-14));
}

TEST_CASE("finite protocol rejects bad parameters") {
    CHECK_THROWS_AS(FrequencyProtocol::finite(0.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProtocol::finite(1.0, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProtocol::finite(1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("infinite protocol midpoint, window, and degenerate cases") {
    const auto p = FrequencyProtocol::infinite(1.0, 2.0, 1.0, 1e-3);
    CHECK(p.omega_sq(0.0) == doctest::Approx(2.5).epsilon(1e-14));
    // smallest window with a relative tail below eps: T = tan(pi/2 - pi eps)
    CHECK(p.t_end() == doctest::Approx(std::tan(kPi / 2 - kPi * 1e-3)).epsilon(1e-12));
    CHECK(p.t_begin() == doctest::Approx(-p.t_end()));
    const double tail = std::fabs(p.omega_sq(p.t_end()) - 4.0);
    CHECK(tail <= doctest::Approx(1e-3 * 3.0).epsilon(1e-9));

    const auto flat = FrequencyProtocol::infinite(1.5, 1.5, 2.0, 1e-3);
    for (double t : {-1.0, 0.0, 1.0}) CHECK(flat.omega_sq(t) == doctest::Approx(2.25));

    CHECK_THROWS_AS(FrequencyProtocol::infinite(1.0, 2.0, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProtocol::infinite(1.0, 2.0, 1.0, 0.7), std::invalid_argument);
}

TEST_CASE("schedule evaluation window and derivative checks") {
    const auto p = FrequencyProtocol::finite(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(p.omega_sq(-0.1), std::domain_error);
    CHECK_THROWS_AS(p.omega_sq(1.1), std::domain_error);
    CHECK_THROWS_AS(p.omega_sq(0.5, 4), std::invalid_argument);

    const auto pinf = FrequencyProtocol::infinite(1.0, 2.0, 1.0, 1e-3);
    CHECK(std::fabs(pinf.omega_sq(pinf.t_end(), 1)) < 1e-5);
}

TEST_CASE("analytic derivatives match finite differences on a grid") {
    for (const auto& p : {FrequencyProtocol::finite(1.0, 2.0, 1.3),
                          FrequencyProtocol::infinite(1.0, 2.0, 0.7, 2e-2)}) {
        const double span = p.t_end() - p.t_begin();
        const double h = 1e-5 * span;
        double max1 = 0.0, max2 = 0.0;
        double scale1 = 0.0, scale2 = 0.0;
        std::vector<double> ts;
        for (int i = 1; i < 1000; ++i) ts.push_back(p.t_begin() + span * i / 1000.0);
        for (double t : ts) {
            scale1 = std::max(scale1, std::fabs(p.omega_sq(t, 1)));
            scale2 = std::max(scale2, std::fabs(p.omega_sq(t, 2)));
        }
        for (double t : ts) {
            if (t - 2 * h < p.t_begin() || t + 2 * h > p.t_end()) continue;
            const double fd1 = (p.omega_sq(t + h) - p.omega_sq(t - h)) / (2 * h);
            const double fd2 =
                (p.omega_sq(t + h) - 2 * p.omega_sq(t) + p.omega_sq(t - h)) / (h * h);
            max1 = std::max(max1, std::fabs(fd1 - p.omega_sq(t, 1)));
            max2 = std::max(max2, std::fabs(fd2 - p.omega_sq(t, 2)));
        }
        CHECK(max1 / scale1 < 1e-5);
        CHECK(max2 / scale2 < 1e-4);  // second difference carries more round-off
    }
}

TEST_CASE("STA frequency hits the bare schedule at the endpoints") {
    for (double tau : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, tau));
        CHECK(s.frequency_sq(0.0) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(s.frequency_sq(tau) == doctest::Approx(4.0).epsilon(1e-6));
    }
    const StaSchedule si(FrequencyProtocol::infinite(1.0, 2.0, 1.0, 1e-4));
    CHECK(si.frequency_sq(si.t_begin()) == doctest::Approx(1.0).epsilon(1e-3 * 3));
    CHECK(si.frequency_sq(si.t_end()) == doctest::Approx(4.0).epsilon(1e-3 * 3));
}

TEST_CASE("STA frequency matches the finite-difference oracle in the interior") {
    const auto p = FrequencyProtocol::finite(1.0, 2.0, 1.0);
    const StaSchedule s(p);
    for (double t : {0.21, 0.4, 0.55, 0.73, 0.9}) {
        const double oracle = sta_freq_sq_fd(p, t, 1e-3);
        CHECK(s.frequency_sq(t) == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("constant schedule: STA equals bare and the deviation vanishes") {
    const StaSchedule s(FrequencyProtocol::finite(1.5, 1.5, 2.0));
    for (double t : {0.0, 0.4, 1.1, 2.0}) {
        CHECK(s.frequency_sq(t) == doctest::Approx(2.25).epsilon(1e-14));
        CHECK(s.deviation_sq(t) == doctest::Approx(0.0));
        CHECK(s.effective_frequency_sq(t, 3.7) == doctest::Approx(2.25).epsilon(1e-14));
    }
}

TEST_CASE("deviation profile equals t times the STA slope") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 1.0));
    CHECK(s.deviation_sq(0.0) == 0.0);
    const double h = 1e-3;
    for (double t : {0.3, 0.5, 0.8}) {
        const double fd = (-s.frequency_sq(t + 2 * h) + 8 * s.frequency_sq(t + h) -
                           8 * s.frequency_sq(t - h) + s.frequency_sq(t - 2 * h)) /
                          (12 * h);
        CHECK(s.deviation_sq(t) == doctest::Approx(t * fd).epsilon(1e-6));
    }
}

TEST_CASE("effective frequency is exactly linear in v") {
    const StaSchedule s(FrequencyProtocol::finite(1.0, 2.0, 1.0));
    const double t = 0.6;
    const double base = s.frequency_sq(t);
    const double dev = s.deviation_sq(t);
    for (double v : {-1.0, -0.5, 0.5, 1.0})
        CHECK(s.effective_frequency_sq(t, v) - base == doctest::Approx(v * dev).epsilon(1e-14));
    CHECK(s.effective_frequency_sq(0.0, 2.5) == doctest::Approx(s.frequency_sq(0.0)));
}

TEST_CASE("endpoint validation") {
    const auto fin = FrequencyProtocol::finite(1.0, 2.0, 1.0);
    const auto rep = validate_endpoints(fin, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.omega_dot_begin == 0.0);
    CHECK(rep.omega_ddot_end == 0.0);

    // arctan tail bound: |omega^2 derivative| <= (Delta/pi.tau) (pi eps)^2
    const double eps = 1e-3;
    const auto inf = FrequencyProtocol::infinite(1.0, 2.0, 1.0, eps);
    const auto repi = validate_endpoints(inf, 1.0);
    const double bound = (3.0 / kPi) * (kPi * eps) * (kPi * eps) / (2.0 * 1.0);
    CHECK(std::fabs(repi.omega_dot_end) <= bound * 1.001);
    CHECK(std::fabs(repi.omega_ddot_end) <= bound);

    // kinked tabulated schedule fails a tight endpoint check
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 40; ++i) {
        const double t = i / 40.0;
        samples.emplace_back(t, 1.0 + std::fabs(t - 0.5));
    }
    const auto tab = FrequencyProtocol::tabulated(samples);
    CHECK_FALSE(validate_endpoints(tab, 1e-6).pass);
}

TEST_CASE("tabulated schedule reproduces its source curve") {
    const auto src = FrequencyProtocol::finite(1.0, 2.0, 1.0);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 500; ++i) {
        const double t = i / 500.0;
        samples.emplace_back(t, src.omega_sq(t));
    }
    const auto tab = FrequencyProtocol::tabulated(samples);
    CHECK(tab.kind() == ProtocolKind::tabulated);
    CHECK(tab.omega_i() == doctest::Approx(1.0));
    CHECK(tab.omega_f() == doctest::Approx(2.0));
    for (double t : {0.1, 0.33, 0.5, 0.77, 0.95}) {
        CHECK(tab.omega_sq(t) == doctest::Approx(src.omega_sq(t)).epsilon(1e-8));
        CHECK(tab.omega_sq(t, 1) == doctest::Approx(src.omega_sq(t, 1)).epsilon(1e-4));
    }
    const StaSchedule sta_tab(tab), sta_src(src);
    CHECK(sta_tab.frequency_sq(0.5) == doctest::Approx(sta_src.frequency_sq(0.5)).epsilon(1e-4));

    CHECK_THROWS_AS(FrequencyProtocol::tabulated({{0.0, 1.0}, {1.0, 2.0}}),
                    std::invalid_argument);
}
