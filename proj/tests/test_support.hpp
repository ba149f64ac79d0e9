#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "clocksta/gaussian.hpp"
#include "clocksta/symplectic.hpp"

namespace testsupport {

// deterministic generator for reproducible "random" test inputs
class Lcg {
public:
    explicit Lcg(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state_(seed) {}

    double uniform() {  // in [0, 1)
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

// random element of Sp(2, R) as rotation * squeeze * rotation
inline clocksta::SymplecticMap random_symplectic(Lcg& rng, double omega_ref = 1.0,
                                                 double mass = 1.0) {
    const double th1 = rng.range(0.0, 6.28318530717958647692);
    const double th2 = rng.range(0.0, 6.28318530717958647692);
    const double r = rng.range(-0.8, 0.8);
    const auto rot = [](double th) {
        return clocksta::Mat2{std::cos(th), std::sin(th), -std::sin(th), std::cos(th)};
    };
    clocksta::SymplecticMap S;
    S.M = rot(th1) * clocksta::Mat2::diagonal(std::exp(r), std::exp(-r)) * rot(th2);
    S.mass = mass;
    S.omega_in = omega_ref;
    S.omega_out = omega_ref;
    return S;
}

// random physical Gaussian state (possibly mixed), purity 1/nu
inline clocksta::GaussianState random_state(Lcg& rng, double hbar = 1.0, double mass = 1.0) {
    const double nu = rng.range(1.0, 3.0);
    clocksta::GaussianState s = clocksta::vacuum_state(mass, rng.range(0.5, 2.0), hbar);
    s.cov = s.cov * nu;
    const clocksta::SymplecticMap S = random_symplectic(rng, 1.0, mass);
    s = clocksta::apply_map(S, s);
    s.mean = {rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)};
    return s;
}

// random Bogoliubov pair with |alpha|^2 - |beta|^2 = 1
inline clocksta::BogoliubovPair random_bogoliubov(Lcg& rng, double omega_ref = 1.0,
                                                  double mass = 1.0) {
    const double r = rng.range(0.0, 1.2);
    clocksta::BogoliubovPair p;
    p.alpha = std::polar(std::cosh(r), rng.range(0.0, 6.28318530717958647692));
    p.beta = std::polar(std::sinh(r), rng.range(0.0, 6.28318530717958647692));
    p.omega_ref = omega_ref;
    p.mass = mass;
    return p;
}

}  // namespace testsupport
