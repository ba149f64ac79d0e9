#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include "clocksta/mat2.hpp"
#include "clocksta/ode.hpp"
#include "clocksta/protocol.hpp"

namespace clocksta {

// Linear quadrature map R(t_f) = S R(t_i), det S = 1. Carries the mass and the
// ladder reference frequencies at both window edges for the Bogoliubov dictionary;
// for maps between equal frequencies omega_in == omega_out.
struct SymplecticMap {
    Mat2 M = Mat2::identity();
    double mass = 1.0;
    double omega_in = 1.0;
    double omega_out = 1.0;

    double det() const { return M.det(); }
    // |S^T J S - J| deviation, equivalent to |det - 1| in one mode
    double symplectic_defect() const { return std::fabs(M.det() - 1.0); }
};

struct TrajectorySolution {
    // final values of the two fundamental solutions of ydd + Omega_v^2(t) y = 0
    double u = 1.0, du = 0.0, w = 0.0, dw = 1.0;
    // max over checkpoints of |u wd - ud w - 1|
    double wronskian_drift = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    // smallest effective frequency squared seen during integration; negative
    // values mark locally inverted (unstable) segments, which are allowed
    double min_effective_freq_sq = 0.0;
    bool unstable_segment() const { return min_effective_freq_sq < 0.0; }
};

struct BogoliubovPair {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    double omega_ref = 1.0;
    double mass = 1.0;

    double invariant_defect() const {
        return std::fabs(std::norm(alpha) - std::norm(beta) - 1.0);
    }
};

// Integrates the two fundamental solutions of ydd + Omega_v^2(t) y = 0 across the
// schedule window and assembles S_v = [[u, w/m], [m ud, wd]]. Wronskian drift is
// recorded at >= 32 equally spaced checkpoints; drift above 1e-6 raises an
// accuracy error, step-size underflow raises a stiffness error.
std::pair<SymplecticMap, TrajectorySolution> propagate(const StaSchedule& schedule, double v,
                                                       OdeTolerances tol = {});

// Same, over a sub-window [t0, t1] of the schedule.
std::pair<SymplecticMap, TrajectorySolution> propagate_window(const StaSchedule& schedule,
                                                              double v, double t0, double t1,
                                                              OdeTolerances tol = {});

// Ladder-basis coefficients of the map: alpha = [a + d + i(c/(m w) - m w b)]/2,
// beta = [a - d + i(c/(m w) + m w b)]/2 at the reference omega_out, after
// mode-matching the input side from omega_in to omega_out. For equal references
// this is the plain single-frequency dictionary.
BogoliubovPair bogoliubov_from_symplectic(const SymplecticMap& S);

// Inverse dictionary at a single reference frequency; round-trips with
// bogoliubov_from_symplectic.
SymplecticMap symplectic_from_bogoliubov(const BogoliubovPair& pair);

// Closed-form rotation generated by a constant frequency omega0 over `duration`.
SymplecticMap constant_frequency_map(double omega0, double duration, double mass = 1.0);

}  // namespace clocksta
