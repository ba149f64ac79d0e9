#include "clocksta/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clocksta {

namespace {

constexpr int kWronskianCheckpoints = 32;
constexpr double kWronskianAcceptLimit = 1e-6;
// gate for map inputs; matches the propagation accuracy limit (long-window
// integrations accumulate dissipative round-off above the 1e-9 grid invariant)
constexpr double kSymplecticTol = 1e-6;
constexpr double kBogoliubovTol = 1e-6;

}  // namespace

std::pair<SymplecticMap, TrajectorySolution> propagate_window(const StaSchedule& schedule,
                                                              double v, double t0, double t1,
                                                              OdeTolerances tol) {
    TrajectorySolution traj;
    traj.min_effective_freq_sq = schedule.effective_frequency_sq(t0, v);

    // state = (u, ud, w, wd)
    std::array<double, 4> y{1.0, 0.0, 0.0, 1.0};
    const auto rhs = [&schedule, v, &traj](double t, const std::array<double, 4>& s,
                                           std::array<double, 4>& ds) {
        const double k = schedule.effective_frequency_sq(t, v);
        traj.min_effective_freq_sq = std::min(traj.min_effective_freq_sq, k);
        ds[0] = s[1];
        ds[1] = -k * s[0];
        ds[2] = s[3];
        ds[3] = -k * s[2];
    };
    const auto watch = [&traj](double, const std::array<double, 4>& s) {
        const double drift = std::fabs(s[0] * s[3] - s[1] * s[2] - 1.0);
        traj.wronskian_drift = std::max(traj.wronskian_drift, drift);
    };

    const StepStats stats =
        integrate_checkpointed<4>(rhs, t0, t1, y, kWronskianCheckpoints, watch, tol);
    traj.u = y[0];
    traj.du = y[1];
    traj.w = y[2];
    traj.dw = y[3];
    traj.steps = stats.steps;
    traj.rejected = stats.rejected;
    if (traj.wronskian_drift > kWronskianAcceptLimit)
        throw std::runtime_error("propagate: Wronskian drift above accuracy limit");

    const double m = schedule.mass();
    SymplecticMap S;
    S.M = {traj.u, traj.w / m, m * traj.du, traj.dw};
    S.mass = m;
    S.omega_in = std::sqrt(schedule.protocol().omega_sq(t0, 0));
    S.omega_out = std::sqrt(schedule.protocol().omega_sq(t1, 0));
    return {S, traj};
}

std::pair<SymplecticMap, TrajectorySolution> propagate(const StaSchedule& schedule, double v,
                                                       OdeTolerances tol) {
    return propagate_window(schedule, v, schedule.t_begin(), schedule.t_end(), tol);
}

BogoliubovPair bogoliubov_from_symplectic(const SymplecticMap& S) {
    if (S.symplectic_defect() > kSymplecticTol)
        throw std::invalid_argument("bogoliubov_from_symplectic: map is not symplectic");
    // Mode matching: rescale the input quadratures so the omega_in vacuum becomes
    // the omega_out vacuum, then read off the single-frequency dictionary.
    Mat2 M = S.M;
    if (S.omega_in != S.omega_out) {
        const double lam = std::sqrt(S.omega_out / S.omega_in);
        M = M * Mat2::diagonal(lam, 1.0 / lam);
    }
    const double mw = S.mass * S.omega_out;
    BogoliubovPair pair;
    pair.alpha = 0.5 * std::complex<double>(M.a + M.d, M.c / mw - mw * M.b);
    pair.beta = 0.5 * std::complex<double>(M.a - M.d, M.c / mw + mw * M.b);
    pair.omega_ref = S.omega_out;
    pair.mass = S.mass;
    return pair;
}

SymplecticMap symplectic_from_bogoliubov(const BogoliubovPair& pair) {
    if (pair.invariant_defect() > kBogoliubovTol)
        throw std::invalid_argument(
            "symplectic_from_bogoliubov: |alpha|^2 - |beta|^2 = 1 violated");
    const double mw = pair.mass * pair.omega_ref;
    const std::complex<double> ap = pair.alpha + pair.beta;
    const std::complex<double> am = pair.alpha - pair.beta;
    SymplecticMap S;
    S.M = {ap.real(), -am.imag() / mw, mw * ap.imag(), am.real()};
    S.mass = pair.mass;
    S.omega_in = pair.omega_ref;
    S.omega_out = pair.omega_ref;
    return S;
}

SymplecticMap constant_frequency_map(double omega0, double duration, double mass) {
    if (!(omega0 > 0.0))
        throw std::invalid_argument("constant_frequency_map: omega0 must be positive");
    const double th = omega0 * duration;
    SymplecticMap S;
    S.M = {std::cos(th), std::sin(th) / (mass * omega0), -mass * omega0 * std::sin(th),
           std::cos(th)};
    S.mass = mass;
    S.omega_in = omega0;
    S.omega_out = omega0;
    return S;
}

}  // namespace clocksta
