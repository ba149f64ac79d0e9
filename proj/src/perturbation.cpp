#include "clocksta/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clocksta {

namespace {

constexpr int kCheckpoints = 32;
constexpr double kWronskianAcceptLimit = 1e-6;

Mat2 sym_bracket(const Mat2& x, const Mat2& y) {
    // x^T J y + y^T J x
    const Mat2 J = Mat2::symplectic_form();
    return x.transpose() * J * y + y.transpose() * J * x;
}

struct Dictionary {
    double mw;          // mass * omega_out
    double lam;         // mode-matching scale sqrt(omega_out / omega_in)

    // alpha/beta parts of the (linear) dictionary applied to a map direction
    std::complex<double> alpha(const Mat2& X) const {
        const Mat2 M = X * Mat2::diagonal(lam, 1.0 / lam);
        return 0.5 * std::complex<double>(M.a + M.d, M.c / mw - mw * M.b);
    }
    std::complex<double> beta(const Mat2& X) const {
        const Mat2 M = X * Mat2::diagonal(lam, 1.0 / lam);
        return 0.5 * std::complex<double>(M.a - M.d, M.c / mw + mw * M.b);
    }
};

PerturbativeMap expand_hierarchy(const StaSchedule& schedule, OdeTolerances tol) {
    // state: (u0,du0, u1,du1, u2,du2, w0,dw0, w1,dw1, w2,dw2)
    std::array<double, 12> y{};
    y[0] = 1.0;   // u0
    y[7] = 1.0;   // dw0
    const auto rhs = [&schedule](double t, const std::array<double, 12>& s,
                                 std::array<double, 12>& ds) {
        const double k0 = schedule.frequency_sq(t);
        const double dk = schedule.deviation_sq(t);
        for (int base : {0, 6}) {
            ds[base + 0] = s[base + 1];
            ds[base + 1] = -k0 * s[base + 0];
            ds[base + 2] = s[base + 3];
            ds[base + 3] = -k0 * s[base + 2] - dk * s[base + 0];
            ds[base + 4] = s[base + 5];
            ds[base + 5] = -k0 * s[base + 4] - dk * s[base + 2];
        }
    };
    PerturbativeMap p;
    const auto watch = [&p](double, const std::array<double, 12>& s) {
        const double drift = std::fabs(s[0] * s[7] - s[1] * s[6] - 1.0);
        p.wronskian_drift = std::max(p.wronskian_drift, drift);
    };
    const StepStats stats = integrate_checkpointed<12>(rhs, schedule.t_begin(), schedule.t_end(),
                                                       y, kCheckpoints, watch, tol);
    const double m = schedule.mass();
    p.S0 = {y[0], y[6] / m, m * y[1], y[7]};
    p.S1 = {y[2], y[8] / m, m * y[3], y[9]};
    p.S2 = Mat2{y[4], y[10] / m, m * y[5], y[11]} * 2.0;
    p.steps = stats.steps;
    p.rejected = stats.rejected;
    return p;
}

PerturbativeMap expand_dyson(const StaSchedule& schedule, OdeTolerances tol) {
    // state: (u0,du0, w0,dw0, Y1[4], Y2[4]) with Y1 = int B, Y2 = int B Y1 and
    // B = S0^{-1} A1 S0 = deltaOmega^2 [[u0 w0, w0^2/m], [-m u0^2, -u0 w0]]
    std::array<double, 12> y{};
    y[0] = 1.0;  // u0
    y[3] = 1.0;  // dw0
    const double m = schedule.mass();
    const auto rhs = [&schedule, m](double t, const std::array<double, 12>& s,
                                    std::array<double, 12>& ds) {
        const double k0 = schedule.frequency_sq(t);
        const double dk = schedule.deviation_sq(t);
        const double u0 = s[0], w0 = s[2];
        ds[0] = s[1];
        ds[1] = -k0 * u0;
        ds[2] = s[3];
        ds[3] = -k0 * w0;
        const Mat2 B{dk * u0 * w0, dk * w0 * w0 / m, -dk * m * u0 * u0, -dk * u0 * w0};
        ds[4] = B.a;
        ds[5] = B.b;
        ds[6] = B.c;
        ds[7] = B.d;
        const Mat2 Y1{s[4], s[5], s[6], s[7]};
        const Mat2 BY = B * Y1;
        ds[8] = BY.a;
        ds[9] = BY.b;
        ds[10] = BY.c;
        ds[11] = BY.d;
    };
    PerturbativeMap p;
    const auto watch = [&p](double, const std::array<double, 12>& s) {
        const double drift = std::fabs(s[0] * s[3] - s[1] * s[2] - 1.0);
        p.wronskian_drift = std::max(p.wronskian_drift, drift);
    };
    const StepStats stats = integrate_checkpointed<12>(rhs, schedule.t_begin(), schedule.t_end(),
                                                       y, kCheckpoints, watch, tol);
    p.S0 = {y[0], y[2] / m, m * y[1], y[3]};
    const Mat2 Y1{y[4], y[5], y[6], y[7]};
    const Mat2 Y2{y[8], y[9], y[10], y[11]};
    p.S1 = p.S0 * Y1;
    p.S2 = p.S0 * Y2 * 2.0;
    p.steps = stats.steps;
    p.rejected = stats.rejected;
    return p;
}

}  // namespace

double PerturbativeMap::first_order_defect() const { return sym_bracket(S1, S0).max_abs(); }

double PerturbativeMap::second_order_defect() const {
    return (sym_bracket(S2, S0) +
            2.0 * (S1.transpose() * Mat2::symplectic_form() * S1)).max_abs();
}

SymplecticMap PerturbativeMap::map_at(double v) const {
    SymplecticMap S;
    S.M = S0 + v * S1 + (0.5 * v * v) * S2;
    S.mass = mass;
    S.omega_in = omega_in;
    S.omega_out = omega_out;
    return S;
}

SymplecticMap PerturbativeMap::zeroth_order() const {
    SymplecticMap S;
    S.M = S0;
    S.mass = mass;
    S.omega_in = omega_in;
    S.omega_out = omega_out;
    return S;
}

PerturbativeMap expand_map(const StaSchedule& schedule, ExpansionMethod method,
                           OdeTolerances tol) {
    PerturbativeMap p = (method == ExpansionMethod::hierarchy) ? expand_hierarchy(schedule, tol)
                                                               : expand_dyson(schedule, tol);
    if (p.wronskian_drift > kWronskianAcceptLimit)
        throw std::runtime_error("expand_map: Wronskian drift above accuracy limit");
    p.method = method;
    p.mass = schedule.mass();
    p.omega_in = schedule.omega_in();
    p.omega_out = schedule.omega_out();
    p.tau = schedule.protocol().tau();
    p.kind = schedule.protocol().kind();
    return p;
}

LinearResponse linear_response(const PerturbativeMap& pmap, double beta0_tol) {
    const Dictionary dict{pmap.mass * pmap.omega_out,
                          std::sqrt(pmap.omega_out / pmap.omega_in)};
    LinearResponse lr;
    lr.alpha0 = dict.alpha(pmap.S0);
    lr.beta0 = dict.beta(pmap.S0);
    lr.alpha1 = dict.alpha(pmap.S1);
    lr.beta1 = std::complex<double>(0.0, -1.0) * dict.beta(pmap.S1);
    if (std::abs(lr.beta0) > beta0_tol)
        throw std::runtime_error(
            "linear_response: |beta0| above tolerance, schedule misses its target");
    return lr;
}

ExpansionResidual check_expansion(const StaSchedule& schedule, const PerturbativeMap& pmap,
                                  double v_probe, OdeTolerances tol) {
    ExpansionResidual res;
    const auto eval = [&](double v) {
        const auto [S, traj] = propagate(schedule, v, tol);
        return (S.M - pmap.map_at(v).M).max_abs();
    };
    res.plus = eval(v_probe);
    res.minus = eval(-v_probe);
    return res;
}

}  // namespace clocksta
