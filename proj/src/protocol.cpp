#include "clocksta/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clocksta {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive(double v, const char* name) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string(name) + " must be positive");
}

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_second_derivs(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0), u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        const double p = sig * m[i - 1] + 2.0;
        m[i] = (sig - 1.0) / p;
        u[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        u[i] = (6.0 * u[i] / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) m[k] = m[k] * m[k + 1] + u[k];
    m[0] = m[n - 1] = 0.0;
    return m;
}

}  // namespace

FrequencyProtocol FrequencyProtocol::finite(double omega_i, double omega_f, double tau) {
    require_positive(omega_i, "omega_i");
    require_positive(omega_f, "omega_f");
    require_positive(tau, "tau");
    FrequencyProtocol p;
    p.kind_ = ProtocolKind::finite;
    p.omega_i_ = omega_i;
    p.omega_f_ = omega_f;
    p.tau_ = tau;
    p.t_begin_ = 0.0;
    p.t_end_ = tau;
    return p;
}

FrequencyProtocol FrequencyProtocol::infinite(double omega_i, double omega_f, double tau,
                                              double truncation_eps) {
    require_positive(omega_i, "omega_i");
    require_positive(omega_f, "omega_f");
    require_positive(tau, "tau");
    require_positive(truncation_eps, "truncation_eps");
    if (truncation_eps >= 0.5)
        throw std::invalid_argument("truncation_eps >= 0.5: window undefined");
    FrequencyProtocol p;
    p.kind_ = ProtocolKind::infinite;
    p.omega_i_ = omega_i;
    p.omega_f_ = omega_f;
    p.tau_ = tau;
    p.truncation_eps_ = truncation_eps;
    // |omega^2(T) - asymptote| = (|Delta|/pi) arctan(tau/T) < eps |Delta|
    const double T = (omega_i == omega_f) ? tau : tau / std::tan(kPi * truncation_eps);
    p.t_begin_ = -T;
    p.t_end_ = T;
    return p;
}

FrequencyProtocol FrequencyProtocol::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("tabulated protocol needs at least 4 samples");
    std::sort(samples.begin(), samples.end());
    FrequencyProtocol p;
    p.kind_ = ProtocolKind::tabulated;
    p.knots_.reserve(samples.size());
    p.values_.reserve(samples.size());
    for (const auto& [t, w2] : samples) {
        if (!p.knots_.empty() && t <= p.knots_.back())
            throw std::invalid_argument("tabulated protocol needs strictly increasing times");
        if (!(w2 > 0.0))
            throw std::invalid_argument("tabulated protocol needs omega^2 > 0 samples");
        p.knots_.push_back(t);
        p.values_.push_back(w2);
    }
    p.second_derivs_ = spline_second_derivs(p.knots_, p.values_);
    p.t_begin_ = p.knots_.front();
    p.t_end_ = p.knots_.back();
    p.tau_ = p.t_end_ - p.t_begin_;
    p.omega_i_ = std::sqrt(p.values_.front());
    p.omega_f_ = std::sqrt(p.values_.back());
    return p;
}

double FrequencyProtocol::spline_value(double t) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    hi = std::min(std::max<std::size_t>(hi, 1), knots_.size() - 1);
    const std::size_t lo = hi - 1;
    const double hgap = knots_[hi] - knots_[lo];
    const double A = (knots_[hi] - t) / hgap;
    const double B = 1.0 - A;
    return A * values_[lo] + B * values_[hi] +
           ((A * A * A - A) * second_derivs_[lo] + (B * B * B - B) * second_derivs_[hi]) *
               (hgap * hgap) / 6.0;
}

double FrequencyProtocol::omega_sq(double t, int order) const {
    if (order < 0 || order > 3)
        throw std::invalid_argument("omega_sq: derivative order must be in [0, 3]");
    const double slack = 1e-12 * std::max(1.0, std::fabs(t_end_ - t_begin_));
    if (t < t_begin_ - slack || t > t_end_ + slack)
        throw std::domain_error("omega_sq: t outside protocol window");
    t = std::clamp(t, t_begin_, t_end_);

    switch (kind_) {
        case ProtocolKind::finite: {
            const double s = t / tau_;
            const double delta = omega_f_ * omega_f_ - omega_i_ * omega_i_;
            switch (order) {
                case 0:
                    return omega_i_ * omega_i_ +
                           delta * (10.0 * s * s * s - 15.0 * s * s * s * s +
                                    6.0 * s * s * s * s * s);
                case 1:
                    return delta * (30.0 * s * s - 60.0 * s * s * s + 30.0 * s * s * s * s) / tau_;
                case 2:
                    return delta * (60.0 * s - 180.0 * s * s + 120.0 * s * s * s) / (tau_ * tau_);
                default:
                    return delta * (60.0 - 360.0 * s + 360.0 * s * s) / (tau_ * tau_ * tau_);
            }
        }
        case ProtocolKind::infinite: {
            const double s = t / tau_;
            const double delta = omega_f_ * omega_f_ - omega_i_ * omega_i_;
            const double q = 1.0 + s * s;
            switch (order) {
                case 0:
                    return 0.5 * (omega_f_ * omega_f_ + omega_i_ * omega_i_) +
                           (delta / kPi) * std::atan(s);
                case 1:
                    return (delta / kPi) / (q * tau_);
                case 2:
                    return (delta / kPi) * (-2.0 * s) / (q * q * tau_ * tau_);
                default:
                    return (delta / kPi) * (6.0 * s * s - 2.0) / (q * q * q * tau_ * tau_ * tau_);
            }
        }
        case ProtocolKind::tabulated: {
            if (order == 0) return spline_value(t);
            const double h = 1e-5 * tau_;
            // shift the stencil inside the window near the edges
            const double tc = std::clamp(t, t_begin_ + 2.0 * h, t_end_ - 2.0 * h);
            const double fm2 = spline_value(tc - 2.0 * h);
            const double fm1 = spline_value(tc - h);
            const double f0 = spline_value(tc);
            const double fp1 = spline_value(tc + h);
            const double fp2 = spline_value(tc + 2.0 * h);
            switch (order) {
                case 1:
                    return (fp1 - fm1) / (2.0 * h);
                case 2:
                    return (fp1 - 2.0 * f0 + fm1) / (h * h);
                default:
                    return (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
            }
        }
    }
    throw std::logic_error("unreachable");
}

EndpointReport validate_endpoints(const FrequencyProtocol& protocol, double tol) {
    EndpointReport rep;
    rep.tol = tol;
    const auto eval = [&](double t, double& wdot, double& wddot) {
        const double q = protocol.omega_sq(t, 0);
        const double q1 = protocol.omega_sq(t, 1);
        const double q2 = protocol.omega_sq(t, 2);
        const double w = std::sqrt(q);
        wdot = q1 / (2.0 * w);
        wddot = q2 / (2.0 * w) - q1 * q1 / (4.0 * q * w);
    };
    eval(protocol.t_begin(), rep.omega_dot_begin, rep.omega_ddot_begin);
    eval(protocol.t_end(), rep.omega_dot_end, rep.omega_ddot_end);
    rep.pass = std::fabs(rep.omega_dot_begin) <= tol && std::fabs(rep.omega_ddot_begin) <= tol &&
               std::fabs(rep.omega_dot_end) <= tol && std::fabs(rep.omega_ddot_end) <= tol;
    return rep;
}

StaSchedule::StaSchedule(FrequencyProtocol protocol, double mass, double hbar)
    : protocol_(std::move(protocol)), mass_(mass), hbar_(hbar) {
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
}

double StaSchedule::frequency_sq(double t) const {
    const double q = protocol_.omega_sq(t, 0);
    if (!(q > 0.0))
        throw std::domain_error("singular schedule: omega^2 <= 0");
    const double q1 = protocol_.omega_sq(t, 1);
    const double q2 = protocol_.omega_sq(t, 2);
    // omega^2 + omegadd/(2 omega) - (3/4)(omegad/omega)^2 written in terms of
    // q = omega^2 and its derivatives
    return q + q2 / (4.0 * q) - (5.0 / 16.0) * q1 * q1 / (q * q);
}

double StaSchedule::response(double t) const {
    const double q = protocol_.omega_sq(t, 0);
    if (!(q > 0.0))
        throw std::domain_error("singular schedule: omega^2 <= 0");
    const double q1 = protocol_.omega_sq(t, 1);
    const double q2 = protocol_.omega_sq(t, 2);
    const double q3 = protocol_.omega_sq(t, 3);
    return q1 + q3 / (4.0 * q) - (7.0 / 8.0) * q1 * q2 / (q * q) +
           (5.0 / 8.0) * q1 * q1 * q1 / (q * q * q);
}

double StaSchedule::deviation_sq(double t) const { return t * response(t); }

double StaSchedule::effective_frequency_sq(double t, double v) const {
    return frequency_sq(t) + v * deviation_sq(t);
}

double StaSchedule::omega_in() const { return std::sqrt(protocol_.omega_sq(t_begin(), 0)); }

double StaSchedule::omega_out() const { return std::sqrt(protocol_.omega_sq(t_end(), 0)); }

}  // namespace clocksta
