#pragma once

#include <utility>
#include <vector>

namespace clocksta {

enum class ProtocolKind { finite, infinite, tabulated };

// A driving schedule omega^2(t) with time derivatives on a finite working window.
class FrequencyProtocol {
public:
    // Quintic ramp between omega_i^2 and omega_f^2 on [0, tau]; first and second
    // derivatives vanish exactly at both endpoints.
    static FrequencyProtocol finite(double omega_i, double omega_f, double tau);

    // Arctan schedule on a symmetric window [-T, T], with T the smallest time at
    // which the tail deviates from its asymptote by less than
    // truncation_eps * |omega_f^2 - omega_i^2|.
    static FrequencyProtocol infinite(double omega_i, double omega_f, double tau,
                                      double truncation_eps);

    // Cubic-spline interpolation of (t, omega^2) samples; derivatives by centered
    // finite differences with step 1e-5 * duration.
    static FrequencyProtocol tabulated(std::vector<std::pair<double, double>> samples);

    // omega^2(t) or its time derivative of the given order (0..3).
    // Throws std::domain_error if t lies outside the window.
    double omega_sq(double t, int order = 0) const;

    ProtocolKind kind() const { return kind_; }
    double omega_i() const { return omega_i_; }
    double omega_f() const { return omega_f_; }
    double tau() const { return tau_; }
    double truncation_eps() const { return truncation_eps_; }
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    double duration() const { return t_end_ - t_begin_; }

private:
    FrequencyProtocol() = default;

    double spline_value(double t) const;

    ProtocolKind kind_ = ProtocolKind::finite;
    double omega_i_ = 1.0;
    double omega_f_ = 1.0;
    double tau_ = 1.0;
    double truncation_eps_ = 0.0;
    double t_begin_ = 0.0;
    double t_end_ = 1.0;
    // tabulated kind only
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> second_derivs_;
};

struct EndpointReport {
    double omega_dot_begin = 0.0;
    double omega_ddot_begin = 0.0;
    double omega_dot_end = 0.0;
    double omega_ddot_end = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Checks |d omega/dt| and |d^2 omega/dt^2| at both window endpoints against tol.
EndpointReport validate_endpoints(const FrequencyProtocol& protocol, double tol);

// STA driving built on a bare schedule, plus the clock-noise deviation profile.
// The mean clock trajectory is the unit-speed pointer, so the response function
// V(t) is the time derivative of the STA frequency and the deviation is t*V(t).
class StaSchedule {
public:
    explicit StaSchedule(FrequencyProtocol protocol, double mass = 1.0, double hbar = 1.0);

    // Omega-bar^2(t). Throws std::domain_error when omega^2(t) <= 0.
    double frequency_sq(double t) const;
    // V(t) = d/dt Omega-bar^2(t)
    double response(double t) const;
    // deltaOmega^2(t) = t * V(t)
    double deviation_sq(double t) const;
    // Omega_v^2(t) = Omega-bar^2(t) + v * deltaOmega^2(t)
    double effective_frequency_sq(double t, double v) const;

    const FrequencyProtocol& protocol() const { return protocol_; }
    double mass() const { return mass_; }
    double hbar() const { return hbar_; }
    double t_begin() const { return protocol_.t_begin(); }
    double t_end() const { return protocol_.t_end(); }

    // Instantaneous frequencies at the window edges, used as ladder references.
    double omega_in() const;
    double omega_out() const;

private:
    FrequencyProtocol protocol_;
    double mass_;
    double hbar_;
};

}  // namespace clocksta
