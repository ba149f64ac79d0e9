#include "clocksta/averages.hpp"

#include <cmath>

namespace clocksta {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 symmetrized(const Mat2& m) {
    const double off = 0.5 * (m.b + m.c);
    return {m.a, off, off, m.d};
}

}  // namespace

ClockSpec ClockSpec::from_momentum_spread(double pointer_mass, double momentum_sq) {
    if (!(pointer_mass > 0.0) || !(momentum_sq >= 0.0))
        throw std::invalid_argument("ClockSpec: pointer_mass > 0 and momentum_sq >= 0 required");
    return {std::sqrt(momentum_sq) / pointer_mass};
}

MomentExpansion expand_moments(const PerturbativeMap& pmap, const GaussianState& input) {
    const Mat2& Vi = input.cov;
    MomentExpansion mx;
    mx.V0 = congruence(pmap.S0, Vi);
    mx.V1 = symmetrized(pmap.S1 * Vi * pmap.S0.transpose() +
                        pmap.S0 * Vi * pmap.S1.transpose());
    mx.V2 = symmetrized(pmap.S2 * Vi * pmap.S0.transpose() +
                        pmap.S0 * Vi * pmap.S2.transpose() +
                        2.0 * (pmap.S1 * Vi * pmap.S1.transpose()));
    mx.d0 = pmap.S0 * input.mean;
    mx.d1 = pmap.S1 * input.mean;
    mx.d2 = pmap.S2 * input.mean;
    return mx;
}

KernelCoefficients kernel_coefficients(const PerturbativeMap& pmap, const GaussianState& input) {
    const MomentExpansion mx = expand_moments(pmap, input);
    const double det0 = mx.V0.det();
    if (!(det0 > 0.0))
        throw std::domain_error("kernel_coefficients: degenerate target covariance");
    const Mat2 V0inv = mx.V0.inverse();
    const Mat2 Q = V0inv * mx.V1;
    const double trQ2 = (Q * Q).trace();
    const double disp = 0.5 * bilinear(mx.d1, V0inv, mx.d1);
    KernelCoefficients kc;
    kc.b = 0.25 * Q.trace();
    kc.a = 0.25 * (V0inv * mx.V2).trace() - 0.125 * trQ2 + disp;
    kc.c = 0.125 * trQ2 + disp;
    kc.P0 = input.hbar / std::sqrt(4.0 * det0);
    return kc;
}

MixtureClosedForm closed_form_mixture(const KernelCoefficients& kc, const ClockSpec& clock) {
    const double s2 = clock.sigma_v * clock.sigma_v;
    const double ap = 1.0 + kc.a * s2;
    const double cs = kc.c * s2;
    const double D = ap * ap - cs * cs;
    if (!(D > 0.0) || !(ap > 0.0))
        throw OutOfRegimeError("closed_form_mixture: sigma_v too large for the quadratic kernel");
    const double b2s = kc.b * kc.b * s2;
    MixtureClosedForm out;
    const double purity_ratio = std::exp(b2s * (1.0 + (kc.a + kc.c) * s2) / D) / std::sqrt(D);
    out.P_mix = kc.P0 * purity_ratio;
    out.F_HS = std::exp(0.5 * b2s / ap) / std::sqrt(ap);
    out.delta_S2 = -std::log(purity_ratio);
    out.S_L = 1.0 - purity_ratio;
    return out;
}

EnergySusceptibility energy_susceptibility(const PerturbativeMap& pmap,
                                           const GaussianState& input, const EnergyForm& form) {
    const MomentExpansion mx = expand_moments(pmap, input);
    const Mat2 G = form.matrix();
    EnergySusceptibility s;
    s.E1 = 0.5 * (G * mx.V1).trace() + bilinear(mx.d0, G, mx.d1);
    s.chi_E = 0.25 * (G * mx.V2).trace() + 0.5 * bilinear(mx.d1, G, mx.d1) +
              0.5 * bilinear(mx.d0, G, mx.d2);
    // v^2 coefficient of Var(H_f) on the expanded moments, doubled
    const Mat2 GV0 = G * mx.V0, GV1 = G * mx.V1, GV2 = G * mx.V2;
    s.W2 = (GV1 * GV1).trace() + (GV0 * GV2).trace() +
           2.0 * bilinear(mx.d2, GV0 * G, mx.d0) + 4.0 * bilinear(mx.d1, GV1 * G, mx.d0) +
           2.0 * bilinear(mx.d1, GV0 * G, mx.d1) + bilinear(mx.d0, GV2 * G, mx.d0);
    return s;
}

AveragedEnergyStats averaged_energy_stats(const EnergySusceptibility& susc,
                                          const ClockSpec& clock) {
    if (!(clock.sigma_v >= 0.0))
        throw std::invalid_argument("averaged_energy_stats: sigma_v must be >= 0");
    const double s2 = clock.sigma_v * clock.sigma_v;
    return {susc.chi_E * s2, 0.5 * susc.W2 * s2, susc.E1 * susc.E1 * s2};
}

std::optional<double> tur_ratio(double S_L, double sigma_E2_bar, double delta_E_bar) {
    if (delta_E_bar == 0.0) return std::nullopt;
    return S_L * sigma_E2_bar / (delta_E_bar * delta_E_bar);
}

double coherent_tur_closed(double mu_abs, double cos_phi, double r, double X) {
    if (!(X >= 0.0))
        throw std::invalid_argument("coherent_tur_closed: X must be >= 0");
    const double mu2 = mu_abs * mu_abs;
    const double A = 1.0 + 2.0 * r * cos_phi + r * r;
    const double B = 1.0 + r * cos_phi;
    const double Y = 1.0 + 2.0 * mu2 * A;
    const double XY = X * Y;
    const double first = 4.0 * Y / (1.0 + XY + std::sqrt(1.0 + XY));
    const double second = (1.0 + 1.5 * X + 2.0 * mu2 * (1.0 + 3.0 * X * B)) /
                          ((1.0 + 2.0 * mu2 * B) * (1.0 + 2.0 * mu2 * B));
    return first * second;
}

PhaseAveragedTur phase_averaged_tur(const StaSchedule& schedule, const PerturbativeMap& pmap,
                                    const ClockSpec& clock, double mu_abs, int n_phase) {
    if (n_phase < 8)
        throw std::invalid_argument("phase_averaged_tur: n_phase must be >= 8");
    const EnergyForm form{schedule.mass(), schedule.omega_out(), schedule.hbar()};
    PhaseAveragedTur out;
    double sum = 0.0;
    int included = 0;
    for (int k = 0; k < n_phase; ++k) {
        const double phase = 2.0 * kPi * k / n_phase;
        const std::complex<double> mu = std::polar(mu_abs, phase);
        const GaussianState input =
            coherent_state(mu, schedule.mass(), schedule.omega_in(), schedule.hbar());
        const KernelCoefficients kc = kernel_coefficients(pmap, input);
        const MixtureClosedForm mix = closed_form_mixture(kc, clock);
        const EnergySusceptibility susc = energy_susceptibility(pmap, input, form);
        const AveragedEnergyStats stats = averaged_energy_stats(susc, clock);
        const auto ratio = tur_ratio(mix.S_L, stats.sigma_E2_bar, stats.delta_E_bar);
        if (ratio) {
            sum += *ratio;
            ++included;
        } else {
            ++out.excluded;
        }
    }
    if (included == 0)
        throw std::runtime_error("phase_averaged_tur: ratio undefined at every phase point");
    out.value = sum / included;
    return out;
}

}  // namespace clocksta
