#pragma once

#include <complex>
#include <optional>
#include <stdexcept>

#include "clocksta/gaussian.hpp"
#include "clocksta/perturbation.hpp"

namespace clocksta {

// Gaussian clock parameter distribution P(v) with zero mean.
struct ClockSpec {
    double sigma_v = 0.0;

    // sigma_v^2 = <P^2> / M^2 for a free pointer of mass M
    static ClockSpec from_momentum_spread(double pointer_mass, double momentum_sq);
};

// Raised when sigma_v is too large for the quadratic kernel expansion.
struct OutOfRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadratic Taylor coefficients of -log K(v, v') around the target trajectory,
// K(v, v') = Tr(rho_v rho_v').
struct KernelCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double P0 = 1.0;  // purity of the v = 0 output
};

// Output moments expanded to second order in v.
struct MomentExpansion {
    Mat2 V0, V1, V2;
    Vec2 d0, d1, d2;
};

MomentExpansion expand_moments(const PerturbativeMap& pmap, const GaussianState& input);

KernelCoefficients kernel_coefficients(const PerturbativeMap& pmap, const GaussianState& input);

struct MixtureClosedForm {
    double P_mix = 1.0;
    double F_HS = 1.0;
    double delta_S2 = 0.0;
    double S_L = 0.0;
};

// Closed Gaussian averages of purity and Hilbert-Schmidt fidelity; requires
// (1 + a s^2)^2 > (c s^2)^2, otherwise throws OutOfRegimeError.
MixtureClosedForm closed_form_mixture(const KernelCoefficients& kc, const ClockSpec& clock);

struct EnergySusceptibility {
    double E1 = 0.0;     // linear response of <H_f>
    double chi_E = 0.0;  // (1/2) d^2<H_f>/dv^2 at 0
    double W2 = 0.0;     // d^2 Var(H_f)/dv^2 at 0
};

EnergySusceptibility energy_susceptibility(const PerturbativeMap& pmap,
                                           const GaussianState& input, const EnergyForm& form);

struct AveragedEnergyStats {
    double delta_E_bar = 0.0;    // chi_E sigma^2
    double sigma_E2_bar = 0.0;   // W2 sigma^2 / 2
    double var_mean_E = 0.0;     // E1^2 sigma^2
};

AveragedEnergyStats averaged_energy_stats(const EnergySusceptibility& susc,
                                          const ClockSpec& clock);

// R_E = S_L * sigma_E2_bar / delta_E_bar^2; empty when delta_E_bar vanishes.
std::optional<double> tur_ratio(double S_L, double sigma_E2_bar, double delta_E_bar);

// Coherent-state closed form in the reduced variables
// A = 1 + 2 r cos(phi) + r^2, B = 1 + r cos(phi), X = 2 sigma^2 |beta1|^2,
// Y = 1 + 2 |mu|^2 A.
double coherent_tur_closed(double mu_abs, double cos_phi, double r, double X);

struct PhaseAveragedTur {
    double value = 0.0;
    int excluded = 0;  // phase points without a defined ratio
};

// Uniform average of the first-principles R_E over arg(mu) at fixed |mu|.
PhaseAveragedTur phase_averaged_tur(const StaSchedule& schedule, const PerturbativeMap& pmap,
                                    const ClockSpec& clock, double mu_abs, int n_phase);

}  // namespace clocksta
