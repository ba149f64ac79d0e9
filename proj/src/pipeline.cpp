#include "clocksta/pipeline.hpp"

#include <cmath>

namespace clocksta {

ObservableReport closed_form_report(const StaSchedule& schedule, const GaussianState& input,
                                    const ClockSpec& clock, const PerturbativeMap& pmap,
                                    std::complex<double> mu) {
    const EnergyForm form{schedule.mass(), schedule.omega_out(), schedule.hbar()};
    const KernelCoefficients kc = kernel_coefficients(pmap, input);
    const MixtureClosedForm mix = closed_form_mixture(kc, clock);
    const EnergySusceptibility susc = energy_susceptibility(pmap, input, form);
    const AveragedEnergyStats stats = averaged_energy_stats(susc, clock);

    ObservableReport rep;
    rep.tau = pmap.tau;
    rep.sigma_v = clock.sigma_v;
    rep.mu_abs = std::abs(mu);
    rep.mu_phase = (mu == std::complex<double>(0.0)) ? 0.0 : std::arg(mu);
    rep.F_HS = mix.F_HS;
    rep.P_mix = mix.P_mix;
    rep.delta_S2 = mix.delta_S2;
    rep.S_L = mix.S_L;
    rep.delta_E_bar = stats.delta_E_bar;
    rep.sigma_E2_bar = stats.sigma_E2_bar;
    rep.var_mean_E = stats.var_mean_E;
    rep.R_E = tur_ratio(mix.S_L, stats.sigma_E2_bar, stats.delta_E_bar);
    rep.method = "closed_form";
    return rep;
}

PointResult guarded_closed_form_report(const StaSchedule& schedule, const GaussianState& input,
                                       const ClockSpec& clock, const PerturbativeMap& pmap,
                                       std::complex<double> mu) {
    PointResult pr;
    try {
        pr.report = closed_form_report(schedule, input, clock, pmap, mu);
    } catch (const OutOfRegimeError& e) {
        pr.status = "out_of_regime";
        pr.detail = e.what();
    } catch (const std::exception& e) {
        pr.status = "error";
        pr.detail = e.what();
    }
    return pr;
}

PointResult guarded_oracle_report(const StaSchedule& schedule, const GaussianState& input,
                                  const ClockSpec& clock, int n, OdeTolerances tol,
                                  std::complex<double> mu) {
    PointResult pr;
    try {
        ObservableReport rep = mixture_observables_oracle(schedule, input, clock, n, tol);
        rep.mu_abs = std::abs(mu);
        rep.mu_phase = (mu == std::complex<double>(0.0)) ? 0.0 : std::arg(mu);
        pr.report = rep;
    } catch (const std::exception& e) {
        pr.status = "error";
        pr.detail = e.what();
    }
    return pr;
}

}  // namespace clocksta
