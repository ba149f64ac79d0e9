#pragma once

#include <complex>
#include <optional>
#include <string>

#include "clocksta/averages.hpp"
#include "clocksta/oracle.hpp"
#include "clocksta/perturbation.hpp"
#include "clocksta/report.hpp"

namespace clocksta {

// Closed-form (small-noise) figures of merit for one parameter point, assembled
// from the perturbative map. mu metadata is carried through to the report.
ObservableReport closed_form_report(const StaSchedule& schedule, const GaussianState& input,
                                    const ClockSpec& clock, const PerturbativeMap& pmap,
                                    std::complex<double> mu = 0.0);

// Result wrapper for sweep points: closed forms are withheld out of regime.
struct PointResult {
    std::string status = "ok";  // ok | out_of_regime | error
    std::string detail;
    std::optional<ObservableReport> report;
};

PointResult guarded_closed_form_report(const StaSchedule& schedule, const GaussianState& input,
                                       const ClockSpec& clock, const PerturbativeMap& pmap,
                                       std::complex<double> mu = 0.0);

PointResult guarded_oracle_report(const StaSchedule& schedule, const GaussianState& input,
                                  const ClockSpec& clock, int n, OdeTolerances tol,
                                  std::complex<double> mu = 0.0);

}  // namespace clocksta
