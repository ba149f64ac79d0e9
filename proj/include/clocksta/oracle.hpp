#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "clocksta/averages.hpp"
#include "clocksta/gaussian.hpp"
#include "clocksta/protocol.hpp"
#include "clocksta/report.hpp"

namespace clocksta {

// Nodes and weights for int dv P(v) f(v) with P a centered Gaussian of standard
// deviation sigma_v; weights are normalized to sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadratureRule gauss_hermite(int n, double sigma_v);
};

// Weighted sum approximating the clock average of f; spectrally accurate for
// smooth f. Throws if f is non-finite at any node (reporting the node).
double clock_average(const std::function<double(double)>& f, const ClockSpec& clock, int n);

// Energy moments of the state obtained by evolving a coherent state mu under the
// Bogoliubov map (alpha, beta), measured with H = hbar omega (n + 1/2) in the
// final ladder basis. Frozen closed form from normal-ordering algebra:
//   <H>   = hbar w [ (|a|^2+|b|^2)|mu|^2 + |b|^2 + 2 Re(a* b conj(mu)^2) + 1/2 ]
//   Var H = (hbar w)^2 [ A^2 |mu|^2 + 4 A Re(K conj(mu)^2) + |K|^2 (4|mu|^2+2) ]
// with A = |a|^2 + |b|^2 and K = a* b.
struct EnergyMoments {
    double mean = 0.0;
    double variance = 0.0;
};

EnergyMoments ladder_energy_moments(std::complex<double> alpha, std::complex<double> beta,
                                    std::complex<double> mu, double omega_f, double hbar = 1.0);

// Propagated quadrature ensemble for one (schedule, clock, n) combination; the
// node maps are computed once and can be reused across input states.
class MixtureEnsemble {
public:
    MixtureEnsemble(const StaSchedule& schedule, const ClockSpec& clock, int n,
                    OdeTolerances tol = {});

    // Assembles all figures of merit from the per-node output states
    // (n propagations were done upfront, n^2 overlaps per call).
    ObservableReport observables(const GaussianState& input) const;

    const QuadratureRule& rule() const { return rule_; }
    const SymplecticMap& target_map() const { return target_; }
    const std::vector<SymplecticMap>& node_maps() const { return maps_; }

private:
    QuadratureRule rule_;
    SymplecticMap target_;
    std::vector<SymplecticMap> maps_;
    double tau_ = 0.0;
    double sigma_v_ = 0.0;
    double mass_ = 1.0;
    double omega_out_ = 1.0;
    double hbar_ = 1.0;
};

// Nonperturbative clock averaging: propagates the schedule at every quadrature
// node, transports the input state, and assembles all figures of merit from the
// per-node states (n propagations, n^2 overlaps for the purity double sum).
ObservableReport mixture_observables_oracle(const StaSchedule& schedule,
                                            const GaussianState& input, const ClockSpec& clock,
                                            int n = 40, OdeTolerances tol = {});

}  // namespace clocksta
