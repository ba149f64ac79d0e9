#pragma once

#include <complex>
#include <cstddef>

#include "clocksta/mat2.hpp"
#include "clocksta/ode.hpp"
#include "clocksta/protocol.hpp"
#include "clocksta/symplectic.hpp"

namespace clocksta {

enum class ExpansionMethod { hierarchy, dyson };

// Second-order expansion of the per-realization map in the clock parameter:
// S_v = S0 + v S1 + (v^2/2) S2 + O(v^3).
struct PerturbativeMap {
    Mat2 S0 = Mat2::identity();
    Mat2 S1 = Mat2::zero();
    Mat2 S2 = Mat2::zero();
    ExpansionMethod method = ExpansionMethod::hierarchy;
    double mass = 1.0;
    double omega_in = 1.0;
    double omega_out = 1.0;
    double tau = 0.0;
    ProtocolKind kind = ProtocolKind::finite;
    double wronskian_drift = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;

    // |S1^T J S0 + S0^T J S1|, zero for an order-by-order symplectic expansion
    double first_order_defect() const;
    // |S2^T J S0 + S0^T J S2 + 2 S1^T J S1|
    double second_order_defect() const;

    SymplecticMap map_at(double v) const;  // truncated evaluation S0 + v S1 + v^2 S2 / 2
    SymplecticMap zeroth_order() const;
};

// hierarchy: co-integrates the six driven fundamental solutions
//   u_k'' + Omega_bar^2 u_k = -deltaOmega^2 u_{k-1}
// (and likewise w_k) in one pass. dyson: co-integrates the iterated integrals of
// B(t) = S0^{-1} A1 S0 in the interaction picture. Both agree to 1e-7 entrywise.
PerturbativeMap expand_map(const StaSchedule& schedule,
                           ExpansionMethod method = ExpansionMethod::hierarchy,
                           OdeTolerances tol = {});

// Ladder-basis linear response extracted from (S0, S1) via the dictionary.
// Conventions: beta1 = -i d(beta_v)/dv at v=0 (so beta_v = i v beta1 + O(v^2)),
// alpha1 = d(alpha_v)/dv at v=0.
struct LinearResponse {
    std::complex<double> alpha0{1.0, 0.0};
    std::complex<double> beta0{0.0, 0.0};
    std::complex<double> alpha1{0.0, 0.0};
    std::complex<double> beta1{0.0, 0.0};
};

// Throws when |beta0| exceeds beta0_tol: the schedule does not hit its target at
// this precision and the linear response around it is meaningless.
LinearResponse linear_response(const PerturbativeMap& pmap, double beta0_tol = 1e-6);

// Entrywise residual |S_v - (S0 + v S1 + v^2 S2 / 2)| at v = +/- v_probe,
// measured against full (nonperturbative) propagation; O(v^3) for smooth schedules.
struct ExpansionResidual {
    double plus = 0.0;
    double minus = 0.0;
    double max_residual() const { return plus > minus ? plus : minus; }
};

ExpansionResidual check_expansion(const StaSchedule& schedule, const PerturbativeMap& pmap,
                                  double v_probe, OdeTolerances tol = {});

}  // namespace clocksta
