#include "clocksta/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace clocksta {

double GaussianState::purity() const {
    const double det2v = 4.0 * cov.det();
    if (!(det2v > 0.0))
        throw std::domain_error("purity: covariance not positive");
    return hbar / std::sqrt(det2v);
}

bool GaussianState::valid(double slack) const {
    if (std::fabs(cov.b - cov.c) > slack * std::max(1.0, cov.max_abs())) return false;
    return cov.det() >= hbar * hbar / 4.0 - slack;
}

GaussianState vacuum_state(double mass, double omega, double hbar) {
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("vacuum_state: mass, omega, hbar must be positive");
    GaussianState s;
    s.mean = {0.0, 0.0};
    s.cov = Mat2::diagonal(hbar / (2.0 * mass * omega), hbar * mass * omega / 2.0);
    s.hbar = hbar;
    s.mass = mass;
    return s;
}

GaussianState coherent_state(std::complex<double> mu, double mass, double omega, double hbar) {
    GaussianState s = vacuum_state(mass, omega, hbar);
    s.mean = {std::sqrt(2.0 * hbar / (mass * omega)) * mu.real(),
              std::sqrt(2.0 * hbar * mass * omega) * mu.imag()};
    return s;
}

GaussianState apply_map(const SymplecticMap& S, const GaussianState& state) {
    if (S.symplectic_defect() > 1e-6)
        throw std::invalid_argument("apply_map: map is not symplectic");
    GaussianState out = state;
    out.mean = S.M * state.mean;
    out.cov = congruence(S.M, state.cov);
    return out;
}

double mean_energy(const GaussianState& state, const EnergyForm& form) {
    const Mat2 G = form.matrix();
    return 0.5 * (G * state.cov).trace() + 0.5 * bilinear(state.mean, G, state.mean);
}

double energy_variance(const GaussianState& state, const EnergyForm& form) {
    const Mat2 G = form.matrix();
    const Mat2 GV = G * state.cov;
    const Mat2 GJ = G * Mat2::symplectic_form();
    const double quad = 0.5 * (GV * GV).trace();
    const double disp = bilinear(state.mean, G * state.cov * G, state.mean);
    const double comm = state.hbar * state.hbar / 8.0 * (GJ * GJ).trace();
    return quad + disp + comm;
}

double hs_overlap(const GaussianState& s1, const GaussianState& s2) {
    const Mat2 sum = s1.cov + s2.cov;
    const double det = sum.det();
    if (!(det > 0.0))
        throw std::domain_error("hs_overlap: degenerate covariance sum");
    const Vec2 dd = s1.mean - s2.mean;
    const double expo = -0.5 * bilinear(dd, sum.inverse(), dd);
    return s1.hbar / std::sqrt(det) * std::exp(expo);
}

double purity(const GaussianState& state) { return state.purity(); }

}  // namespace clocksta
