#pragma once

#include <complex>

#include "clocksta/mat2.hpp"
#include "clocksta/symplectic.hpp"

namespace clocksta {

// Single-mode Gaussian state: mean quadrature vector and symmetric (Weyl-ordered)
// covariance, 0.5 <{dR, dR^T}>.
struct GaussianState {
    Vec2 mean;
    Mat2 cov = Mat2::identity();
    double hbar = 1.0;
    double mass = 1.0;

    // hbar / sqrt(det 2V)
    double purity() const;
    // uncertainty-relation check: det V >= hbar^2/4 - slack
    bool valid(double slack = 1e-10) const;
};

// Quadratic energy form H = (1/2) R^T G R with G = diag(m w^2, 1/m).
struct EnergyForm {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    Mat2 matrix() const { return Mat2::diagonal(mass * omega * omega, 1.0 / mass); }
};

GaussianState vacuum_state(double mass, double omega, double hbar = 1.0);

// Coherent state of amplitude mu: vacuum covariance displaced to
// d = (sqrt(2 hbar / m w) Re mu, sqrt(2 hbar m w) Im mu).
GaussianState coherent_state(std::complex<double> mu, double mass, double omega,
                             double hbar = 1.0);

// d -> S d, V -> S V S^T.
GaussianState apply_map(const SymplecticMap& S, const GaussianState& state);

// (1/2) Tr(G V) + (1/2) d^T G d
double mean_energy(const GaussianState& state, const EnergyForm& form);

// (1/2) Tr(GVGV) + d^T G V G d + (hbar^2/8) Tr((GJ)^2); the last term is the
// commutator correction that makes the matched vacuum an exact eigenstate.
double energy_variance(const GaussianState& state, const EnergyForm& form);

// Tr(rho1 rho2) = hbar / sqrt(det(V1+V2)) * exp(-(d1-d2)^T (V1+V2)^{-1} (d1-d2) / 2)
double hs_overlap(const GaussianState& s1, const GaussianState& s2);

double purity(const GaussianState& state);

}  // namespace clocksta
