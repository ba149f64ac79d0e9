#include "clocksta/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "clocksta/symplectic.hpp"

namespace clocksta {

namespace {

// Orthonormal Hermite polynomials for weight exp(-x^2); returns p_n(x) and
// p_{n-1}(x).
std::pair<double, double> hermite_pair(int n, double x) {
    constexpr double kQuarterRootPi = 0.7511255444649425;  // pi^{-1/4}
    double pm1 = 0.0;
    double p = kQuarterRootPi;
    for (int k = 0; k < n; ++k) {
        const double pnew = x * std::sqrt(2.0 / (k + 1)) * p -
                            std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
        pm1 = p;
        p = pnew;
    }
    return {p, pm1};
}

}  // namespace

QuadratureRule QuadratureRule::gauss_hermite(int n, double sigma_v) {
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: n must be >= 1");
    if (!(sigma_v >= 0.0))
        throw std::invalid_argument("gauss_hermite: sigma_v must be >= 0");
    QuadratureRule rule;
    if (sigma_v == 0.0) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }

    std::vector<double> x(n, 0.0), w(n, 0.0);
    const int half = (n + 1) / 2;
    double z = 0.0, z_prev = 0.0, z_prev2 = 0.0;
    for (int i = 0; i < half; ++i) {
        // standard initial guesses for roots in decreasing order
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * z_prev;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * z_prev;
        } else {
            z = 2.0 * z - z_prev2;
        }
        for (int it = 0; it < 100; ++it) {
            const auto [p, pm1] = hermite_pair(n, z);
            const double dp = std::sqrt(2.0 * n) * pm1;
            const double dz = p / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-15 * std::max(1.0, std::fabs(z))) break;
        }
        z_prev2 = z_prev;
        z_prev = z;
        const auto [p, pm1] = hermite_pair(n, z);
        (void)p;
        const double weight = 1.0 / (n * pm1 * pm1);  // Christoffel form
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;

    // normalize so weights sum to one and map to v = sqrt(2) sigma x
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double scale = std::sqrt(2.0) * sigma_v;
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = scale * x[i];
        rule.weights[i] = w[i] / wsum;
    }
    return rule;
}

double clock_average(const std::function<double(double)>& f, const ClockSpec& clock, int n) {
    if (n < 8)
        throw std::invalid_argument("clock_average: n must be >= 8");
    const QuadratureRule rule = QuadratureRule::gauss_hermite(n, clock.sigma_v);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double fi = f(rule.nodes[i]);
        if (!std::isfinite(fi))
            throw std::runtime_error("clock_average: non-finite integrand at node " +
                                     std::to_string(i) + " (v=" + std::to_string(rule.nodes[i]) +
                                     ")");
        acc += rule.weights[i] * fi;
    }
    return acc;
}

EnergyMoments ladder_energy_moments(std::complex<double> alpha, std::complex<double> beta,
                                    std::complex<double> mu, double omega_f, double hbar) {
    const double defect = std::fabs(std::norm(alpha) - std::norm(beta) - 1.0);
    if (defect > 1e-6)
        throw std::invalid_argument("ladder_energy_moments: |alpha|^2 - |beta|^2 = 1 violated");
    const double hw = hbar * omega_f;
    const double mu2 = std::norm(mu);
    const double A = std::norm(alpha) + std::norm(beta);
    const std::complex<double> K = std::conj(alpha) * beta;
    const std::complex<double> mu_conj_sq = std::conj(mu) * std::conj(mu);
    const double cross = (K * mu_conj_sq).real();
    EnergyMoments em;
    em.mean = hw * (A * mu2 + std::norm(beta) + 2.0 * cross + 0.5);
    em.variance = hw * hw *
                  (A * A * mu2 + 4.0 * A * cross + std::norm(K) * (4.0 * mu2 + 2.0));
    return em;
}

MixtureEnsemble::MixtureEnsemble(const StaSchedule& schedule, const ClockSpec& clock, int n,
                                 OdeTolerances tol) {
    if (n < 1)
        throw std::invalid_argument("MixtureEnsemble: n must be >= 1");
    rule_ = QuadratureRule::gauss_hermite(n, clock.sigma_v);
    tau_ = schedule.protocol().tau();
    sigma_v_ = clock.sigma_v;
    mass_ = schedule.mass();
    omega_out_ = schedule.omega_out();
    hbar_ = schedule.hbar();
    target_ = propagate(schedule, 0.0, tol).first;
    maps_.reserve(rule_.nodes.size());
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
        try {
            maps_.push_back(propagate(schedule, rule_.nodes[i], tol).first);
        } catch (const std::exception& e) {
            throw std::runtime_error("oracle propagation failed at node " + std::to_string(i) +
                                     " (v=" + std::to_string(rule_.nodes[i]) + "): " + e.what());
        }
    }
}

ObservableReport MixtureEnsemble::observables(const GaussianState& input) const {
    const EnergyForm form{mass_, omega_out_, hbar_};
    const GaussianState rho0 = apply_map(target_, input);
    const double P0 = rho0.purity();
    const double E0 = mean_energy(rho0, form);
    const double Var0 = energy_variance(rho0, form);

    const std::size_t m = maps_.size();
    std::vector<GaussianState> states;
    states.reserve(m);
    for (const auto& S : maps_) states.push_back(apply_map(S, input));

    double F = 0.0, dE = 0.0, dVar = 0.0, meanE2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        F += rule_.weights[i] * hs_overlap(rho0, states[i]);
        const double Ei = mean_energy(states[i], form);
        dE += rule_.weights[i] * (Ei - E0);
        meanE2 += rule_.weights[i] * Ei * Ei;
        dVar += rule_.weights[i] * (energy_variance(states[i], form) - Var0);
    }
    F /= P0;

    double P = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        P += rule_.weights[i] * rule_.weights[i] * states[i].purity();
        for (std::size_t j = i + 1; j < m; ++j)
            P += 2.0 * rule_.weights[i] * rule_.weights[j] * hs_overlap(states[i], states[j]);
    }

    const double meanE = dE + E0;
    ObservableReport rep;
    rep.tau = tau_;
    rep.sigma_v = sigma_v_;
    rep.F_HS = F;
    rep.P_mix = P;
    rep.delta_S2 = -std::log(P / P0);
    rep.S_L = 1.0 - P / P0;
    rep.delta_E_bar = dE;
    rep.sigma_E2_bar = dVar;
    rep.var_mean_E = meanE2 - meanE * meanE;
    rep.R_E = tur_ratio(rep.S_L, rep.sigma_E2_bar, rep.delta_E_bar);
    rep.method = "oracle";
    return rep;
}

ObservableReport mixture_observables_oracle(const StaSchedule& schedule,
                                            const GaussianState& input, const ClockSpec& clock,
                                            int n, OdeTolerances tol) {
    return MixtureEnsemble(schedule, clock, n, tol).observables(input);
}

}  // namespace clocksta
