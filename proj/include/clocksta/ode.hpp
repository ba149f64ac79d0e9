#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace clocksta {

struct OdeTolerances {
    double rel = 1e-10;
    double abs = 1e-12;
};

struct StepStats {
    std::size_t steps = 0;     // accepted
    std::size_t rejected = 0;  // rejected trial steps
};

namespace detail {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner, dop853).
struct Dop853Tableau {
    static constexpr double
    c2   =  0.05260015195876773187856,
    c3   =  0.07890022793815159781784,
    c4   =  0.11835034190722739672676,
    c5   =  0.28164965809277260327324,
    c6   =  0.33333333333333333333333,
    c7   =  0.25000000000000000000000,
    c8   =  0.30769230769230769230769,
    c9   =  0.65128205128205128205128,
    c10  =  0.60000000000000000000000,
    c11  =  0.85714285714285714285714,
    b1   =  0.05429373411656876223805,
    b6   =  4.45031289275240888144114,
    b7   =  1.89151789931450038304282,
    b8   = -5.80120396001058478146721,
    b9   =  0.31116436695781989440892,
    b10  = -0.15216094966251607855618,
    b11  =  0.20136540080403034837478,
    b12  =  0.04471061572777259051769,
    bhh1 =  0.24409448818897637795276,
    bhh2 =  0.73384668828161185734136,
    bhh3 =  0.02205882352941176470588,
    er1  =  0.01312004499419488073250,
    er6  = -1.22515644637620444072057,
    er7  = -0.49575894965725019152141,
    er8  =  1.66437718245498653696153,
    er9  = -0.35032884874997368168865,
    er10 =  0.33417911871301747902973,
    er11 =  0.08192320648511571246571,
    er12 = -0.02235530786388629525884,
    a21  =  0.05260015195876773187856,
    a31  =  0.01972505698453789945446,
    a32  =  0.05917517095361369836338,
    a41  =  0.02958758547680684918169,
    a43  =  0.08876275643042054754507,
    a51  =  0.24136513415926668550237,
    a53  = -0.88454947932828608534486,
    a54  =  0.92483400326179200311574,
    a61  =  0.03703703703703703703704,
    a64  =  0.17082860872947387127960,
    a65  =  0.12546768756682242501669,
    a71  =  0.03710937500000000000000,
    a74  =  0.17025221101954403931498,
    a75  =  0.06021653898045596068502,
    a76  = -0.01757812500000000000000,
    a81  =  0.03709200011850479271088,
    a84  =  0.17038392571223999381021,
    a85  =  0.10726203044637328465181,
    a86  = -0.01531943774862440175279,
    a87  =  0.00827378916381402288758,
    a91  =  0.62411095871607571711443,
    a94  = -3.36089262944694129406857,
    a95  = -0.86821934684172600681819,
    a96  =  27.5920996994467083049416,
    a97  =  20.1540675504778934086187,
    a98  = -43.4898841810699588477366,
    a101 =  0.47766253643826436589043,
    a104 = -2.48811461997166764192642,
    a105 = -0.59029082683684299637145,
    a106 =  21.2300514481811942347289,
    a107 =  15.2792336328824235832597,
    a108 = -33.2882109689848629194453,
    a109 = -0.02033120170850862613582,
    a111 = -0.93714243008598732571704,
    a114 =  5.18637242884406370830024,
    a115 =  1.09143734899672957818500,
    a116 = -8.14978701074692612513997,
    a117 = -18.5200656599969598641566,
    a118 =  22.7394870993505042818970,
    a119 =  2.49360555267965238987089,
    a1110= -3.04676447189821950038237,
    a121 =  2.27331014751653820792360,
    a124 = -10.5344954667372501984067,
    a125 = -2.00087205822486249909676,
    a126 = -17.9589318631187989172766,
    a127 =  27.9488845294199600508500,
    a128 = -2.85899827713502369474066,
    a129 = -8.87285693353062954433549,
    a1210=  12.3605671757943030647266,
    a1211=  0.64339274601576353035597,
    safety = 0.9,
    fac1 = 0.333,  // lower bound on step contraction
    fac2 = 6.0;    // upper bound on step growth
};

}  // namespace detail

// Explicit embedded Runge-Kutta 8(5,3) with per-step error control.
// Deriv signature: deriv(double t, const std::array<double, N>& y, std::array<double, N>& dydt).
// Checkpoint signature: on_checkpoint(double t, const std::array<double, N>& y), invoked at
// `checkpoints` equally spaced interior+final boundary times (never at t0).
template <std::size_t N, typename Deriv, typename Checkpoint>
StepStats integrate_checkpointed(Deriv&& deriv, double t0, double t1, std::array<double, N>& y,
                                 int checkpoints, Checkpoint&& on_checkpoint,
                                 OdeTolerances tol = {},
                                 std::size_t max_steps = 400000000) {
    using T = detail::Dop853Tableau;
    using State = std::array<double, N>;

    StepStats stats;
    if (!(t1 >= t0))
        throw std::invalid_argument("integrate: t1 must be >= t0");
    if (!(tol.rel > 0.0) || !(tol.abs > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");
    if (checkpoints < 1)
        checkpoints = 1;
    if (t1 == t0) {
        for (int k = 0; k < checkpoints; ++k) on_checkpoint(t0, y);
        return stats;
    }

    State k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, ytmp, ynew;
    double t = t0;
    deriv(t, y, k1);

    // initial step size: match the magnitude of y against its first two derivatives
    double h;
    {
        double dny = 0.0, dnf = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = tol.abs + tol.rel * std::fabs(y[i]);
            const double a = y[i] / sk, b = k1[i] / sk;
            dny += a * a;
            dnf += b * b;
        }
        h = (dnf > 1e-15 && dny > 1e-15) ? 0.01 * std::sqrt(dny / dnf) : 1e-6 * (t1 - t0);
        h = std::min(h, t1 - t0);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * k1[i];
        deriv(t + h, ytmp, k2);
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = tol.abs + tol.rel * std::fabs(y[i]);
            const double d = (k2[i] - k1[i]) / sk;
            der2 += d * d;
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 = der12 > 1e-15 ? std::pow(0.01 / der12, 1.0 / 8.0)
                                        : std::max(1e-6 * (t1 - t0), h * 1e-3);
        h = std::min({100.0 * h, h1, t1 - t0});
    }

    const double span = t1 - t0;
    int next_cp = 1;
    double t_target = (next_cp == checkpoints) ? t1 : t0 + span * next_cp / checkpoints;

    while (true) {
        if (stats.steps + stats.rejected > max_steps)
            throw std::runtime_error("integrate: exceeded maximum number of steps");
        const double underflow = 1e-14 * std::max(std::fabs(t), std::fabs(span));
        if (h <= underflow || !std::isfinite(h))
            throw std::runtime_error("integrate: step size underflow (problem too stiff at t=" +
                                     std::to_string(t) + ")");
        const double h_full = h;  // controller proposal before boundary clipping
        bool clipped = false;
        if (t + h >= t_target) {
            h = t_target - t;
            clipped = true;
        }

        // the twelve stages
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a21 * k1[i]);
        deriv(t + T::c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
        deriv(t + T::c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a41 * k1[i] + T::a43 * k3[i]);
        deriv(t + T::c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a51 * k1[i] + T::a53 * k3[i] + T::a54 * k4[i]);
        deriv(t + T::c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a61 * k1[i] + T::a64 * k4[i] + T::a65 * k5[i]);
        deriv(t + T::c6 * h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a71 * k1[i] + T::a74 * k4[i] + T::a75 * k5[i] + T::a76 * k6[i]);
        deriv(t + T::c7 * h, ytmp, k7);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a81 * k1[i] + T::a84 * k4[i] + T::a85 * k5[i] +
                                  T::a86 * k6[i] + T::a87 * k7[i]);
        deriv(t + T::c8 * h, ytmp, k8);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a91 * k1[i] + T::a94 * k4[i] + T::a95 * k5[i] +
                                  T::a96 * k6[i] + T::a97 * k7[i] + T::a98 * k8[i]);
        deriv(t + T::c9 * h, ytmp, k9);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a101 * k1[i] + T::a104 * k4[i] + T::a105 * k5[i] +
                                  T::a106 * k6[i] + T::a107 * k7[i] + T::a108 * k8[i] +
                                  T::a109 * k9[i]);
        deriv(t + T::c10 * h, ytmp, k10);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a111 * k1[i] + T::a114 * k4[i] + T::a115 * k5[i] +
                                  T::a116 * k6[i] + T::a117 * k7[i] + T::a118 * k8[i] +
                                  T::a119 * k9[i] + T::a1110 * k10[i]);
        deriv(t + T::c11 * h, ytmp, k2);  // k2 reused for stage 11
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (T::a121 * k1[i] + T::a124 * k4[i] + T::a125 * k5[i] +
                                  T::a126 * k6[i] + T::a127 * k7[i] + T::a128 * k8[i] +
                                  T::a129 * k9[i] + T::a1210 * k10[i] + T::a1211 * k2[i]);
        deriv(t + h, ytmp, k3);  // k3 reused for stage 12

        double err5 = 0.0, err3 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sum = T::b1 * k1[i] + T::b6 * k6[i] + T::b7 * k7[i] + T::b8 * k8[i] +
                               T::b9 * k9[i] + T::b10 * k10[i] + T::b11 * k2[i] + T::b12 * k3[i];
            ynew[i] = y[i] + h * sum;
            const double sk = tol.abs + tol.rel * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            double e = sum - T::bhh1 * k1[i] - T::bhh2 * k9[i] - T::bhh3 * k3[i];
            e /= sk;
            err3 += e * e;
            e = (T::er1 * k1[i] + T::er6 * k6[i] + T::er7 * k7[i] + T::er8 * k8[i] +
                 T::er9 * k9[i] + T::er10 * k10[i] + T::er11 * k2[i] + T::er12 * k3[i]) / sk;
            err5 += e * e;
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double err = std::fabs(h) * err5 / std::sqrt(deno * static_cast<double>(N));

        double fac = std::pow(err, 1.0 / 8.0);
        fac = std::max(1.0 / T::fac2, std::min(1.0 / T::fac1, fac / T::safety));

        if (err <= 1.0) {
            ++stats.steps;
            t = clipped ? t_target : t + h;
            y = ynew;
            if (clipped) {
                on_checkpoint(t, y);
                if (next_cp == checkpoints) break;
                ++next_cp;
                t_target = (next_cp == checkpoints) ? t1 : t0 + span * next_cp / checkpoints;
                h = h_full;  // resume with the uncut proposal
            } else {
                h /= fac;
            }
            deriv(t, y, k1);
        } else {
            ++stats.rejected;
            h /= std::min(1.0 / T::fac1, fac / T::safety);
        }
    }
    return stats;
}

template <std::size_t N, typename Deriv>
StepStats integrate(Deriv&& deriv, double t0, double t1, std::array<double, N>& y,
                    OdeTolerances tol = {}) {
    return integrate_checkpointed<N>(deriv, t0, t1, y, 1,
                                     [](double, const std::array<double, N>&) {}, tol);
}

}  // namespace clocksta
