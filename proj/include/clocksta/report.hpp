#pragma once

#include <optional>
#include <string>

namespace clocksta {

// Clock-averaged figures of merit at one parameter point.
struct ObservableReport {
    double tau = 0.0;
    double sigma_v = 0.0;
    double mu_abs = 0.0;
    double mu_phase = 0.0;

    double delta_E_bar = 0.0;
    double sigma_E2_bar = 0.0;
    double var_mean_E = 0.0;
    double F_HS = 1.0;
    double P_mix = 1.0;
    double delta_S2 = 0.0;
    double S_L = 0.0;
    std::optional<double> R_E;  // undefined when delta_E_bar vanishes

    std::string method = "closed_form";  // closed_form | oracle
};

}  // namespace clocksta
