#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clocksta/io.hpp"
#include "clocksta/ode.hpp"
#include "clocksta/pipeline.hpp"

namespace clocksta {

// Grid sweep over (tau, sigma_v, |mu|, arg mu); method selects which pipelines
// run at each point.
struct SweepSpec {
    json protocol = {{"kind", "finite"}, {"omega_i", 1.0}, {"omega_f", 2.0}, {"tau", 1.0}};
    std::string subcommand = "observables";  // observables | perturb
    std::vector<double> tau_grid = {1.0};
    std::vector<double> sigma_grid = {0.1};
    std::vector<double> mu_abs_grid = {0.0};
    std::vector<double> mu_phase_grid = {0.0};
    std::string method = "closed";  // closed | oracle | both
    int quadrature_n = 40;
    int workers = 0;  // 0 = hardware concurrency
    OdeTolerances tol;
    std::string out_dir = ".";
    json raw;  // config echo for hashing

    static SweepSpec from_json(const json& config);
    json to_json() const;
};

struct RunManifest {
    std::string config_hash;
    std::string code_version;
    std::string timestamp;
    std::size_t requested = 0;
    std::size_t ok = 0;
    std::size_t out_of_regime = 0;
    std::size_t errors = 0;
    json points = json::array();

    json to_json() const;
};

struct SweepResult {
    CsvWriter csv;
    RunManifest manifest;
};

// Evaluates the requested pipeline over the Cartesian grid; no file output.
// Per-point failures land in the manifest, the run continues.
SweepResult run_sweep_core(const SweepSpec& spec);

// Same, then writes <subcommand>.csv plus manifest.json into spec.out_dir and
// returns the manifest. Only I/O failures throw.
RunManifest run_sweep(const SweepSpec& spec);

// t, omega2, sta_omega2, delta_omega2 across the window.
CsvWriter protocol_curve_csv(const StaSchedule& schedule, int samples);

// tau, re_beta1, im_beta1, abs_beta1, re_alpha1, im_alpha1, abs_alpha1, abs_beta0
CsvWriter perturb_csv(const FrequencyProtocol& base, const std::vector<double>& tau_grid,
                      OdeTolerances tol = {});

// figure_id in {fig1, fig2, fig3, fig4}; writes the figure's CSV files into
// out_dir with the default parameters omega_i = 1, omega_f = 2 pre-filled.
// Overrides: omega_i, omega_f, tau, tau_grid, sigma_v, mu_abs_grid,
// truncation_eps, samples, method, quadrature_n, n_phase.
std::vector<std::string> emit_figure_data(const std::string& figure_id, const json& overrides,
                                          const std::string& out_dir);

// Deterministic helper: runs fn(0..count-1) on a small thread pool; results must
// be written to disjoint slots.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace clocksta
