#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "clocksta/io.hpp"
#include "clocksta/oracle.hpp"
#include "clocksta/pipeline.hpp"
#include "clocksta/sweep.hpp"
#include "clocksta/symplectic.hpp"

namespace {

using namespace clocksta;

struct ProtocolArgs {
    std::string file;
    std::string kind = "finite";
    double omega_i = 1.0;
    double omega_f = 2.0;
    double tau = 1.0;
    double truncation_eps = 1e-6;
    CLI::Option* tau_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--protocol", file, "JSON protocol descriptor file");
        cmd->add_option("--kind", kind, "finite | infinite (when no file is given)");
        cmd->add_option("--omega-i", omega_i, "initial angular frequency");
        cmd->add_option("--omega-f", omega_f, "final angular frequency");
        cmd->add_option("--eps", truncation_eps, "infinite-protocol truncation threshold");
        tau_opt = cmd->add_option("--tau", tau, "duration scale (overrides the file value)");
    }

    json descriptor() const {
        json j;
        if (!file.empty()) {
            j = protocol_to_json(load_protocol(file));
            if (tau_opt && tau_opt->count() > 0) j["tau"] = tau;
        } else {
            j["kind"] = kind;
            j["omega_i"] = omega_i;
            j["omega_f"] = omega_f;
            j["tau"] = tau;
            if (kind == "infinite") j["truncation_eps"] = truncation_eps;
        }
        return j;
    }

    FrequencyProtocol build() const { return protocol_from_json(descriptor()); }
};

void print_or_write(const CsvWriter& csv, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::fputs(csv.str().c_str(), stdout);
    else
        csv.write_file(out_path);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"clock-driven STA pipeline for a parametric oscillator"};
    app.require_subcommand(1);

    std::string global_out;
    int global_workers = 0;
    bool seedless = false;
    app.add_option("--out", global_out, "output file or directory");
    app.add_option("--workers", global_workers, "worker threads (0 = hardware)");
    app.add_flag("--seedless", seedless,
                 "assert that no RNG is used anywhere (always true for this tool)");

    double rtol = 1e-10, atol = 1e-12;
    app.add_option("--rtol", rtol, "ODE relative tolerance");
    app.add_option("--atol", atol, "ODE absolute tolerance");

    // protocol
    auto* cmd_protocol = app.add_subcommand("protocol", "emit t, omega2, sta_omega2, delta_omega2");
    ProtocolArgs proto_args;
    proto_args.attach(cmd_protocol);
    int samples = 400;
    cmd_protocol->add_option("--samples", samples, "number of sample rows");

    // trajectory
    auto* cmd_traj = app.add_subcommand("trajectory", "propagate one realization to JSON");
    ProtocolArgs traj_proto;
    traj_proto.attach(cmd_traj);
    double traj_v = 0.0;
    cmd_traj->add_option("--v", traj_v, "clock noise realization");

    // perturb
    auto* cmd_perturb = app.add_subcommand("perturb", "linear response over a tau grid");
    ProtocolArgs pert_proto;
    pert_proto.attach(cmd_perturb);
    std::string pert_tau_grid = "log:0.1:10:25";
    cmd_perturb->add_option("--tau-grid", pert_tau_grid, "grid spec lin:a:b:n | log:a:b:n | list");

    // observables
    auto* cmd_obs = app.add_subcommand("observables", "clock-averaged figures of merit");
    ProtocolArgs obs_proto;
    obs_proto.attach(cmd_obs);
    std::string obs_tau_grid;
    std::string obs_sigma = "0.1";
    std::string obs_mu = "0";
    std::string obs_method = "closed";
    std::string obs_state_file;
    int obs_n = 40;
    cmd_obs->add_option("--tau-grid", obs_tau_grid, "tau grid (defaults to the protocol tau)");
    cmd_obs->add_option("--sigma-v", obs_sigma, "clock spread grid");
    cmd_obs->add_option("--mu", obs_mu,
                        "coherent amplitude: re,im pair or abs:phase, grids allowed for abs");
    cmd_obs->add_option("--method", obs_method, "closed | oracle | both");
    cmd_obs->add_option("--n", obs_n, "quadrature nodes for the oracle");
    cmd_obs->add_option("--input-state", obs_state_file, "JSON Gaussian state descriptor");

    // validate
    auto* cmd_val = app.add_subcommand("validate", "closed-form vs oracle pass/fail table");
    ProtocolArgs val_proto;
    val_proto.attach(cmd_val);
    double val_sigma = 0.05;
    int val_n = 40;
    double val_mu_abs = 0.0, val_mu_phase = 0.0;
    cmd_val->add_option("--sigma-v", val_sigma, "clock spread");
    cmd_val->add_option("--n", val_n, "quadrature nodes");
    cmd_val->add_option("--mu-abs", val_mu_abs, "coherent amplitude magnitude");
    cmd_val->add_option("--mu-phase", val_mu_phase, "coherent amplitude phase");

    // figures
    auto* cmd_fig = app.add_subcommand("figures", "emit figure data CSVs");
    std::string figure_id = "fig1";
    std::string overrides_text;
    cmd_fig->add_option("--figure", figure_id, "fig1 | fig2 | fig3 | fig4")->required();
    cmd_fig->add_option("--overrides", overrides_text, "JSON object of parameter overrides");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "run a sweep config");
    std::string sweep_config;
    cmd_sweep->add_option("--config", sweep_config, "JSON sweep config")->required();

    CLI11_PARSE(app, argc, argv);
    const OdeTolerances tol{rtol, atol};

    if (cmd_protocol->parsed()) {
        const StaSchedule schedule(proto_args.build());
        print_or_write(protocol_curve_csv(schedule, samples), global_out);
        return 0;
    }

    if (cmd_traj->parsed()) {
        const StaSchedule schedule(traj_proto.build());
        const auto [S, traj] = propagate(schedule, traj_v, tol);
        const BogoliubovPair bg = bogoliubov_from_symplectic(S);
        json out;
        out["S"] = {{S.M.a, S.M.b}, {S.M.c, S.M.d}};
        out["alpha"] = {bg.alpha.real(), bg.alpha.imag()};
        out["beta"] = {bg.beta.real(), bg.beta.imag()};
        out["wronskian_drift"] = traj.wronskian_drift;
        const std::string text = out.dump(2) + "\n";
        if (global_out.empty() || global_out == "-") {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(global_out);
            if (!f) throw IoError("cannot write " + global_out);
            f << text;
        }
        return 0;
    }

    if (cmd_perturb->parsed()) {
        const FrequencyProtocol base = pert_proto.build();
        print_or_write(perturb_csv(base, parse_grid(pert_tau_grid), tol), global_out);
        return 0;
    }

    if (cmd_obs->parsed()) {
        SweepSpec spec;
        spec.protocol = obs_proto.descriptor();
        spec.subcommand = "observables";
        spec.tau_grid = obs_tau_grid.empty()
                            ? std::vector<double>{spec.protocol.at("tau").get<double>()}
                            : parse_grid(obs_tau_grid);
        spec.sigma_grid = parse_grid(obs_sigma);
        // "re,im" | "abs:phase" | plain grid of magnitudes
        if (obs_mu.find(':') != std::string::npos) {
            const auto sep = obs_mu.find(':');
            spec.mu_abs_grid = parse_grid(obs_mu.substr(0, sep));
            spec.mu_phase_grid = parse_grid(obs_mu.substr(sep + 1));
        } else if (obs_mu.find(',') != std::string::npos) {
            const auto sep = obs_mu.find(',');
            const double re = std::stod(obs_mu.substr(0, sep));
            const double im = std::stod(obs_mu.substr(sep + 1));
            const std::complex<double> mu(re, im);
            spec.mu_abs_grid = {std::abs(mu)};
            spec.mu_phase_grid = {mu == 0.0 ? 0.0 : std::arg(mu)};
        } else {
            spec.mu_abs_grid = parse_grid(obs_mu);
        }
        spec.method = obs_method;
        spec.quadrature_n = obs_n;
        spec.workers = global_workers;
        spec.tol = tol;

        if (!obs_state_file.empty()) {
            // explicit input state: single-point evaluation per (tau, sigma)
            const GaussianState input = load_state(obs_state_file);
            CsvWriter csv;
            csv.header(observable_columns());
            for (double tau : spec.tau_grid) {
                json pj = spec.protocol;
                pj["tau"] = tau;
                const StaSchedule schedule(protocol_from_json(pj));
                const PerturbativeMap pmap = expand_map(schedule, ExpansionMethod::hierarchy, tol);
                for (double sigma : spec.sigma_grid) {
                    const ClockSpec clock{sigma};
                    if (spec.method != "oracle") {
                        const PointResult pr =
                            guarded_closed_form_report(schedule, input, clock, pmap);
                        csv.row(pr.report ? observable_cells(*pr.report, pr.status)
                                          : empty_observable_cells(tau, sigma, 0, 0,
                                                                   "closed_form", pr.status));
                    }
                    if (spec.method != "closed") {
                        const PointResult pr =
                            guarded_oracle_report(schedule, input, clock, spec.quadrature_n, tol);
                        csv.row(pr.report ? observable_cells(*pr.report, pr.status)
                                          : empty_observable_cells(tau, sigma, 0, 0, "oracle",
                                                                   pr.status));
                    }
                }
            }
            print_or_write(csv, global_out);
            return 0;
        }

        if (global_out.empty() || global_out == "-") {
            std::fputs(run_sweep_core(spec).csv.str().c_str(), stdout);
        } else {
            spec.out_dir = global_out;
            run_sweep(spec);
        }
        return 0;
    }

    if (cmd_val->parsed()) {
        const StaSchedule schedule(val_proto.build());
        const ClockSpec clock{val_sigma};
        const std::complex<double> mu = std::polar(val_mu_abs, val_mu_phase);
        const GaussianState input =
            coherent_state(mu, schedule.mass(), schedule.omega_in(), schedule.hbar());
        const PerturbativeMap pmap = expand_map(schedule, ExpansionMethod::hierarchy, tol);
        const ObservableReport closed = closed_form_report(schedule, input, clock, pmap, mu);
        const ObservableReport oracle =
            mixture_observables_oracle(schedule, input, clock, val_n, tol);
        const LinearResponse lr = linear_response(pmap);
        const double sb = val_sigma * std::abs(lr.beta1);

        std::printf("# closed-form vs oracle, sigma_v=%.6g, n=%d, sigma_v*|beta1|=%.4g\n",
                    val_sigma, val_n, sb);
        std::printf("%-14s %16s %16s %12s %10s %6s\n", "quantity", "closed", "oracle", "rel_err",
                    "threshold", "verdict");
        bool all_pass = true;
        const auto row = [&](const char* name, double c, double o, double threshold) {
            const double denom = std::max(std::fabs(o), 1e-300);
            const double rel = std::fabs(c - o) / denom;
            const bool pass = rel <= threshold;
            all_pass = all_pass && pass;
            std::printf("%-14s %16.9e %16.9e %12.3e %10.1e %6s\n", name, c, o, rel, threshold,
                        pass ? "pass" : "FAIL");
        };
        row("F_HS", closed.F_HS, oracle.F_HS, 1e-3);
        row("P_mix", closed.P_mix, oracle.P_mix, 1e-3);
        row("delta_S2", closed.delta_S2, oracle.delta_S2, 2e-2);
        row("S_L", closed.S_L, oracle.S_L, 2e-2);
        row("delta_E_bar", closed.delta_E_bar, oracle.delta_E_bar, 1e-2);
        row("sigma_E2_bar", closed.sigma_E2_bar, oracle.sigma_E2_bar, 2e-2);
        if (closed.R_E && oracle.R_E) row("R_E", *closed.R_E, *oracle.R_E, 2e-2);

        const auto bound = [&](const char* name, const ObservableReport& rep) {
            const double slack = -2.0 * std::log(rep.F_HS) - rep.delta_S2;
            const bool pass = slack >= -1e-10;
            all_pass = all_pass && pass;
            std::printf("%-14s %16.9e %16s %12s %10s %6s\n", name, slack, "(-2lnF - dS2)", "",
                        ">=0", pass ? "pass" : "FAIL");
        };
        bound("bound_closed", closed);
        bound("bound_oracle", oracle);
        return all_pass ? 0 : 1;
    }

    if (cmd_fig->parsed()) {
        json overrides;
        if (!overrides_text.empty()) overrides = json::parse(overrides_text);
        const std::string out_dir = global_out.empty() ? "figures" : global_out;
        for (const auto& path : emit_figure_data(figure_id, overrides, out_dir))
            std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (cmd_sweep->parsed()) {
        std::ifstream in(sweep_config);
        if (!in) throw IoError("cannot open config: " + sweep_config);
        json config;
        in >> config;
        SweepSpec spec = SweepSpec::from_json(config);
        if (!global_out.empty()) spec.out_dir = global_out;
        if (global_workers > 0) spec.workers = global_workers;
        const RunManifest manifest = run_sweep(spec);
        std::printf("sweep complete: %zu points, %zu ok, %zu out-of-regime, %zu errors\n",
                    manifest.requested, manifest.ok, manifest.out_of_regime, manifest.errors);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const clocksta::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
