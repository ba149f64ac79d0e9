#include "clocksta/sweep.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

namespace clocksta {

namespace {

std::vector<double> grid_from_json(const json& j, std::vector<double> fallback) {
    if (j.is_null()) return fallback;
    if (j.is_string()) return parse_grid(j.get<std::string>());
    if (j.is_number()) return {j.get<double>()};
    if (j.is_array()) {
        std::vector<double> g;
        for (const auto& v : j) g.push_back(v.get<double>());
        if (g.empty()) throw std::invalid_argument("empty grid in config");
        return g;
    }
    throw std::invalid_argument("grid must be a number, string spec, or array");
}

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t nw = workers > 0 ? static_cast<std::size_t>(workers)
                                 : std::max(1u, std::thread::hardware_concurrency());
    nw = std::min(nw, count);
    if (nw <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t t = 0; t < nw; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

SweepSpec SweepSpec::from_json(const json& config) {
    SweepSpec spec;
    spec.raw = config;
    if (config.contains("protocol")) spec.protocol = config.at("protocol");
    spec.subcommand = config.value("subcommand", std::string("observables"));
    spec.tau_grid = grid_from_json(config.value("tau_grid", json()), spec.tau_grid);
    spec.sigma_grid = grid_from_json(config.value("sigma_v", json()), spec.sigma_grid);
    spec.mu_abs_grid = grid_from_json(config.value("mu_abs", json()), spec.mu_abs_grid);
    spec.mu_phase_grid = grid_from_json(config.value("mu_phase", json()), spec.mu_phase_grid);
    spec.method = config.value("method", spec.method);
    if (spec.method != "closed" && spec.method != "oracle" && spec.method != "both")
        throw std::invalid_argument("method must be closed, oracle, or both");
    if (spec.subcommand != "observables" && spec.subcommand != "perturb")
        throw std::invalid_argument("sweep subcommand must be observables or perturb");
    spec.quadrature_n = config.value("quadrature_n", spec.quadrature_n);
    spec.workers = config.value("workers", spec.workers);
    spec.tol.rel = config.value("ode_rel_tol", spec.tol.rel);
    spec.tol.abs = config.value("ode_abs_tol", spec.tol.abs);
    spec.out_dir = config.value("out", spec.out_dir);
    for (double s : spec.sigma_grid)
        if (!(s >= 0.0)) throw std::invalid_argument("sigma_v grid values must be >= 0");
    for (double t : spec.tau_grid)
        if (!(t > 0.0)) throw std::invalid_argument("tau grid values must be > 0");
    return spec;
}

json SweepSpec::to_json() const {
    json j;
    j["protocol"] = protocol;
    j["subcommand"] = subcommand;
    j["tau_grid"] = tau_grid;
    j["sigma_v"] = sigma_grid;
    j["mu_abs"] = mu_abs_grid;
    j["mu_phase"] = mu_phase_grid;
    j["method"] = method;
    j["quadrature_n"] = quadrature_n;
    j["ode_rel_tol"] = tol.rel;
    j["ode_abs_tol"] = tol.abs;
    return j;
}

json RunManifest::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["code_version"] = code_version;
    j["timestamp"] = timestamp;
    j["totals"] = {{"requested", requested},
                   {"ok", ok},
                   {"out_of_regime", out_of_regime},
                   {"error", errors}};
    j["points"] = points;
    return j;
}

namespace {

FrequencyProtocol protocol_at_tau(const json& descriptor, double tau) {
    json j = descriptor;
    j["tau"] = tau;
    if (j.at("kind").get<std::string>() == "tabulated")
        throw std::invalid_argument("tau sweeps are not defined for tabulated protocols");
    return protocol_from_json(j);
}

struct TauSlot {
    std::string status = "ok";
    std::string detail;
    std::optional<StaSchedule> schedule;
    std::optional<PerturbativeMap> pmap;
};

struct EnsembleSlot {
    std::string status = "ok";
    std::string detail;
    std::optional<MixtureEnsemble> ensemble;
};

RunManifest manifest_stub(const json& cfg) {
    RunManifest m;
    m.config_hash = config_hash(cfg);
    m.code_version = kCodeVersion;
    m.timestamp = utc_timestamp();
    return m;
}

}  // namespace

SweepResult run_sweep_core(const SweepSpec& spec) {
    const json cfg = spec.to_json();
    RunManifest manifest = manifest_stub(cfg);

    const bool want_closed = spec.method == "closed" || spec.method == "both";
    const bool want_oracle = spec.method == "oracle" || spec.method == "both";
    const bool perturb_mode = spec.subcommand == "perturb";

    // stage 1: per-tau schedules and perturbative maps (shared by all grid points)
    std::vector<TauSlot> taus(spec.tau_grid.size());
    parallel_for(spec.tau_grid.size(), spec.workers, [&](std::size_t i) {
        TauSlot& slot = taus[i];
        try {
            slot.schedule.emplace(protocol_at_tau(spec.protocol, spec.tau_grid[i]));
            if (want_closed || perturb_mode)
                slot.pmap = expand_map(*slot.schedule, ExpansionMethod::hierarchy, spec.tol);
        } catch (const std::exception& e) {
            slot.status = "error";
            slot.detail = e.what();
        }
    });

    // stage 2: per (tau, sigma) oracle ensembles
    std::vector<EnsembleSlot> ensembles;
    if (want_oracle && !perturb_mode) {
        ensembles.resize(spec.tau_grid.size() * spec.sigma_grid.size());
        parallel_for(ensembles.size(), spec.workers, [&](std::size_t k) {
            const std::size_t it = k / spec.sigma_grid.size();
            const std::size_t is = k % spec.sigma_grid.size();
            EnsembleSlot& slot = ensembles[k];
            if (taus[it].status != "ok") {
                slot.status = taus[it].status;
                slot.detail = taus[it].detail;
                return;
            }
            try {
                slot.ensemble.emplace(*taus[it].schedule, ClockSpec{spec.sigma_grid[is]},
                                      spec.quadrature_n, spec.tol);
            } catch (const std::exception& e) {
                slot.status = "error";
                slot.detail = e.what();
            }
        });
    }

    // stage 3: serial assembly in grid order
    CsvWriter csv;
    csv.comment("config_hash", manifest.config_hash);
    csv.comment("code_version", kCodeVersion);
    for (const auto& [key, value] : cfg.items())
        csv.comment(key, value.dump());

    std::size_t index = 0;
    const auto record = [&](double tau, double sigma, double mu_abs, double mu_phase,
                            const std::string& method, const std::string& status) {
        json p;
        p["index"] = index++;
        p["tau"] = tau;
        p["sigma_v"] = sigma;
        p["mu_abs"] = mu_abs;
        p["mu_phase"] = mu_phase;
        p["method"] = method;
        p["status"] = status;
        manifest.points.push_back(p);
        ++manifest.requested;
        if (status == "ok")
            ++manifest.ok;
        else if (status == "out_of_regime")
            ++manifest.out_of_regime;
        else
            ++manifest.errors;
    };

    if (perturb_mode) {
        csv.header({"tau", "re_beta1", "im_beta1", "abs_beta1", "re_alpha1", "im_alpha1",
                    "abs_alpha1", "abs_beta0", "status"});
        for (std::size_t it = 0; it < spec.tau_grid.size(); ++it) {
            const double tau = spec.tau_grid[it];
            if (taus[it].status != "ok") {
                csv.row({fmt_num(tau), "", "", "", "", "", "", "", taus[it].status});
                record(tau, 0.0, 0.0, 0.0, "perturb", taus[it].status);
                continue;
            }
            try {
                const LinearResponse lr = linear_response(*taus[it].pmap);
                csv.row({fmt_num(tau), fmt_num(lr.beta1.real()), fmt_num(lr.beta1.imag()),
                         fmt_num(std::abs(lr.beta1)), fmt_num(lr.alpha1.real()),
                         fmt_num(lr.alpha1.imag()), fmt_num(std::abs(lr.alpha1)),
                         fmt_num(std::abs(lr.beta0)), "ok"});
                record(tau, 0.0, 0.0, 0.0, "perturb", "ok");
            } catch (const std::exception& e) {
                csv.row({fmt_num(tau), "", "", "", "", "", "", "", "error"});
                record(tau, 0.0, 0.0, 0.0, "perturb", "error");
            }
        }
    } else {
        csv.header(observable_columns());
        for (std::size_t it = 0; it < spec.tau_grid.size(); ++it) {
            const double tau = spec.tau_grid[it];
            for (std::size_t is = 0; is < spec.sigma_grid.size(); ++is) {
                const double sigma = spec.sigma_grid[is];
                const ClockSpec clock{sigma};
                for (double mu_abs : spec.mu_abs_grid) {
                    for (double mu_phase : spec.mu_phase_grid) {
                        const std::complex<double> mu = std::polar(mu_abs, mu_phase);
                        const auto emit = [&](const PointResult& pr, const std::string& method) {
                            if (pr.report) {
                                csv.row(observable_cells(*pr.report, pr.status));
                            } else {
                                csv.row(empty_observable_cells(tau, sigma, mu_abs, mu_phase,
                                                               method, pr.status));
                            }
                            record(tau, sigma, mu_abs, mu_phase, method, pr.status);
                        };
                        if (taus[it].status != "ok") {
                            PointResult bad{taus[it].status, taus[it].detail, std::nullopt};
                            if (want_closed) emit(bad, "closed_form");
                            if (want_oracle) emit(bad, "oracle");
                            continue;
                        }
                        const StaSchedule& schedule = *taus[it].schedule;
                        const GaussianState input = coherent_state(
                            mu, schedule.mass(), schedule.omega_in(), schedule.hbar());
                        if (want_closed) {
                            PointResult pr = guarded_closed_form_report(schedule, input, clock,
                                                                        *taus[it].pmap, mu);
                            emit(pr, "closed_form");
                        }
                        if (want_oracle) {
                            const EnsembleSlot& slot =
                                ensembles[it * spec.sigma_grid.size() + is];
                            PointResult pr;
                            if (slot.status != "ok") {
                                pr.status = slot.status;
                                pr.detail = slot.detail;
                            } else {
                                try {
                                    ObservableReport rep = slot.ensemble->observables(input);
                                    rep.mu_abs = mu_abs;
                                    rep.mu_phase = mu_phase;
                                    pr.report = rep;
                                } catch (const std::exception& e) {
                                    pr.status = "error";
                                    pr.detail = e.what();
                                }
                            }
                            emit(pr, "oracle");
                        }
                    }
                }
            }
        }
    }

    return {std::move(csv), std::move(manifest)};
}

RunManifest run_sweep(const SweepSpec& spec) {
    SweepResult result = run_sweep_core(spec);
    std::filesystem::create_directories(spec.out_dir);
    result.csv.write_file(spec.out_dir + "/" + spec.subcommand + ".csv");
    std::ofstream mf(spec.out_dir + "/manifest.json");
    if (!mf)
        throw IoError("cannot write manifest in " + spec.out_dir);
    mf << result.manifest.to_json().dump(2) << "\n";
    return result.manifest;
}

CsvWriter protocol_curve_csv(const StaSchedule& schedule, int samples) {
    if (samples < 2)
        throw std::invalid_argument("protocol curve needs at least 2 samples");
    CsvWriter csv;
    csv.comment("kind", std::to_string(static_cast<int>(schedule.protocol().kind())));
    csv.comment("omega_i", fmt_num(schedule.protocol().omega_i()));
    csv.comment("omega_f", fmt_num(schedule.protocol().omega_f()));
    csv.comment("tau", fmt_num(schedule.protocol().tau()));
    csv.header({"t", "omega2", "sta_omega2", "delta_omega2"});
    const double t0 = schedule.t_begin(), t1 = schedule.t_end();
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (samples - 1);
        csv.row({fmt_num(t), fmt_num(schedule.protocol().omega_sq(t, 0)),
                 fmt_num(schedule.frequency_sq(t)), fmt_num(schedule.deviation_sq(t))});
    }
    return csv;
}

CsvWriter perturb_csv(const FrequencyProtocol& base, const std::vector<double>& tau_grid,
                      OdeTolerances tol) {
    SweepSpec spec;
    spec.protocol = protocol_to_json(base);
    spec.subcommand = "perturb";
    spec.tau_grid = tau_grid;
    spec.tol = tol;

    CsvWriter csv;
    csv.header({"tau", "re_beta1", "im_beta1", "abs_beta1", "re_alpha1", "im_alpha1",
                "abs_alpha1", "abs_beta0", "status"});
    for (double tau : tau_grid) {
        const StaSchedule schedule(protocol_at_tau(spec.protocol, tau));
        try {
            const PerturbativeMap pmap = expand_map(schedule, ExpansionMethod::hierarchy, tol);
            const LinearResponse lr = linear_response(pmap);
            csv.row({fmt_num(tau), fmt_num(lr.beta1.real()), fmt_num(lr.beta1.imag()),
                     fmt_num(std::abs(lr.beta1)), fmt_num(lr.alpha1.real()),
                     fmt_num(lr.alpha1.imag()), fmt_num(std::abs(lr.alpha1)),
                     fmt_num(std::abs(lr.beta0)), "ok"});
        } catch (const std::exception&) {
            csv.row({fmt_num(tau), "", "", "", "", "", "", "", "error"});
        }
    }
    return csv;
}

std::vector<std::string> emit_figure_data(const std::string& figure_id, const json& overrides,
                                          const std::string& out_dir) {
    const auto get = [&overrides](const char* key, double fallback) {
        return overrides.is_object() ? overrides.value(key, fallback) : fallback;
    };
    const double omega_i = get("omega_i", 1.0);
    const double omega_f = get("omega_f", 2.0);
    const int samples = static_cast<int>(get("samples", 400));
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const auto write = [&](const std::string& name, const CsvWriter& csv) {
        const std::string path = out_dir + "/" + name;
        csv.write_file(path);
        written.push_back(path);
    };

    if (figure_id == "fig1" || figure_id == "fig3") {
        const double tau = get("tau", 1.0);
        FrequencyProtocol protocol =
            figure_id == "fig1"
                ? FrequencyProtocol::finite(omega_i, omega_f, tau)
                // default window ~ [-10 tau, 10 tau] for a readable curve
                : FrequencyProtocol::infinite(omega_i, omega_f, tau,
                                              get("truncation_eps", 0.031676888064907));
        write(figure_id + ".csv", protocol_curve_csv(StaSchedule(protocol), samples));
        return written;
    }

    if (figure_id == "fig2" || figure_id == "fig4") {
        const bool finite = figure_id == "fig2";
        json protocol;
        protocol["kind"] = finite ? "finite" : "infinite";
        protocol["omega_i"] = omega_i;
        protocol["omega_f"] = omega_f;
        protocol["tau"] = 1.0;
        if (!finite) protocol["truncation_eps"] = get("truncation_eps", 1e-4);

        const std::string tau_spec =
            overrides.is_object() ? overrides.value("tau_grid", std::string("log:0.1:10:25"))
                                  : std::string("log:0.1:10:25");
        const std::vector<double> tau_grid = parse_grid(tau_spec);

        SweepSpec perturb;
        perturb.protocol = protocol;
        perturb.subcommand = "perturb";
        perturb.tau_grid = tau_grid;
        FrequencyProtocol base = protocol_from_json(protocol);
        write(figure_id + "_perturb.csv", perturb_csv(base, tau_grid));

        SweepSpec obs;
        obs.protocol = protocol;
        obs.subcommand = "observables";
        obs.tau_grid = tau_grid;
        obs.sigma_grid = {get("sigma_v", 0.1)};
        obs.mu_abs_grid =
            grid_from_json(overrides.is_object() ? overrides.value("mu_abs", json())
                                                 : json(),
                           {0.0, 0.5, 1.0, 2.0, 4.0});
        obs.method = overrides.is_object() ? overrides.value("method", std::string("closed"))
                                           : std::string("closed");
        obs.quadrature_n = static_cast<int>(get("quadrature_n", 40));
        obs.out_dir = out_dir;
        {
            // reuse the sweep runner, then rename its artifacts to the figure files
            SweepSpec tmp = obs;
            tmp.out_dir = out_dir + "/." + figure_id + "_tmp";
            run_sweep(tmp);
            std::filesystem::rename(tmp.out_dir + "/observables.csv",
                                    out_dir + "/" + figure_id + "_observables.csv");
            std::filesystem::rename(tmp.out_dir + "/manifest.json",
                                    out_dir + "/" + figure_id + "_observables_manifest.json");
            std::filesystem::remove_all(tmp.out_dir);
            written.push_back(out_dir + "/" + figure_id + "_observables.csv");
        }

        // phase-averaged TUR ratio vs |mu| at fixed tau
        {
            const double tau = get("tur_tau", 1.0);
            const double sigma = get("sigma_v", 0.1);
            const int n_phase = static_cast<int>(get("n_phase", 32));
            const StaSchedule schedule(protocol_at_tau(protocol, tau));
            const PerturbativeMap pmap = expand_map(schedule);
            CsvWriter csv;
            csv.comment("tau", fmt_num(tau));
            csv.comment("sigma_v", fmt_num(sigma));
            csv.comment("n_phase", std::to_string(n_phase));
            csv.header({"mu_abs", "R_E_avg", "excluded"});
            for (double mu_abs : obs.mu_abs_grid) {
                const PhaseAveragedTur avg =
                    phase_averaged_tur(schedule, pmap, ClockSpec{sigma}, mu_abs, n_phase);
                csv.row({fmt_num(mu_abs), fmt_num(avg.value), std::to_string(avg.excluded)});
            }
            write(figure_id + "_tur_mu.csv", csv);
        }
        return written;
    }

    throw std::invalid_argument("unknown figure id: " + figure_id);
}

}  // namespace clocksta
