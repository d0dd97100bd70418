#include "jcdiss/commands.hpp"

#include "jcdiss/analysis.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <thread>

namespace jcdiss {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string output_path(const Scenario& s, const CommandOptions& opt, const std::string& file) {
    const std::filesystem::path dir = opt.out_dir ? *opt.out_dir : s.output.directory;
    return (dir / file).string();
}

void write_output(const std::string& path, const std::string& content, const CommandOptions& opt, std::ostream& err) {
    try {
        write_file(path, content);
    } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("output: ") + e.what());
    }
    if (opt.verbose) err << "wrote " << path << "\n";
}

Scenario load_single(const CommandOptions& opt) {
    if (opt.configs.size() != 1) throw ConfigError("expected exactly one --config");
    Scenario s = load_scenario(opt.configs.front());
    validate_scenario(s);
    return s;
}

IntegratorConfig<double> integrator_config(const EvolutionSpec& e) {
    IntegratorConfig<double> c;
    c.dt = e.dt;
    c.record_every = e.record_every;
    return c;
}

TimescaleCheck scenario_timescales(const Scenario& s) {
    const auto& p = require_system(s);
    const auto& g = require_generator(s);
    if (is_phenomenological(g.kind)) return timescale_check(p, *g.gamma);
    return timescale_check(p, require_bath_model(s));
}

ordered_json generator_json(const Scenario& s, const Liouvillian<double>& L) {
    ordered_json j{{"kind", to_string(L.kind)}};
    if (L.gamma) j["gamma"] = *L.gamma;
    if (L.temperature) j["temperature"] = *L.temperature;
    if (L.bath) j["bath"] = to_json(*L.bath);
    j["downward_terms"] = L.downward_terms;
    j["upward_terms"] = L.upward_terms;
    j["source"] = s.source;
    return j;
}

struct HealthExtrema {
    double trace_deviation_max{0};
    double hermiticity_defect_max{0};
    double min_eigenvalue_min{std::numeric_limits<double>::infinity()};
    double purity_min{std::numeric_limits<double>::infinity()};
    double top_manifold_population_max{0};
};

HealthExtrema extrema(const Trajectory<double>& traj, int n_max) {
    HealthExtrema h;
    for (double x : traj["trace"]) h.trace_deviation_max = std::max(h.trace_deviation_max, std::abs(x - 1));
    for (double x : traj["herm_defect"]) h.hermiticity_defect_max = std::max(h.hermiticity_defect_max, x);
    for (double x : traj["min_eig"]) h.min_eigenvalue_min = std::min(h.min_eigenvalue_min, x);
    for (double x : traj["purity"]) h.purity_min = std::min(h.purity_min, x);
    const std::string lo = "p_" + DressedLabel{n_max, Sign::Minus}.name();
    const std::string hi = "p_" + DressedLabel{n_max, Sign::Plus}.name();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double top = n_max == 0 ? 1.0 : traj[lo][k] + traj[hi][k];
        h.top_manifold_population_max = std::max(h.top_manifold_population_max, top);
    }
    return h;
}

ordered_json simulate_summary(const Scenario& s, const Liouvillian<double>& L, const Trajectory<double>& traj) {
    const auto& p = require_system(s);
    const auto basis = build_dressed_basis(p);
    const auto h = extrema(traj, p.n_max);
    const std::size_t last = traj.size() - 1;

    ordered_json populations;
    for (const auto& lab : basis.labels) populations[lab.name()] = traj["p_" + lab.name()][last];

    ordered_json j;
    j["generator"] = generator_json(s, L);
    j["system"] = to_json(p);
    j["dt"] = traj.dt;
    j["steps"] = static_cast<long long>(std::llround(traj.times[last] / traj.dt));
    j["samples"] = traj.size();
    j["final"] = {{"time", traj.times[last]},
                  {"sz", traj["sz"][last]},
                  {"n_phot", traj["n_phot"][last]},
                  {"purity", traj["purity"][last]},
                  {"populations", populations}};
    j["health"] = {{"trace_deviation_max", json_number(h.trace_deviation_max)},
                   {"hermiticity_defect_max", json_number(h.hermiticity_defect_max)},
                   {"min_eigenvalue_min", json_number(h.min_eigenvalue_min)},
                   {"purity_min", json_number(h.purity_min)}};
    j["leakage"] = {{"top_manifold_population_max", json_number(h.top_manifold_population_max)},
                    {"threshold", kLeakageThreshold},
                    {"warning", h.top_manifold_population_max > kLeakageThreshold}};
    j["timescale_check"] = to_json(scenario_timescales(s));
    return j;
}

// ------------------------------------------------------------------ sweep metrics

struct PointResult {
    std::vector<double> values;  // one per requested metric
    std::vector<std::string> warnings;
};

bool needs_trajectory(const std::string& m) {
    return m.rfind("final_", 0) == 0 || m == "purity_min" || m == "min_eig_min" || m == "trace_dev_max" ||
           m.rfind("rabi_", 0) == 0;
}

PointResult evaluate_point(const Scenario& s, const std::vector<std::string>& metrics) {
    validate_scenario(s);
    const auto& p = require_system(s);
    PointResult out;

    std::optional<Liouvillian<double>> L;
    std::optional<Trajectory<double>> traj;
    std::optional<RabiFit> fit;
    bool fit_failed = false;
    std::optional<RateSpreadReport> spread;
    std::optional<TimescaleCheck> scales;

    auto generator = [&]() -> const Liouvillian<double>& {
        if (!L) L = build_generator(s);
        return *L;
    };
    auto trajectory = [&]() -> const Trajectory<double>& {
        if (!traj) {
            const auto basis = build_dressed_basis(p);
            traj = evolve(generator(), build_initial_state(s, basis), require_evolution(s).t_end,
                          integrator_config(require_evolution(s)));
        }
        return *traj;
    };
    auto rabi = [&]() -> const RabiFit* {
        if (!fit && !fit_failed) {
            const auto& g = require_generator(s);
            try {
                fit = is_phenomenological(g.kind) ? fit_rabi(trajectory(), "sz", p.Omega, *g.gamma)
                                                  : fit_rabi(trajectory(), "sz");
            } catch (const RabiFitError& e) {
                fit_failed = true;
                out.warnings.push_back(std::string("rabi fit failed: ") + e.what());
            }
        }
        return fit ? &*fit : nullptr;
    };

    for (const auto& m : metrics) {
        double v = kNaN;
        if (needs_trajectory(m)) trajectory();
        if (m == "final_sz") v = traj->series.at("sz").back();
        else if (m == "final_n_phot") v = traj->series.at("n_phot").back();
        else if (m == "purity_min") v = extrema(*traj, p.n_max).purity_min;
        else if (m == "min_eig_min") v = extrema(*traj, p.n_max).min_eigenvalue_min;
        else if (m == "trace_dev_max") v = extrema(*traj, p.n_max).trace_deviation_max;
        else if (m == "rabi_frequency") {
            if (const auto* f = rabi()) v = f->frequency;
        } else if (m == "rabi_frequency_ratio") {
            if (const auto* f = rabi()) v = f->frequency / (2 * p.Omega);
        } else if (m == "rabi_predicted_ratio") {
            if (const auto* f = rabi(); f && f->predicted_frequency) v = *f->predicted_frequency / (2 * p.Omega);
        } else if (m == "rabi_relative_error") {
            if (const auto* f = rabi(); f && f->relative_error) v = *f->relative_error;
        } else if (m == "rate_spread_down" || m == "rate_spread_up") {
            if (!spread) spread = rate_spread(p, require_bath_model(s));
            v = m == "rate_spread_down" ? spread->downward_spread : spread->upward_spread;
        } else if (m == "strong_coupling_ratio" || m == "optical_ratio") {
            if (!scales) scales = scenario_timescales(s);
            v = m == "optical_ratio" ? scales->optical_ratio : scales->strong_coupling_ratio;
        } else if (m == "kossakowski_min_eig") {
            v = kossakowski_report(generator(), jump_operator_basis(build_dressed_basis(p))).min_eigenvalue;
        }
        out.values.push_back(v);
    }
    return out;
}

unsigned sweep_threads(std::size_t points) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("JC_DISSIPATOR_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1) {
            throw ConfigError(std::string("JC_DISSIPATOR_THREADS: expected a positive integer, got '") + env + "'");
        }
        n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, points)));
}

// ------------------------------------------------------------------ lindblad check

ordered_json kossakowski_entry(const Liouvillian<double>& L) {
    const auto rep = kossakowski_report(L, jump_operator_basis(build_dressed_basis(L.params)));
    return to_json(rep);
}

}  // namespace

std::vector<std::string> sweep_metrics() {
    return {"final_sz",        "final_n_phot",          "purity_min",          "min_eig_min",
            "trace_dev_max",   "rabi_frequency",        "rabi_frequency_ratio", "rabi_predicted_ratio",
            "rabi_relative_error", "rate_spread_down",  "rate_spread_up",      "strong_coupling_ratio",
            "optical_ratio",   "kossakowski_min_eig"};
}

int run_simulate(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = load_single(opt);
    const auto& p = require_system(s);
    const auto& ev = require_evolution(s);
    const auto L = build_generator(s);
    const auto basis = build_dressed_basis(p);
    const auto rho0 = build_initial_state(s, basis);
    if (opt.export_generator) write_output(*opt.export_generator, matrix_csv(L.matrix), opt, err);

    const std::string traj_path = output_path(s, opt, s.output.trajectory);
    const std::string summary_path = output_path(s, opt, s.output.summary);
    try {
        const auto traj = evolve(L, rho0, ev.t_end, integrator_config(ev));
        write_output(traj_path, trajectory_csv(traj), opt, err);
        const auto summary = simulate_summary(s, L, traj);
        write_output(summary_path, dump(summary), opt, err);
        if (summary["leakage"]["warning"].get<bool>()) {
            err << "warning: top-manifold population reached "
                << summary["leakage"]["top_manifold_population_max"].get<double>()
                << "; raise system.n_max to make truncation safe\n";
        }
        out << "simulate: " << to_string(L.kind) << ", " << traj.size() << " samples, final sz "
            << format_number(traj["sz"].back()) << "\n";
        return kExitOk;
    } catch (const EvolutionAborted<double>& e) {
        ordered_json summary;
        if (!e.trajectory.times.empty()) {
            write_output(traj_path, trajectory_csv(e.trajectory), opt, err);
            summary = simulate_summary(s, L, e.trajectory);
        } else {
            summary["generator"] = generator_json(s, L);
            summary["system"] = to_json(p);
        }
        summary["aborted"] = {{"reason", e.what()}, {"last_valid_time", e.last_valid_time}};
        write_output(summary_path, dump(summary), opt, err);
        err << "error: evolution aborted: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int run_compare(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.configs.size() != 2) throw ConfigError("compare: expected --config A --config B");
    std::vector<Scenario> s;
    std::vector<Liouvillian<double>> L;
    for (const auto& path : opt.configs) {
        s.push_back(load_scenario(path));
        validate_scenario(s.back());
        L.push_back(build_generator(s.back()));
    }
    if (L[0].matrix.rows() != L[1].matrix.rows()) {
        throw ConfigError("compare: dimension mismatch (n_max " + std::to_string(L[0].params.n_max) + " vs " +
                          std::to_string(L[1].params.n_max) + ")");
    }
    const auto rep = compare_generators(L[0], L[1]);
    ordered_json j;
    j["config_a"] = opt.configs[0];
    j["config_b"] = opt.configs[1];
    j["generator_a"] = generator_json(s[0], L[0]);
    j["generator_b"] = generator_json(s[1], L[1]);
    j["system_a"] = to_json(L[0].params);
    j["system_b"] = to_json(L[1].params);
    j["comparison"] = to_json(rep);
    write_output(output_path(s[0], opt, s[0].output.report), dump(j), opt, err);
    out << "compare: " << to_string(rep.kind_a) << " vs " << to_string(rep.kind_b) << ", distance "
        << format_number(rep.distance) << (rep.coincident ? " (coincident)" : "") << "\n";
    return kExitOk;
}

int run_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = load_single(opt);
    if (!s.sweep) throw ConfigError(s.source + ": sweep: section is required");
    const auto& sw = *s.sweep;
    const auto known = sweep_metrics();
    if (sw.metrics.empty()) throw ConfigError(s.source + ": sweep.metrics: list at least one metric");
    for (const auto& m : sw.metrics) {
        if (std::find(known.begin(), known.end(), m) == known.end()) {
            throw ConfigError(s.source + ": sweep.metrics: unknown metric '" + m + "'");
        }
    }
    // Resolve every point before any work so axis errors exit early.
    std::vector<Scenario> points;
    for (double v : sw.values) points.push_back(with_axis_value(s, sw.axis, v));

    std::vector<PointResult> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                results[i] = evaluate_point(points[i], sw.metrics);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned nthreads = points.empty() ? 1 : sweep_threads(points.size());
    if (opt.verbose) err << "sweep: " << points.size() << " points on " << nthreads << " thread(s)\n";
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i]) continue;
        err << "sweep: point " << sw.axis << "=" << format_number(sw.values[i]) << " failed\n";
        std::rethrow_exception(errors[i]);
    }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& w : results[i].warnings) {
            err << "warning: " << sw.axis << "=" << format_number(sw.values[i]) << ": " << w << "\n";
        }
        for (std::size_t k = 0; k < sw.metrics.size(); ++k) rows.push_back({sw.values[i], sw.metrics[k], results[i].values[k]});
    }
    write_output(output_path(s, opt, s.output.sweep), sweep_csv(rows), opt, err);
    out << "sweep: " << sw.axis << ", " << points.size() << " points, " << rows.size() << " rows\n";
    return kExitOk;
}

int run_fig1(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    Scenario s;
    if (!opt.configs.empty()) s = load_single(opt);
    const Fig1Spec f = s.fig1.value_or(Fig1Spec{});
    if (f.temperatures.points < 1 || f.offsets.points < 1) throw ConfigError("fig1: grids need at least one point");
    const auto surface = delta_n_surface(f.omega, f.temperatures.values(), f.offsets.values());
    const std::string path = output_path(s, opt, s.output.surface);
    write_output(path, surface_csv(surface), opt, err);
    out << "fig1: " << surface.temperatures.size() << " x " << surface.offsets.size() << " surface\n";
    return kExitOk;
}

int run_lindblad_check(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario s = load_single(opt);
    const auto& p = require_system(s);
    const LindbladCheckSpec grid = s.lindblad_check.value_or(LindbladCheckSpec{});

    ordered_json points = ordered_json::array();
    ordered_json most_negative;
    double worst = std::numeric_limits<double>::infinity();
    bool found_violation = false;
    bool secular_all_lindblad = true;
    for (double T : grid.temperatures.values()) {
        for (double eta : grid.eta) {
            for (double wc : grid.omega_c) {
                const BathModel bath{OhmicSpectrum{eta, wc}, T, s.bath.lamb_shift};
                const auto quasi = kossakowski_entry(build_quasi_rwa(p, bath));
                const auto secular = kossakowski_entry(build_secular(p, bath));
                if (secular["is_lindblad"] != true) secular_all_lindblad = false;
                if (quasi["is_lindblad"] == false) found_violation = true;
                ordered_json point{{"temperature", T}, {"eta", eta}, {"omega_c", wc}, {"quasi_rwa", quasi},
                                   {"secular_rwa", secular}};
                const double m = quasi["min_eigenvalue"].is_number() ? quasi["min_eigenvalue"].get<double>() : kNaN;
                if (m < worst) {
                    worst = m;
                    most_negative = point;
                }
                if (opt.verbose) {
                    err << "T=" << T << " eta=" << eta << " omega_c=" << wc << " quasi min eig " << m << "\n";
                }
                points.push_back(std::move(point));
            }
        }
    }

    ordered_json j;
    j["system"] = to_json(p);
    j["spectrum"] = "ohmic";
    j["grid"] = {{"temperatures", grid.temperatures.values()}, {"eta", grid.eta}, {"omega_c", grid.omega_c}};
    j["points"] = points;
    j["most_negative"] = most_negative;
    j["found_violation"] = found_violation;
    j["secular_all_lindblad"] = secular_all_lindblad;
    if (s.generator) {
        const auto L = build_generator(s);
        j["scenario_generator"] = {{"generator", generator_json(s, L)}, {"kossakowski", kossakowski_entry(L)}};
    }
    write_output(output_path(s, opt, s.output.report), dump(j), opt, err);
    out << "lindblad-check: " << points.size() << " points, most negative quasi_rwa eigenvalue "
        << format_number(worst) << (found_violation ? " (violation found)" : "") << "\n";
    return kExitOk;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Dissipative Jaynes-Cummings master-equation driver"};
    app.require_subcommand(1);

    CommandOptions opt;
    std::vector<std::string> configs;
    std::string out_dir;
    long long seed = 0;
    std::string export_generator;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", configs, "scenario YAML file");
        if (config_required) c->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
        sub->add_option("--seed", seed, "reserved; the dynamics are deterministic");
        sub->add_flag("--verbose,-v", opt.verbose, "progress on stderr");
    };
    auto* simulate = app.add_subcommand("simulate", "evolve one scenario; write trajectory CSV and summary JSON");
    add_common(simulate, true);
    simulate->add_option("--export-generator", export_generator, "write the Liouvillian as CSV (re,im pairs)");
    auto* compare = app.add_subcommand("compare", "distance between two generators; pass --config twice");
    add_common(compare, true);
    auto* sweep = app.add_subcommand("sweep", "scan one numeric field; long-format CSV");
    add_common(sweep, true);
    auto* fig1 = app.add_subcommand("fig1", "thermal occupation difference surface");
    add_common(fig1, false);
    auto* lindblad = app.add_subcommand("lindblad-check", "Kossakowski spectrum over an Ohmic parameter grid");
    add_common(lindblad, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }
    opt.configs = configs;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (simulate->count("--seed") + compare->count("--seed") + sweep->count("--seed") + fig1->count("--seed") +
            lindblad->count("--seed") > 0) {
        opt.seed = seed;
    }
    if (!export_generator.empty()) opt.export_generator = export_generator;

    try {
        if (*simulate) return run_simulate(opt, std::cout, std::cerr);
        if (*compare) return run_compare(opt, std::cout, std::cerr);
        if (*sweep) return run_sweep(opt, std::cout, std::cerr);
        if (*fig1) return run_fig1(opt, std::cout, std::cerr);
        return run_lindblad_check(opt, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EvolutionAborted<double>& e) {
        std::cerr << "error: evolution aborted: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace jcdiss
