// translab: command-line front end over the autonomy-depletion toolkit.
//
// Subcommands: analyze, simulate, solve, compare, validate, report.
// Configuration resolves in a fixed order: preset flag, then config file,
// then the remaining flags (flag overrides are logged to stderr). Every run
// writes its outputs plus a manifest into --out, and two runs with the same
// resolved configuration produce byte-identical files regardless of worker
// count.
//
// Exit codes: 0 ok, 1 validation failed, 2 usage or configuration error,
// 3 I/O error, 4 numeric failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "translab/analytic.hpp"
#include "translab/config.hpp"
#include "translab/hjb.hpp"
#include "translab/io.hpp"
#include "translab/params.hpp"
#include "translab/policy_lab.hpp"
#include "translab/simulate.hpp"
#include "translab/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace translab;

namespace {

// Flag storage shared by the subcommands; option pointers tell us which
// flags were actually passed so overrides can be logged.
struct Flags {
    std::string preset;
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::int64_t paths = 0;
    double dt = 0.0;
    int workers = 0;
    std::string what;
    double level = 2.0;
    std::string policy = "constant:4";
    std::string solution_path;

    CLI::Option* o_preset = nullptr;
    CLI::Option* o_config = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_paths = nullptr;
    CLI::Option* o_dt = nullptr;
};

void add_core_flags(CLI::App* c, Flags& f) {
    f.o_preset = c->add_option("--preset", f.preset, "named parameter preset");
    f.o_config =
        c->add_option("--config", f.config_path, "key=value configuration file");
    c->add_option("--out", f.out_dir, "output directory")
        ->default_str("out");
    c->add_option("--format", f.format,
                  "stdout summary format: csv or structured")
        ->check(CLI::IsMember({"csv", "structured"}))
        ->default_str("csv");
}

const CLI::Validator PositiveCount{
    [](std::string& s) -> std::string {
        long long v = 0;
        try {
            std::size_t pos = 0;
            v = std::stoll(s, &pos);
            if (pos != s.size()) return "must be a positive integer";
        } catch (...) {
            return "must be a positive integer";
        }
        return v > 0 ? std::string{} : "must be a positive integer";
    },
    "positive integer", "POSITIVE"};

const CLI::Validator NonNegativeCount{
    [](std::string& s) -> std::string {
        long long v = 0;
        try {
            std::size_t pos = 0;
            v = std::stoll(s, &pos);
            if (pos != s.size()) return "must be a non-negative integer";
        } catch (...) {
            return "must be a non-negative integer";
        }
        return v >= 0 ? std::string{} : "must be a non-negative integer";
    },
    "non-negative integer", "NONNEGATIVE"};

void add_sim_flags(CLI::App* c, Flags& f) {
    f.o_seed = c->add_option("--seed", f.seed, "master seed (sim.master_seed)");
    f.o_paths = c->add_option("--paths", f.paths, "path count (sim.n_paths)")
                    ->check(PositiveCount);
    c->add_option("--workers", f.workers,
                  "thread count hint; never affects output bytes")
        ->check(NonNegativeCount);
}

// Builds the run configuration: defaults, preset flag, config file, then
// flag overrides. dt_to_grid routes --dt to grid.dt (the solver substep)
// instead of sim.dt.
RunConfig resolve_config(const Flags& f, bool dt_to_grid) {
    RunConfig cfg;
    if (f.o_preset && f.o_preset->count()) apply_kv(cfg, "preset", f.preset);
    if (f.o_config && f.o_config->count()) apply_config_file(cfg, f.config_path);
    auto log_override = [](const char* key, const std::string& v,
                           const char* flag) {
        std::cerr << "override: " << key << " = " << v << " (" << flag << ")\n";
    };
    if (f.o_seed && f.o_seed->count()) {
        cfg.sim.master_seed = f.seed;
        log_override("sim.master_seed", std::to_string(f.seed), "--seed");
    }
    if (f.o_paths && f.o_paths->count()) {
        cfg.sim.n_paths = f.paths;
        log_override("sim.n_paths", std::to_string(f.paths), "--paths");
    }
    if (f.o_dt && f.o_dt->count()) {
        if (dt_to_grid) {
            cfg.grid.dt = f.dt;
            log_override("grid.dt", io::format_double(f.dt), "--dt");
        } else {
            cfg.sim.dt = f.dt;
            log_override("sim.dt", io::format_double(f.dt), "--dt");
        }
    }
    return cfg;
}

fs::path make_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir +
                                 "': " + ec.message());
    return fs::path(dir);
}

void put(const std::string& key, const std::string& value,
         const std::string& format) {
    if (format == "csv")
        std::cout << key << ',' << value << '\n';
    else
        std::cout << key << " = " << value << '\n';
}

void put(const std::string& key, double value, const std::string& format) {
    put(key, io::format_double(value), format);
}

// ---------------------------------------------------------------- analyze

int run_analyze(const Flags& f) {
    const RunConfig cfg = resolve_config(f, false);
    const ModelParams& p = cfg.params;
    const fs::path out = make_out_dir(f.out_dir);
    const io::RunStamp stamp{cfg.preset_name, 0, 0.0, 0};

    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string file;

    if (f.what == "critical-threshold") {
        const double x = critical_threshold(p);
        std::cout << io::format_double(x) << '\n';
        file = "critical_threshold.csv";
        columns = {"critical_threshold"};
        rows = {{x}};
    } else if (f.what == "drift-curve") {
        file = "drift_curve.csv";
        columns = {"level", "drift", "log_drift", "depleting"};
        const int n = 201;
        for (int k = 0; k < n; ++k) {
            const double lvl = p.i_max * k / (n - 1);
            const DriftValue d = drift(lvl, p);
            rows.push_back({lvl, d.value, d.value - 0.5 * p.sigma_a * p.sigma_a,
                            d.regime == DriftRegime::depleting ? 1.0 : 0.0});
        }
    } else if (f.what == "moments") {
        file = "moments.csv";
        columns = {"t", "mean", "variance"};
        const int n = 201;
        for (int k = 0; k < n; ++k) {
            const double t = p.horizon * k / (n - 1);
            rows.push_back({t, mean_autonomy(t, f.level, p),
                            variance_autonomy(t, f.level, p)});
        }
    } else if (f.what == "hitting-times") {
        file = "hitting_times.csv";
        columns = {"level", "expected_hitting_time", "hit_probability_by_horizon"};
        const int n = 101;
        for (int k = 0; k < n; ++k) {
            const double lvl = p.i_max * k / (n - 1);
            const HittingTime et = expected_hitting_time(p.a0, lvl, p.wm, p);
            rows.push_back(
                {lvl,
                 et.is_finite() ? et.value()
                                : std::numeric_limits<double>::infinity(),
                 hitting_probability(p.a0, lvl, p.wm, p.horizon, p)});
        }
    } else if (f.what == "boundaries") {
        file = "boundaries.csv";
        columns = {"wm_items", "boundary"};
        for (int k = 0; k <= 32; ++k) {
            const double wm = 0.25 * k;
            rows.push_back({wm, disengagement_boundary(wm, p)});
        }
    } else {
        throw ConfigError(
            "--what must be one of critical-threshold, drift-curve, moments, "
            "hitting-times, boundaries (got '" + f.what + "')");
    }

    io::write_csv((out / file).string(), stamp, columns, rows);
    ordered_json settings;
    settings["what"] = f.what;
    if (f.what == "moments") settings["level"] = f.level;
    settings["format"] = f.format;
    io::write_manifest((out / "manifest-analyze.json").string(), "analyze", p,
                       stamp, settings, {file});
    return 0;
}

// --------------------------------------------------------------- simulate

struct PolicyChoice {
    PolicyKind kind;
    double level = 0.0;
};

PolicyChoice parse_policy(const std::string& s) {
    if (s == "none") return {PolicyKind::no_transparency};
    if (s == "max") return {PolicyKind::max_transparency};
    if (s == "optimal") return {PolicyKind::optimal};
    const std::string prefix = "constant:";
    if (s.rfind(prefix, 0) == 0) {
        return {PolicyKind::constant_information,
                detail::parse_double("--policy", s.substr(prefix.size()))};
    }
    throw ConfigError("--policy must be none, max, constant:<level>, or "
                      "optimal (got '" + s + "')");
}

Policy build_policy(const PolicyChoice& pc, const ModelParams& p,
                    const std::string& solution_path,
                    std::shared_ptr<const HjbSolution>* loaded) {
    if (pc.kind != PolicyKind::optimal)
        return make_policy(pc.kind, p, pc.level);
    if (solution_path.empty())
        throw ConfigError("policy 'optimal' needs --solution <dump>");
    auto sol = std::make_shared<const HjbSolution>(load_solution(solution_path));
    if (loaded) *loaded = sol;
    return make_policy(PolicyKind::optimal, p, 0.0, sol);
}

int run_simulate(const Flags& f) {
    const RunConfig cfg = resolve_config(f, false);
    const ModelParams& p = cfg.params;
    const PolicyChoice pc = parse_policy(f.policy);
    const Policy pol = build_policy(pc, p, f.solution_path, nullptr);
    const fs::path out = make_out_dir(f.out_dir);

    const EnsembleResult ens =
        simulate_ensemble(pol, p, cfg.sim, f.workers);
    const io::RunStamp stamp{cfg.preset_name, cfg.sim.master_seed, cfg.sim.dt,
                             cfg.sim.n_paths};

    std::vector<std::vector<double>> traj;
    traj.reserve(ens.times.size());
    for (std::size_t k = 0; k < ens.times.size(); ++k)
        traj.push_back({ens.times[k], ens.mean_a[k], ens.var_a[k], ens.mean_i[k]});
    io::write_csv((out / "trajectory.csv").string(), stamp,
                  {"t", "mean_a", "var_a", "mean_i"}, traj);

    std::vector<std::vector<double>> summ;
    summ.reserve(ens.summaries.size());
    double tau_sum = 0.0;
    std::int64_t tau_n = 0;
    for (std::size_t k = 0; k < ens.summaries.size(); ++k) {
        const PathSummary& s = ens.summaries[k];
        const bool crossed = s.tau.has_value();
        if (crossed) {
            tau_sum += *s.tau;
            ++tau_n;
        }
        summ.push_back({static_cast<double>(k), crossed ? 1.0 : 0.0,
                        crossed ? *s.tau
                                : std::numeric_limits<double>::quiet_NaN(),
                        s.a_final, s.i_final, s.discounted_reward,
                        s.quality_score});
    }
    io::write_csv((out / "summaries.csv").string(), stamp,
                  {"path", "crossed", "tau", "a_final", "i_final",
                   "discounted_reward", "quality_score"},
                  summ);

    const PolicyReport rep = [&] {
        PolicyReport r;
        r.policy = to_string(pol.kind());
        r.n_paths = cfg.sim.n_paths;
        r.seed = cfg.sim.master_seed;
        double sum_a = 0.0, sum_q = 0.0, sum_r = 0.0;
        for (const PathSummary& s : ens.summaries) {
            sum_a += s.a_final;
            sum_q += s.quality_score;
            sum_r += s.discounted_reward;
        }
        const double n = static_cast<double>(ens.summaries.size());
        r.mean_final_autonomy = sum_a / n;
        r.mean_quality = sum_q / n;
        r.mean_discounted_reward = sum_r / n;
        r.disengagement_probability = ens.absorption_fraction;
        return r;
    }();
    put("policy", rep.policy, f.format);
    put("n_paths", std::to_string(rep.n_paths), f.format);
    put("mean_final_autonomy", rep.mean_final_autonomy, f.format);
    put("disengagement_probability", rep.disengagement_probability, f.format);
    put("mean_quality", rep.mean_quality, f.format);
    put("mean_discounted_reward", rep.mean_discounted_reward, f.format);
    put("mean_hitting_time",
        tau_n ? tau_sum / static_cast<double>(tau_n)
              : std::numeric_limits<double>::quiet_NaN(),
        f.format);

    ordered_json settings;
    settings["policy"] = f.policy;
    if (!f.solution_path.empty()) settings["solution"] = f.solution_path;
    settings["record_stride"] = cfg.sim.record_stride;
    settings["stream_base"] = cfg.sim.stream_base;
    settings["boundary_enabled"] = cfg.sim.boundary_enabled;
    settings["format"] = f.format;
    io::write_manifest((out / "manifest-simulate.json").string(), "simulate", p,
                       stamp, settings, {"trajectory.csv", "summaries.csv"});
    return 0;
}

// ------------------------------------------------------------------ solve

int run_solve(const Flags& f) {
    const RunConfig cfg = resolve_config(f, true);
    const ModelParams& p = cfg.params;
    const fs::path out = make_out_dir(f.out_dir);

    const HjbSolution s = solve_hjb(p, cfg.grid);
    save_solution(s, (out / "solution.bin").string());
    const io::RunStamp stamp{cfg.preset_name, 0, s.dt_used, 0};

    auto slice_index = [&](double t) {
        int m = static_cast<int>(t / s.dt_slice() + 0.5);
        return std::clamp(m, 0, s.grid.n_t - 1);
    };
    auto write_slice = [&](const std::string& file, int m, bool control) {
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(s.grid.n_a) * s.grid.n_i);
        for (int j = 0; j < s.grid.n_a; ++j)
            for (int k = 0; k < s.grid.n_i; ++k) {
                const double v =
                    control ? (s.control[s.idx(m, j, k)] ? p.u_max : 0.0)
                            : s.value[s.idx(m, j, k)];
                rows.push_back({s.a_of(j), s.i_of(k), v});
            }
        io::write_csv((out / file).string(), stamp,
                      {"a", "i", control ? "control_rate" : "value"}, rows);
    };
    const int m_mid = slice_index(0.5 * p.horizon);
    write_slice("value_t0.csv", 0, false);
    write_slice("control_t0.csv", 0, true);
    write_slice("control_tmid.csv", m_mid, true);

    std::vector<std::vector<double>> th_rows;
    for (const double t : {0.0, 0.5 * p.horizon}) {
        const ThresholdCurve tc = threshold_curve(s, t);
        for (std::size_t j = 0; j < tc.a.size(); ++j)
            th_rows.push_back({tc.t, tc.a[j], tc.i_star[j]});
    }
    io::write_csv((out / "threshold.csv").string(), stamp, {"t", "a", "i_star"},
                  th_rows);

    put("value_at_start", value_at(s, p.a0, p.i0, 0.0), f.format);
    put("dt_used", s.dt_used, f.format);
    put("total_substeps", std::to_string(s.total_substeps), f.format);

    ordered_json settings;
    settings["grid.a_max"] = cfg.grid.a_max;
    settings["grid.n_a"] = cfg.grid.n_a;
    settings["grid.n_i"] = cfg.grid.n_i;
    settings["grid.n_t"] = cfg.grid.n_t;
    settings["grid.dt"] = cfg.grid.dt;
    settings["dt_used"] = s.dt_used;
    settings["total_substeps"] = s.total_substeps;
    settings["format"] = f.format;
    io::write_manifest((out / "manifest-solve.json").string(), "solve", p,
                       stamp, settings,
                       {"solution.bin", "value_t0.csv", "control_t0.csv",
                        "control_tmid.csv", "threshold.csv"});
    return 0;
}

// ---------------------------------------------------------------- compare

ordered_json arm_json(const PolicyReport& r) {
    ordered_json j;
    j["policy"] = r.policy;
    j["n_paths"] = r.n_paths;
    j["seed"] = r.seed;
    j["mean_final_autonomy"] = r.mean_final_autonomy;
    j["disengagement_probability"] = r.disengagement_probability;
    j["mean_quality"] = r.mean_quality;
    j["mean_discounted_reward"] = r.mean_discounted_reward;
    j["se_discounted_reward"] = r.se_discounted_reward;
    return j;
}

int run_compare(const Flags& f) {
    const RunConfig cfg = resolve_config(f, false);
    const ModelParams& p = cfg.params;
    if (f.solution_path.empty())
        throw ConfigError("compare needs --solution <dump>");
    auto sol =
        std::make_shared<const HjbSolution>(load_solution(f.solution_path));
    const fs::path out = make_out_dir(f.out_dir);

    const ComparisonReport rep = compare_policies(p, cfg.sim, sol, f.workers);
    const io::RunStamp stamp{cfg.preset_name, cfg.sim.master_seed, cfg.sim.dt,
                             cfg.sim.n_paths};

    std::vector<std::vector<double>> traj;
    traj.reserve(rep.times.size());
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        traj.push_back({rep.times[k], rep.mean_a_optimal[k], rep.mean_a_max[k],
                        rep.mean_a_none[k]});
    io::write_csv((out / "trajectories.csv").string(), stamp,
                  {"t", "mean_a_optimal", "mean_a_max", "mean_a_none"}, traj);

    std::vector<std::string> arm_lines = io::stamp_lines(stamp);
    arm_lines.push_back(
        "policy,mean_final_autonomy,disengagement_probability,mean_quality,"
        "mean_discounted_reward,se_discounted_reward");
    for (const PolicyReport* r :
         {&rep.optimal, &rep.max_transparency, &rep.no_transparency}) {
        arm_lines.push_back(r->policy + ',' +
                            io::format_double(r->mean_final_autonomy) + ',' +
                            io::format_double(r->disengagement_probability) +
                            ',' + io::format_double(r->mean_quality) + ',' +
                            io::format_double(r->mean_discounted_reward) + ',' +
                            io::format_double(r->se_discounted_reward));
    }
    io::write_lines((out / "arms.csv").string(), arm_lines);

    ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["preset"] = cfg.preset_name;
    j["seed"] = cfg.sim.master_seed;
    j["dt"] = cfg.sim.dt;
    j["n_paths"] = cfg.sim.n_paths;
    j["terminal_convention"] = kTerminalConvention;
    j["quality_metric"] = kQualityMetricId;
    j["rng"] = kRngId;
    j["arms"]["optimal"] = arm_json(rep.optimal);
    j["arms"]["max"] = arm_json(rep.max_transparency);
    j["arms"]["none"] = arm_json(rep.no_transparency);
    j["orderings"]["autonomy_ordering_ok"] = rep.autonomy_ordering_ok;
    j["orderings"]["disengagement_ordering_ok"] = rep.disengagement_ordering_ok;
    j["orderings"]["reward_ok"] = rep.reward_ok;
    j["orderings"]["all_ok"] = rep.all_ok();
    io::write_lines((out / "comparison.json").string(), {j.dump(2)});

    for (const PolicyReport* r :
         {&rep.optimal, &rep.max_transparency, &rep.no_transparency}) {
        put(r->policy + ".mean_final_autonomy", r->mean_final_autonomy,
            f.format);
        put(r->policy + ".disengagement_probability",
            r->disengagement_probability, f.format);
        put(r->policy + ".mean_discounted_reward", r->mean_discounted_reward,
            f.format);
    }
    put("autonomy_ordering_ok", rep.autonomy_ordering_ok ? "1" : "0", f.format);
    put("disengagement_ordering_ok", rep.disengagement_ordering_ok ? "1" : "0",
        f.format);
    put("reward_ok", rep.reward_ok ? "1" : "0", f.format);

    ordered_json settings;
    settings["solution"] = f.solution_path;
    settings["record_stride"] = cfg.sim.record_stride;
    settings["format"] = f.format;
    io::write_manifest((out / "manifest-compare.json").string(), "compare", p,
                       stamp, settings,
                       {"trajectories.csv", "arms.csv", "comparison.json"});
    return 0;
}

// --------------------------------------------------------------- validate

int run_validate(const Flags& f) {
    const RunConfig cfg = resolve_config(f, false);
    const ModelParams& p = cfg.params;
    ValidationConfig vc;
    vc.n_paths = cfg.sim.n_paths;
    vc.dt = cfg.sim.dt;
    vc.master_seed = cfg.sim.master_seed;
    vc.workers = f.workers;
    const fs::path out = make_out_dir(f.out_dir);

    const ValidationReport rep = run_validation(p, vc, cfg.preset_name);
    io::write_lines((out / "report.json").string(), {to_json(rep).dump(2)});
    std::string text = to_text(rep);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    io::write_lines((out / "report.txt").string(), {text});

    std::vector<std::string> outputs = {"report.json", "report.txt"};
    auto dump_record_csv = [&](const std::string& slug,
                               const std::vector<std::string>& cols,
                               const std::vector<std::vector<double>>& rows,
                               std::uint64_t seed, std::int64_t n_paths) {
        if (rows.empty()) return;
        const std::string file = slug + ".csv";
        io::write_csv((out / file).string(),
                      {cfg.preset_name, seed, vc.dt, n_paths}, cols, rows);
        outputs.push_back(file);
    };
    for (const auto& r : rep.predictions)
        dump_record_csv(r.slug, r.csv_columns, r.csv_rows, r.seed, r.n_paths);
    for (const auto& t : rep.tables)
        dump_record_csv(t.slug, t.csv_columns, t.csv_rows, t.seed, t.n_paths);

    if (f.format == "structured") {
        std::cout << to_text(rep);
    } else {
        for (const auto& r : rep.predictions)
            std::cout << r.id << ','
                      << (r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL"))
                      << ',' << flags_raised(r.rows) << '\n';
        for (const auto& t : rep.tables)
            std::cout << t.id << ',' << (t.pass ? "PASS" : "FAIL") << ','
                      << flags_raised(t.rows) << '\n';
        std::cout << "overall," << (rep.all_pass ? "PASS" : "FAIL") << '\n';
    }

    ordered_json settings;
    settings["bootstrap_resamples"] = vc.bootstrap_resamples;
    settings["reference_version"] = rep.reference_version;
    settings["format"] = f.format;
    io::write_manifest((out / "manifest-validate.json").string(), "validate", p,
                       {cfg.preset_name, vc.master_seed, vc.dt, vc.n_paths},
                       settings, outputs);
    return rep.all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- report

// Pure collation: reads whatever earlier runs left in the directory and
// writes one summary. Never recomputes, so it cannot drift from the
// artifacts it describes.
int run_report(const Flags& f) {
    const fs::path dir(f.out_dir);
    if (!fs::is_directory(dir))
        throw std::runtime_error("report: no such directory: " + f.out_dir);

    std::vector<std::string> manifest_names;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("manifest-", 0) == 0 && name != "manifest-report.json" &&
            name.size() > 5 && name.substr(name.size() - 5) == ".json")
            manifest_names.push_back(name);
    }
    std::sort(manifest_names.begin(), manifest_names.end());

    auto parse_json_file = [&](const fs::path& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("report: cannot open " + path.string());
        try {
            return ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("report: bad JSON in " + path.string() +
                                     ": " + e.what());
        }
    };

    std::vector<std::string> lines;
    lines.push_back("collated run summary");
    lines.push_back("directory: " + f.out_dir);
    lines.push_back("");
    std::vector<std::string> inputs;
    for (const auto& name : manifest_names) {
        const ordered_json m = parse_json_file(dir / name);
        inputs.push_back(name);
        lines.push_back("run " + m.value("command", std::string("?")) +
                        ": preset=" + m.value("preset", std::string("?")) +
                        " seed=" + std::to_string(m.value("seed", 0ull)) +
                        " dt=" + io::format_double(m.value("dt", 0.0)) +
                        " n_paths=" + std::to_string(m.value("n_paths", 0ll)));
        if (m.contains("outputs"))
            for (const auto& o : m["outputs"]) {
                const std::string fname = o.get<std::string>();
                const bool present = fs::exists(dir / fname);
                lines.push_back("  output " + fname +
                                (present ? " [present]" : " [missing]"));
            }
    }
    if (fs::exists(dir / "report.json")) {
        const ordered_json r = parse_json_file(dir / "report.json");
        inputs.push_back("report.json");
        lines.push_back("");
        lines.push_back(std::string("validation: overall ") +
                        (r.value("all_pass", false) ? "PASS" : "FAIL"));
        auto describe = [&](const ordered_json& rec, const std::string& label) {
            const bool skipped = rec.value("skipped", false);
            lines.push_back(
                "  " + label + ": " +
                (skipped ? "SKIP" : (rec.value("pass", false) ? "PASS" : "FAIL")) +
                " flags=" + std::to_string(rec.value("flags_raised", 0)));
        };
        if (r.contains("predictions"))
            for (const auto& rec : r["predictions"])
                describe(rec, rec.value("id", std::string("?")));
        if (r.contains("tables"))
            for (const auto& rec : r["tables"])
                describe(rec, "table " + rec.value("id", std::string("?")));
    }
    if (fs::exists(dir / "comparison.json")) {
        const ordered_json c = parse_json_file(dir / "comparison.json");
        inputs.push_back("comparison.json");
        lines.push_back("");
        const ordered_json o =
            c.contains("orderings") ? c["orderings"] : ordered_json::object();
        lines.push_back(std::string("comparison: autonomy_ordering_ok=") +
                        (o.value("autonomy_ordering_ok", false) ? "1" : "0") +
                        " disengagement_ordering_ok=" +
                        (o.value("disengagement_ordering_ok", false) ? "1" : "0") +
                        " reward_ok=" + (o.value("reward_ok", false) ? "1" : "0"));
    }
    if (inputs.empty()) lines.push_back("no artifacts found");

    io::write_lines((dir / "summary.txt").string(), lines);
    for (const auto& l : lines) std::cout << l << '\n';

    ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["command"] = "report";
    j["settings"]["directory"] = f.out_dir;
    j["settings"]["format"] = f.format;
    j["inputs"] = inputs;
    j["outputs"] = {"summary.txt"};
    io::write_lines((dir / "manifest-report.json").string(), {j.dump(2)});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-control laboratory for transparency and autonomy"};
    app.require_subcommand(1);

    Flags fa, fsim, fsol, fc, fv, fr;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "closed-form curves and scalars, no simulation");
    add_core_flags(analyze, fa);
    analyze
        ->add_option("--what", fa.what,
                     "critical-threshold, drift-curve, moments, hitting-times, "
                     "or boundaries")
        ->required();
    analyze->add_option("--level", fa.level,
                        "pinned information level for --what moments");

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo ensemble under a policy");
    add_core_flags(simulate, fsim);
    add_sim_flags(simulate, fsim);
    fsim.o_dt = simulate->add_option("--dt", fsim.dt, "step size (sim.dt)")
                    ->check(CLI::PositiveNumber);
    simulate->add_option("--policy", fsim.policy,
                         "none, max, constant:<level>, or optimal");
    simulate->add_option("--solution", fsim.solution_path,
                         "solution dump for --policy optimal");

    CLI::App* solve = app.add_subcommand(
        "solve", "dynamic-programming solve; writes a solution dump");
    add_core_flags(solve, fsol);
    fsol.o_dt =
        solve->add_option("--dt", fsol.dt, "integration substep (grid.dt)")
            ->check(CLI::PositiveNumber);

    CLI::App* compare = app.add_subcommand(
        "compare", "three-arm policy comparison against a solution dump");
    add_core_flags(compare, fc);
    add_sim_flags(compare, fc);
    fc.o_dt = compare->add_option("--dt", fc.dt, "step size (sim.dt)")
                  ->check(CLI::PositiveNumber);
    compare->add_option("--solution", fc.solution_path, "solution dump")
        ->required();

    CLI::App* validate = app.add_subcommand(
        "validate", "prediction suite and reference-table reproduction");
    add_core_flags(validate, fv);
    add_sim_flags(validate, fv);
    fv.o_dt = validate->add_option("--dt", fv.dt, "step size (sim.dt)")
                  ->check(CLI::PositiveNumber);

    CLI::App* report = app.add_subcommand(
        "report", "collate manifests and reports already in --out");
    add_core_flags(report, fr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(fa);
        if (simulate->parsed()) return run_simulate(fsim);
        if (solve->parsed()) return run_solve(fsol);
        if (compare->parsed()) return run_compare(fc);
        if (validate->parsed()) return run_validate(fv);
        if (report->parsed()) return run_report(fr);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const HjbNumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const PolicyContractViolation& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}
