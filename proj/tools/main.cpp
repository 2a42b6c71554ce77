#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rftrack/fitting.hpp"
#include "rftrack/sim.hpp"

namespace fs = std::filesystem;
using namespace rftrack;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    int jobs = 1;
};

Config load_with_overrides(const CommonOpts& opts) {
    Config cfg = load_config(opts.config_path);
    for (const auto& o : opts.overrides) apply_override(cfg, o);
    if (opts.seed >= 0)
        cfg.scenario.seed = static_cast<std::uint64_t>(opts.seed);
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    cmd->add_option("--config", opts.config_path, "Scenario+planner config (TOML or JSON)")
        ->required(config_required);
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--set", opts.overrides,
                    "Dotted-path override, e.g. planner.alpha=0.5 (repeatable)");
    cmd->add_option("--seed", opts.seed, "Override the config seed");
    cmd->add_option("--jobs", opts.jobs, "Worker threads for Monte Carlo runs");
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ':' || c == '/' || c == ' ') c = '-';
    return out;
}

int cmd_run(const CommonOpts& opts, bool snapshots, bool trace) {
    const Config cfg = load_with_overrides(opts);
    const AntennaPattern pattern = cfg.antenna.build();

    fs::create_directories(opts.out_dir);
    std::ofstream snap_os, trace_os;
    RunHooks hooks;
    if (snapshots) {
        snap_os.open(fs::path(opts.out_dir) / "particles.csv");
        snap_os << "time_s,target_id,px,py,weight\n";
        hooks.particle_snapshots = &snap_os;
    }
    if (trace) {
        trace_os.open(fs::path(opts.out_dir) / "planner_trace.jsonl");
        hooks.planner_trace = &trace_os;
    }

    const RunResult r = run_scenario(cfg, pattern, hooks);

    std::ofstream(fs::path(opts.out_dir) / "run_result.json")
        << run_result_to_json(r).dump(2) << '\n';
    {
        std::ofstream os(fs::path(opts.out_dir) / "trajectory.csv");
        write_trajectory_csv(os, r);
    }
    {
        std::ofstream os(fs::path(opts.out_dir) / "estimates.csv");
        write_estimates_csv(os, r);
    }
    std::cout << "localized " << r.localized_count << "/" << cfg.scenario.n_targets
              << " targets, D_rms " << fmt_double(r.mean_rms) << " m, flight "
              << fmt_double(r.flight_time) << " s, travel "
              << fmt_double(r.travel_distance) << " m\n";
    return 0;
}

int cmd_mc(const CommonOpts& opts, int runs) {
    const Config cfg = load_with_overrides(opts);
    const AntennaPattern pattern = cfg.antenna.build();
    fs::create_directories(opts.out_dir);

    const fs::path runs_path = fs::path(opts.out_dir) / "runs.jsonl";
    std::ofstream runs_os(runs_path);
    auto on_run = [&](int i, const RunResult& r) {
        nlohmann::json j = run_result_to_json(r);
        j["run"] = i;
        j.erase("targets");
        runs_os << j.dump() << '\n';
        runs_os.flush();  // keep completed runs durable on interrupt
    };

    const McSummary s =
        monte_carlo(cfg, pattern, runs, cfg.scenario.seed, opts.jobs, on_run);

    std::vector<SweepRow> rows{{to_string(cfg.planner.policy), s}};
    std::ofstream os(fs::path(opts.out_dir) / "summary.csv");
    write_summary_csv(os, rows);
    std::cout << runs << " runs: D_rms " << fmt_double(s.rms.mean) << " +/- "
              << fmt_double(s.rms.stddev) << " m, flight "
              << fmt_double(s.flight_time.mean) << " +/- "
              << fmt_double(s.flight_time.stddev) << " s\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, int runs_override) {
    const Config cfg = load_with_overrides(opts);
    if (cfg.sweep.parameter.empty())
        throw std::invalid_argument("config has no [sweep] section");
    const AntennaPattern pattern = cfg.antenna.build();
    fs::create_directories(opts.out_dir);

    const int runs = runs_override > 0 ? runs_override : cfg.sweep.runs;
    std::vector<SweepRow> rows;
    for (const auto& v : cfg.sweep.values) {
        Config c = cfg;
        apply_sweep_value(c, cfg.sweep.parameter, v);
        std::ofstream runs_os(fs::path(opts.out_dir) /
                              ("runs_" + sanitize(v) + ".jsonl"));
        auto on_run = [&](int i, const RunResult& r) {
            nlohmann::json j = run_result_to_json(r);
            j["run"] = i;
            j.erase("targets");
            runs_os << j.dump() << '\n';
            runs_os.flush();
        };
        rows.push_back({v, monte_carlo(c, pattern, runs, cfg.scenario.seed,
                                       opts.jobs, on_run)});
        std::cout << cfg.sweep.parameter << "=" << v << ": D_rms "
                  << fmt_double(rows.back().summary.rms.mean) << " m, flight "
                  << fmt_double(rows.back().summary.flight_time.mean) << " s\n";
    }
    std::ofstream os(fs::path(opts.out_dir) / "summary.csv");
    write_summary_csv(os, rows);
    return 0;
}

void write_fit_outputs(const fs::path& out_dir, const std::string& name,
                       const std::vector<RangeRssiSample>& samples,
                       PropagationKind kind, double n_fixed, double lambda,
                       double eps_ground, nlohmann::json& params_doc) {
    const FitResult fit =
        fit_propagation_params(samples, kind, n_fixed, lambda, eps_ground);
    params_doc[name] = {{"p_ref_dbm", fit.p_ref},
                        {"sigma_p_db", fit.sigma_p},
                        {"n_exp", n_fixed}};
    std::ofstream res(out_dir / ("residuals_" + name + ".csv"));
    res << "dist_m,rssi_dbm,model_dbm,residual_db\n";
    std::ofstream series(out_dir / ("model_vs_data_" + name + ".csv"));
    series << "dist_m,rssi_dbm,model_dbm\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double model = fit_model_rssi(samples[i], kind, fit.p_ref,
                                            n_fixed, lambda, eps_ground);
        res << fmt_double(samples[i].dist) << ',' << fmt_double(samples[i].rssi)
            << ',' << fmt_double(model) << ',' << fmt_double(fit.residuals[i])
            << '\n';
        series << fmt_double(samples[i].dist) << ','
               << fmt_double(samples[i].rssi) << ',' << fmt_double(model)
               << '\n';
    }
    std::cout << name << ": p_ref " << fmt_double(fit.p_ref) << " dBm, sigma_p "
              << fmt_double(fit.sigma_p) << " dB\n";
}

int cmd_fit(const CommonOpts& opts, const std::string& data_path,
            const std::string& model_kind, double n_fixed) {
    double lambda = 2.0, eps_ground = 15.0;
    if (!opts.config_path.empty()) {
        const Config cfg = load_with_overrides(opts);
        lambda = cfg.propagation.lambda;
        eps_ground = cfg.propagation.eps_ground;
    }
    const auto samples = load_range_rssi_csv(data_path);
    fs::create_directories(opts.out_dir);
    nlohmann::json params_doc;
    if (model_kind == "logpath" || model_kind == "both")
        write_fit_outputs(opts.out_dir, "logpath", samples,
                          PropagationKind::LogPath, n_fixed, lambda, eps_ground,
                          params_doc);
    if (model_kind == "multipath" || model_kind == "both")
        write_fit_outputs(opts.out_dir, "multipath", samples,
                          PropagationKind::MultiPath, n_fixed, lambda,
                          eps_ground, params_doc);
    if (params_doc.empty())
        throw std::invalid_argument("model must be logpath, multipath or both");
    std::ofstream(fs::path(opts.out_dir) / "fitted_params.json")
        << params_doc.dump(2) << '\n';
    return 0;
}

int cmd_emit_pattern(const CommonOpts& opts) {
    const Config cfg = load_with_overrides(opts);
    const AntennaPattern pattern = cfg.antenna.build();
    fs::create_directories(opts.out_dir);
    std::ofstream os(fs::path(opts.out_dir) / "pattern.csv");
    os << "azimuth_deg,gain_db\n";
    for (int deg = 0; deg < 360; ++deg) {
        const double phi = deg * std::numbers::pi / 180.0;
        os << deg << ',' << fmt_double(pattern.gain_db(phi)) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSSI tag localization simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool snapshots = false, trace = false;
    int runs = 0;
    std::string data_path, model_kind = "both";
    double n_fixed = 2.0;

    auto* run = app.add_subcommand("run", "Single seeded scenario run");
    add_common(run, opts);
    run->add_flag("--particles-snapshots", snapshots,
                  "Export periodic particle-cloud snapshots");
    run->add_flag("--planner-trace", trace,
                  "Export one JSON line per planning event");

    auto* mc = app.add_subcommand("mc", "Monte Carlo study");
    add_common(mc, opts);
    mc->add_option("--runs", runs, "Number of runs")->required();

    auto* sw = app.add_subcommand("sweep", "Parameter sweep of Monte Carlo studies");
    add_common(sw, opts);
    sw->add_option("--runs", runs, "Override runs per sweep value");

    auto* fit = app.add_subcommand("fit", "Fit propagation parameters to range/RSSI data");
    add_common(fit, opts, /*config_required=*/false);
    fit->add_option("--data", data_path, "CSV: dist_m,rssi_dbm[,target_z_m,uav_z_m]")
        ->required();
    fit->add_option("--model", model_kind, "logpath | multipath | both");
    fit->add_option("--n-exp", n_fixed, "Fixed path-loss exponent");

    auto* emit = app.add_subcommand("emit-pattern",
                                    "Emit the antenna gain pattern at 1 degree resolution");
    add_common(emit, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(opts, snapshots, trace);
        if (*mc) return cmd_mc(opts, runs);
        if (*sw) return cmd_sweep(opts, runs);
        if (*fit) return cmd_fit(opts, data_path, model_kind, n_fixed);
        if (*emit) return cmd_emit_pattern(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
