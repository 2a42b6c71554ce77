#include "rftrack/sim.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

namespace rftrack {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void step_targets(std::vector<TargetTruth>& truths, const MotionModel& motion,
                  const Area& area, Rng& rng) {
    if (motion.sigma_q == 0.0) return;
    std::normal_distribution<double> g(0.0, motion.sigma_q);
    for (auto& t : truths) {
        t.position.px = reflect(t.position.px + g(rng), area.xmin, area.xmax);
        t.position.py = reflect(t.position.py + g(rng), area.ymin, area.ymax);
    }
}

std::vector<Measurement> generate_measurements(
    const std::vector<TargetTruth>& truths, const UavState& uav,
    const PropagationParams& params, const AntennaPattern& pattern,
    double sensitivity_dbm, double time_s, Rng& rng) {
    std::vector<Measurement> out;
    out.reserve(truths.size());
    for (const auto& t : truths) {
        const double z =
            sample_measurement(params, pattern, t.position, uav, rng);
        if (!detect(z, sensitivity_dbm)) continue;
        out.push_back({z, t.frequency_channel, uav, time_s});
    }
    return out;
}

double rms_error(const Position3& estimate, const Position3& truth) {
    return horizontal_distance(estimate, truth);
}

RunResult run_scenario(const Config& cfg, const AntennaPattern& pattern,
                       const RunHooks& hooks) {
    cfg.validate();
    const ScenarioConfig& sc = cfg.scenario;
    const PlannerConfig& pc = cfg.planner;

    RunResult result;
    UavState uav = sc.uav_start;

    // independent substreams so per-target work is order-insensitive
    Rng truth_rng = make_rng(derive_seed(sc.seed, 10));
    Rng meas_rng = make_rng(derive_seed(sc.seed, 12));

    std::vector<TargetTruth> truths(sc.n_targets);
    {
        Rng init_rng = make_rng(derive_seed(sc.seed, 13));
        std::uniform_real_distribution<double> ux(sc.area.xmin, sc.area.xmax);
        std::uniform_real_distribution<double> uy(sc.area.ymin, sc.area.ymax);
        for (int j = 0; j < sc.n_targets; ++j) {
            truths[j].id = j;
            truths[j].frequency_channel = j;
            truths[j].position = {ux(init_rng), uy(init_rng), sc.target_z};
        }
    }

    std::vector<TargetParticleSet> filters;
    std::vector<Rng> filter_rng;
    filters.reserve(sc.n_targets);
    for (int j = 0; j < sc.n_targets; ++j) {
        filter_rng.push_back(make_rng(derive_seed(sc.seed, 20, j)));
        filters.push_back(init_particles(sc.area, sc.n_particles, sc.target_z,
                                         filter_rng[j], j));
    }

    result.targets.resize(sc.n_targets);
    for (int j = 0; j < sc.n_targets; ++j) result.targets[j].id = j;

    std::deque<UavState> committed;
    SweepState sweep_state;
    std::uint64_t plan_counter = 0;
    const auto max_cycles = static_cast<long>(std::floor(sc.max_time));
    bool all_localized = sc.n_targets == 0;
    result.trajectory.emplace_back(0.0, uav);
    result.flight_time = 0.0;

    for (long k = 1; k <= max_cycles && !all_localized; ++k) {
        const double now = static_cast<double>(k);

        if (!committed.empty()) {
            const UavState next = committed.front();
            committed.pop_front();
            result.travel_distance += distance(uav.position, next.position);
            uav = next;
        }

        step_targets(truths, cfg.motion, sc.area, truth_rng);
        const auto measurements =
            generate_measurements(truths, uav, cfg.propagation, pattern,
                                  sc.sensitivity_dbm, now, meas_rng);

        const auto filter_t0 = Clock::now();
        for (int j = 0; j < sc.n_targets; ++j) {
            auto& f = filters[j];
            if (f.localized) continue;
            predict(f, cfg.motion, 1.0, filter_rng[j]);
            const Measurement* mz = nullptr;
            for (const auto& m : measurements)
                if (m.frequency_channel == j) { mz = &m; break; }
            if (mz) {
                // missed detections get prediction only
                update(f, mz->rssi, uav, cfg.propagation, pattern);
                if (effective_sample_size(f) <
                    0.5 * static_cast<double>(f.size()))
                    resample_and_inject(f, filter_rng[j], pc.inject_fraction,
                                        sc.area);
            } else {
                recompute_stats(f);
            }
            if (localization_test(f, sc.n_threshold)) {
                auto& out = result.targets[j];
                out.localized = true;
                out.localized_at = now;
                out.estimate = f.estimate;
                out.truth = truths[j].position;
                out.rms = rms_error(out.estimate, out.truth);
                ++result.localized_count;
            }
        }
        result.non_planning_time += seconds_since(filter_t0);

        all_localized = result.localized_count == sc.n_targets;
        result.trajectory.emplace_back(now, uav);
        result.flight_time = now;

        if (hooks.particle_snapshots && hooks.snapshot_stride > 0 &&
            k % hooks.snapshot_stride == 0) {
            for (const auto& f : filters)
                append_snapshot_csv(*hooks.particle_snapshots, now, f);
        }

        if (!all_localized && k % pc.n_plan_cycles == 0) {
            const auto plan_t0 = Clock::now();
            Action chosen;
            PlanResult pr;
            switch (pc.policy) {
                case Policy::Closest:
                    chosen = closest_target_action(filters, uav, pc);
                    break;
                case Policy::Uniform:
                    chosen = uniform_path_action(uav, pc, sc.area, sweep_state);
                    break;
                default:
                    pr = plan(filters, uav, pc, sc, cfg.motion,
                              cfg.propagation, pattern,
                              derive_seed(sc.seed, 30, plan_counter));
                    chosen = pr.action;
                    break;
            }
            ++plan_counter;
            result.planning_time += seconds_since(plan_t0);
            const auto traj = predict_uav_trajectory(uav, chosen, pc, sc.area,
                                                     pc.n_plan_cycles);
            committed.assign(traj.begin(), traj.end());

            if (hooks.planner_trace) {
                nlohmann::json rec;
                rec["time_s"] = now;
                rec["chosen_heading_rad"] = chosen.target_heading;
                rec["policy"] = to_string(pc.policy);
                if (!pr.candidates.empty()) {
                    auto& cands = rec["candidates"];
                    for (std::size_t i = 0; i < pr.candidates.size(); ++i)
                        cands.push_back(
                            {{"heading_rad", pr.candidates[i].target_heading},
                             {"score", pr.scores[i]}});
                }
                *hooks.planner_trace << rec.dump() << '\n';
            }
        }
    }

    // timed-out targets are scored against the final truth
    double rms_sum = 0.0;
    for (int j = 0; j < sc.n_targets; ++j) {
        auto& out = result.targets[j];
        if (!out.localized) {
            out.estimate = filters[j].estimate;
            out.truth = truths[j].position;
            out.rms = rms_error(out.estimate, out.truth);
        }
        rms_sum += out.rms;
    }
    result.mean_rms =
        sc.n_targets > 0 ? rms_sum / static_cast<double>(sc.n_targets) : 0.0;
    return result;
}

namespace {

McStat stat_of(const std::vector<RunResult>& rs,
               double (*get)(const RunResult&)) {
    McStat s;
    if (rs.empty()) return s;
    for (const auto& r : rs) s.mean += get(r);
    s.mean /= static_cast<double>(rs.size());
    if (rs.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rs) {
            const double d = get(r) - s.mean;
            ss += d * d;
        }
        s.stddev = std::sqrt(ss / static_cast<double>(rs.size() - 1));
    }
    return s;
}

}  // namespace

McSummary monte_carlo(const Config& cfg, const AntennaPattern& pattern,
                      int runs, std::uint64_t base_seed, int jobs,
                      const std::function<void(int, const RunResult&)>& on_run) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    McSummary out;
    out.runs = runs;
    out.results.resize(runs);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= runs) return;
            Config c = cfg;
            c.scenario.seed = derive_seed(base_seed, 1000, i);
            out.results[i] = run_scenario(c, pattern);
        }
    };
    const int n_workers = std::max(1, std::min(jobs, runs));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (on_run)
        for (int i = 0; i < runs; ++i) on_run(i, out.results[i]);

    out.rms = stat_of(out.results, [](const RunResult& r) { return r.mean_rms; });
    out.flight_time =
        stat_of(out.results, [](const RunResult& r) { return r.flight_time; });
    out.travel_distance = stat_of(
        out.results, [](const RunResult& r) { return r.travel_distance; });
    out.planning_time = stat_of(
        out.results, [](const RunResult& r) { return r.planning_time; });
    out.non_planning_time = stat_of(
        out.results, [](const RunResult& r) { return r.non_planning_time; });
    out.localized_count = stat_of(out.results, [](const RunResult& r) {
        return static_cast<double>(r.localized_count);
    });
    return out;
}

void apply_sweep_value(Config& cfg, const std::string& parameter,
                       const std::string& value) {
    if (parameter == "alpha") {
        cfg.planner.alpha = std::stod(value);
    } else if (parameter == "n_actions") {
        cfg.planner.n_action_subset = std::stoi(value);
    } else if (parameter == "n_targets") {
        cfg.scenario.n_targets = std::stoi(value);
    } else if (parameter == "policy-horizon") {
        // "policy[:n_horizon:t_plan]", e.g. "renyi:3:1"
        std::string v = value;
        const auto c1 = v.find(':');
        cfg.planner.policy = policy_from_string(v.substr(0, c1));
        if (c1 != std::string::npos) {
            const auto rest = v.substr(c1 + 1);
            const auto c2 = rest.find(':');
            if (c2 == std::string::npos)
                throw std::invalid_argument(
                    "policy-horizon value needs policy:n_horizon:t_plan");
            cfg.planner.n_horizon = std::stoi(rest.substr(0, c2));
            cfg.planner.t_plan = std::stod(rest.substr(c2 + 1));
        }
    } else {
        throw std::invalid_argument("unknown sweep parameter: " + parameter);
    }
}

std::vector<SweepRow> sweep(const Config& cfg, const AntennaPattern& pattern,
                            const std::string& parameter,
                            const std::vector<std::string>& values, int runs,
                            std::uint64_t base_seed, int jobs) {
    if (values.empty()) throw std::invalid_argument("sweep values are empty");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (const auto& v : values) {
        Config c = cfg;
        apply_sweep_value(c, parameter, v);
        rows.push_back({v, monte_carlo(c, pattern, runs, base_seed, jobs)});
    }
    return rows;
}

std::string fmt_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

nlohmann::json run_result_to_json(const RunResult& r) {
    nlohmann::json j;
    j["mean_rms_m"] = r.mean_rms;
    j["flight_time_s"] = r.flight_time;
    j["travel_distance_m"] = r.travel_distance;
    j["planning_time_s"] = r.planning_time;
    j["non_planning_time_s"] = r.non_planning_time;
    j["localized_count"] = r.localized_count;
    auto& ts = j["targets"];
    ts = nlohmann::json::array();
    for (const auto& t : r.targets) {
        ts.push_back({{"id", t.id},
                      {"localized", t.localized},
                      {"localized_at_s", t.localized_at},
                      {"estimate", {t.estimate.px, t.estimate.py, t.estimate.pz}},
                      {"truth", {t.truth.px, t.truth.py, t.truth.pz}},
                      {"rms_m", t.rms}});
    }
    return j;
}

void write_trajectory_csv(std::ostream& os, const RunResult& r) {
    os << "time_s,px,py,pz,heading_rad\n";
    for (const auto& [t, u] : r.trajectory) {
        os << fmt_double(t) << ',' << fmt_double(u.position.px) << ','
           << fmt_double(u.position.py) << ',' << fmt_double(u.position.pz)
           << ',' << fmt_double(u.heading) << '\n';
    }
}

void write_estimates_csv(std::ostream& os, const RunResult& r) {
    os << "time_s,target_id,est_x,est_y,rms_m\n";
    for (const auto& t : r.targets) {
        os << fmt_double(t.localized_at) << ',' << t.id << ','
           << fmt_double(t.estimate.px) << ',' << fmt_double(t.estimate.py)
           << ',' << fmt_double(t.rms) << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "value,runs,rms_m_mean,rms_m_std,flight_time_s_mean,"
          "flight_time_s_std,travel_km_mean,travel_km_std,"
          "localized_mean\n";
    for (const auto& row : rows) {
        const auto& s = row.summary;
        os << row.label << ',' << s.runs << ',' << fmt_double(s.rms.mean) << ','
           << fmt_double(s.rms.stddev) << ',' << fmt_double(s.flight_time.mean)
           << ',' << fmt_double(s.flight_time.stddev) << ','
           << fmt_double(s.travel_distance.mean / 1000.0) << ','
           << fmt_double(s.travel_distance.stddev / 1000.0) << ','
           << fmt_double(s.localized_count.mean) << '\n';
    }
}

}  // namespace rftrack
