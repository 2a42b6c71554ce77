#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rftrack/config.hpp"
#include "rftrack/filter.hpp"
#include "rftrack/planner.hpp"

namespace rftrack {

/// Per-target outcome of one run.
struct TargetOutcome {
    int id = 0;
    bool localized = false;
    double localized_at = -1.0;  // s, -1 when never localized
    Position3 estimate;          // frozen at localization (or final)
    Position3 truth;             // truth at the same instant
    double rms = 0.0;            // m, xy error
};

struct RunResult {
    std::vector<TargetOutcome> targets;
    double mean_rms = 0.0;        // m, D_rms
    double flight_time = 0.0;     // s, logical
    double travel_distance = 0.0; // m
    double planning_time = 0.0;     // s wall-clock inside policy calls
    double non_planning_time = 0.0; // s wall-clock of filter work
    int localized_count = 0;
    std::vector<std::pair<double, UavState>> trajectory;  // (time, pose)
};

struct McStat {
    double mean = 0.0;
    double stddev = 0.0;
};

struct McSummary {
    int runs = 0;
    McStat rms;              // m
    McStat flight_time;      // s
    McStat travel_distance;  // m
    McStat planning_time;    // s wall-clock
    McStat non_planning_time;
    McStat localized_count;
    std::vector<RunResult> results;
};

/// Optional per-run output hooks.
struct RunHooks {
    std::ostream* particle_snapshots = nullptr;  // CSV rows per cycle
    int snapshot_stride = 30;                    // cycles between snapshots
    std::ostream* planner_trace = nullptr;       // JSON lines per plan event
};

/// One random-walk step (dt = 1 s) for every truth, reflected at the area
/// boundary.
void step_targets(std::vector<TargetTruth>& truths, const MotionModel& motion,
                  const Area& area, Rng& rng);

/// One sampled RSSI per truth; sub-sensitivity pulses are dropped.
std::vector<Measurement> generate_measurements(
    const std::vector<TargetTruth>& truths, const UavState& uav,
    const PropagationParams& params, const AntennaPattern& pattern,
    double sensitivity_dbm, double time_s, Rng& rng);

/// xy-plane error between an estimate and the truth.
double rms_error(const Position3& estimate, const Position3& truth);

/// Full observe/track/plan loop at 1 Hz until every target is localized or
/// max_time elapses. Deterministic for a fixed scenario seed.
RunResult run_scenario(const Config& cfg, const AntennaPattern& pattern,
                       const RunHooks& hooks = {});

/// `runs` independent executions with per-run derived seeds; aggregates
/// mean/std per metric. `jobs` caps worker threads; results are identical
/// for any jobs value. on_run (when set) is called with each finished run
/// in index order.
McSummary monte_carlo(const Config& cfg, const AntennaPattern& pattern,
                      int runs, std::uint64_t base_seed, int jobs = 1,
                      const std::function<void(int, const RunResult&)>& on_run =
                          nullptr);

struct SweepRow {
    std::string label;
    McSummary summary;
};

/// One monte_carlo per value of `parameter`:
///   alpha          — planner.alpha
///   n_actions      — planner.n_action_subset
///   n_targets      — scenario.n_targets
///   policy-horizon — "policy[:n_horizon:t_plan]", e.g. "renyi:3:1"
std::vector<SweepRow> sweep(const Config& cfg, const AntennaPattern& pattern,
                            const std::string& parameter,
                            const std::vector<std::string>& values, int runs,
                            std::uint64_t base_seed, int jobs = 1);

/// Apply one policy-horizon arm spec to a config (exposed for the CLI).
void apply_sweep_value(Config& cfg, const std::string& parameter,
                       const std::string& value);

// --- export helpers ------------------------------------------------------

/// Shortest round-trip decimal representation.
std::string fmt_double(double v);

nlohmann::json run_result_to_json(const RunResult& r);

/// `time_s,px,py,pz,heading_rad` rows.
void write_trajectory_csv(std::ostream& os, const RunResult& r);

/// `time_s,target_id,est_x,est_y,rms_m` rows (one per localized target).
void write_estimates_csv(std::ostream& os, const RunResult& r);

/// One row per sweep arm; deterministic metrics only, so the bytes are
/// reproducible for a fixed base seed (wall-clock stats live in the per-run
/// JSON lines instead).
void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace rftrack
