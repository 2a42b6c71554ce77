#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rftrack/antenna.hpp"
#include "rftrack/geometry.hpp"
#include "rftrack/propagation.hpp"
#include "rftrack/types.hpp"

namespace rftrack {

enum class Policy { Renyi, Shannon, Closest, Uniform };

Policy policy_from_string(const std::string& s);
std::string to_string(Policy p);

struct PlannerConfig {
    double alpha = 0.1;       // Renyi order, >= 0 and != 1
    double gamma = 1.0;       // discount, (0, 1]
    int n_horizon = 1;        // look-ahead steps N_H
    double t_plan = 5.0;      // s, coarse planning interval t_p
    int n_plan_cycles = 5;    // plan every N_p observation cycles
    int m_samples = 50;       // future measurements per look-ahead step
    int n_action_subset = 4;  // actions kept after gain pruning
    double theta_max = std::numbers::pi / 6.0;  // rad/s max rotation rate
    double v_uav = 5.0;       // m/s forward speed
    int heading_count = 8;    // size of the discrete heading set
    Policy policy = Policy::Renyi;
    double track_spacing = 50.0;   // m, uniform-sweep track pitch
    double inject_fraction = 0.02; // fraction of particles re-seeded on resample

    double horizon_seconds() const { return n_horizon * t_plan; }
    void validate() const;
};

struct ScenarioConfig {
    Area area{0.0, 500.0, 0.0, 500.0};
    int n_targets = 10;
    UavState uav_start{{0.0, 0.0, 20.0}, 0.0};
    double target_z = 0.0;
    double uav_altitude = 20.0;
    double max_time = 1800.0;       // s
    double sensitivity_dbm = -90.0; // detection floor
    int n_particles = 10000;
    double n_threshold = 10000.0;   // m^4, covariance-determinant bound
    std::uint64_t seed = 1;

    void validate() const;
};

struct AntennaConfig {
    std::string mode = "analytic";  // "analytic" | "table" | "isotropic"
    double spacing_wavelengths = 0.1;
    double front_to_back_db = 12.0;
    std::string table_path;

    AntennaPattern build(const std::string& base_dir = "") const;
};

/// Parameter sweep request (used by the `sweep` command and sim::sweep).
struct SweepConfig {
    std::string parameter;  // alpha | n_actions | n_targets | policy-horizon
    std::vector<std::string> values;
    int runs = 100;
};

struct Config {
    ScenarioConfig scenario;
    MotionModel motion;
    PlannerConfig planner;
    PropagationParams propagation;
    AntennaConfig antenna;
    SweepConfig sweep;  // empty parameter when absent

    void validate() const;
};

/// Load a TOML (default) or JSON (.json extension) configuration file.
Config load_config(const std::string& path);

Config config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const Config& cfg);

/// Serialize to the TOML file representation.
std::string config_to_toml(const Config& cfg);

/// Apply a `dotted.path=value` override, e.g. "planner.alpha=0.5".
/// Unknown keys are rejected.
void apply_override(Config& cfg, const std::string& assignment);

}  // namespace rftrack
