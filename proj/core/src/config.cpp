#include "rftrack/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rftrack/toml_lite.hpp"

namespace rftrack {

namespace fs = std::filesystem;
using nlohmann::json;

Policy policy_from_string(const std::string& s) {
    if (s == "renyi") return Policy::Renyi;
    if (s == "shannon") return Policy::Shannon;
    if (s == "closest") return Policy::Closest;
    if (s == "uniform") return Policy::Uniform;
    throw std::invalid_argument("unknown policy: " + s);
}

std::string to_string(Policy p) {
    switch (p) {
        case Policy::Renyi: return "renyi";
        case Policy::Shannon: return "shannon";
        case Policy::Closest: return "closest";
        case Policy::Uniform: return "uniform";
    }
    return "renyi";
}

void PlannerConfig::validate() const {
    if (alpha < 0.0 || alpha == 1.0)
        throw std::invalid_argument("alpha must be >= 0 and != 1");
    if (gamma <= 0.0 || gamma > 1.0)
        throw std::invalid_argument("gamma must be in (0, 1]");
    if (n_horizon < 1 || t_plan <= 0.0)
        throw std::invalid_argument("look-ahead horizon must be positive");
    if (n_plan_cycles < 1)
        throw std::invalid_argument("n_plan_cycles must be >= 1");
    if (m_samples < 1) throw std::invalid_argument("m_samples must be >= 1");
    if (n_action_subset < 1)
        throw std::invalid_argument("n_action_subset must be >= 1");
    if (heading_count < 2)
        throw std::invalid_argument("heading_count must be >= 2");
    if (theta_max <= 0.0 || v_uav <= 0.0)
        throw std::invalid_argument("theta_max and v_uav must be positive");
    if (track_spacing <= 0.0)
        throw std::invalid_argument("track_spacing must be positive");
    if (inject_fraction < 0.0 || inject_fraction >= 1.0)
        throw std::invalid_argument("inject_fraction must be in [0, 1)");
}

void ScenarioConfig::validate() const {
    if (area.degenerate()) throw std::invalid_argument("area is degenerate");
    if (n_targets < 1) throw std::invalid_argument("n_targets must be >= 1");
    if (n_particles < 100)
        throw std::invalid_argument("n_particles must be >= 100");
    if (max_time < 0.0) throw std::invalid_argument("max_time must be >= 0");
    if (n_threshold <= 0.0)
        throw std::invalid_argument("n_threshold must be positive");
}

void Config::validate() const {
    scenario.validate();
    planner.validate();
    propagation.validate();
    if (motion.sigma_q < 0.0)
        throw std::invalid_argument("sigma_q must be >= 0");
}

AntennaPattern AntennaConfig::build(const std::string& base_dir) const {
    if (mode == "analytic")
        return AntennaPattern::analytic(spacing_wavelengths, front_to_back_db);
    if (mode == "isotropic") return AntennaPattern::isotropic();
    if (mode == "table") {
        if (table_path.empty())
            throw std::invalid_argument("antenna table mode needs table_path");
        fs::path p(table_path);
        if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
        return AntennaPattern::from_csv(p.string());
    }
    throw std::invalid_argument("unknown antenna mode: " + mode);
}

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<const char*> known,
                const std::string& section) {
    for (auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* n : known)
            if (k == n) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument("unknown config key: " + section + "." + k);
    }
}

}  // namespace

Config config_from_json(const json& doc) {
    Config cfg;
    check_keys(doc, {"scenario", "motion", "planner", "propagation",
                     "antenna", "sweep"}, "<root>");
    if (doc.contains("scenario")) {
        const json& s = doc.at("scenario");
        check_keys(s, {"area", "n_targets", "uav_start", "target_z",
                       "uav_altitude", "max_time", "sensitivity_dbm",
                       "n_particles", "n_threshold", "seed"}, "scenario");
        if (s.contains("area")) {
            auto a = s.at("area").get<std::vector<double>>();
            if (a.size() != 4)
                throw std::invalid_argument("scenario.area needs 4 entries");
            cfg.scenario.area = {a[0], a[1], a[2], a[3]};
        }
        get_if(s, "n_targets", cfg.scenario.n_targets);
        if (s.contains("uav_start")) {
            auto u = s.at("uav_start").get<std::vector<double>>();
            if (u.size() != 4)
                throw std::invalid_argument("scenario.uav_start needs 4 entries");
            cfg.scenario.uav_start = {{u[0], u[1], u[2]}, normalize_angle(u[3])};
        }
        get_if(s, "target_z", cfg.scenario.target_z);
        get_if(s, "uav_altitude", cfg.scenario.uav_altitude);
        get_if(s, "max_time", cfg.scenario.max_time);
        get_if(s, "sensitivity_dbm", cfg.scenario.sensitivity_dbm);
        get_if(s, "n_particles", cfg.scenario.n_particles);
        get_if(s, "n_threshold", cfg.scenario.n_threshold);
        get_if(s, "seed", cfg.scenario.seed);
    }
    if (doc.contains("motion")) {
        check_keys(doc.at("motion"), {"sigma_q"}, "motion");
        get_if(doc.at("motion"), "sigma_q", cfg.motion.sigma_q);
    }
    if (doc.contains("planner")) {
        const json& p = doc.at("planner");
        check_keys(p, {"alpha", "gamma", "n_horizon", "t_plan",
                       "n_plan_cycles", "m_samples", "n_action_subset",
                       "theta_max", "v_uav", "heading_count", "policy",
                       "track_spacing", "inject_fraction"}, "planner");
        get_if(p, "alpha", cfg.planner.alpha);
        get_if(p, "gamma", cfg.planner.gamma);
        get_if(p, "n_horizon", cfg.planner.n_horizon);
        get_if(p, "t_plan", cfg.planner.t_plan);
        get_if(p, "n_plan_cycles", cfg.planner.n_plan_cycles);
        get_if(p, "m_samples", cfg.planner.m_samples);
        get_if(p, "n_action_subset", cfg.planner.n_action_subset);
        get_if(p, "theta_max", cfg.planner.theta_max);
        get_if(p, "v_uav", cfg.planner.v_uav);
        get_if(p, "heading_count", cfg.planner.heading_count);
        if (p.contains("policy"))
            cfg.planner.policy = policy_from_string(p.at("policy").get<std::string>());
        get_if(p, "track_spacing", cfg.planner.track_spacing);
        get_if(p, "inject_fraction", cfg.planner.inject_fraction);
    }
    if (doc.contains("propagation")) {
        const json& p = doc.at("propagation");
        check_keys(p, {"kind", "p_ref", "d_ref", "n_exp", "sigma_p", "lambda",
                       "eps_ground", "floor_dbm"}, "propagation");
        if (p.contains("kind")) {
            std::string k = p.at("kind").get<std::string>();
            if (k == "logpath")
                cfg.propagation.kind = PropagationKind::LogPath;
            else if (k == "multipath")
                cfg.propagation.kind = PropagationKind::MultiPath;
            else
                throw std::invalid_argument("unknown propagation kind: " + k);
        }
        get_if(p, "p_ref", cfg.propagation.p_ref);
        get_if(p, "d_ref", cfg.propagation.d_ref);
        get_if(p, "n_exp", cfg.propagation.n_exp);
        get_if(p, "sigma_p", cfg.propagation.sigma_p);
        get_if(p, "lambda", cfg.propagation.lambda);
        get_if(p, "eps_ground", cfg.propagation.eps_ground);
        get_if(p, "floor_dbm", cfg.propagation.floor_dbm);
    }
    if (doc.contains("antenna")) {
        const json& a = doc.at("antenna");
        check_keys(a, {"mode", "spacing_wavelengths", "front_to_back_db",
                       "table_path"}, "antenna");
        get_if(a, "mode", cfg.antenna.mode);
        get_if(a, "spacing_wavelengths", cfg.antenna.spacing_wavelengths);
        get_if(a, "front_to_back_db", cfg.antenna.front_to_back_db);
        get_if(a, "table_path", cfg.antenna.table_path);
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        check_keys(s, {"parameter", "values", "runs"}, "sweep");
        get_if(s, "parameter", cfg.sweep.parameter);
        if (s.contains("values")) {
            cfg.sweep.values.clear();
            for (const auto& v : s.at("values")) {
                if (v.is_string())
                    cfg.sweep.values.push_back(v.get<std::string>());
                else
                    cfg.sweep.values.push_back(v.dump());
            }
        }
        get_if(s, "runs", cfg.sweep.runs);
    }
    return cfg;
}

json config_to_json(const Config& cfg) {
    json doc;
    doc["scenario"] = {
        {"area", {cfg.scenario.area.xmin, cfg.scenario.area.xmax,
                  cfg.scenario.area.ymin, cfg.scenario.area.ymax}},
        {"n_targets", cfg.scenario.n_targets},
        {"uav_start", {cfg.scenario.uav_start.position.px,
                       cfg.scenario.uav_start.position.py,
                       cfg.scenario.uav_start.position.pz,
                       cfg.scenario.uav_start.heading}},
        {"target_z", cfg.scenario.target_z},
        {"uav_altitude", cfg.scenario.uav_altitude},
        {"max_time", cfg.scenario.max_time},
        {"sensitivity_dbm", cfg.scenario.sensitivity_dbm},
        {"n_particles", cfg.scenario.n_particles},
        {"n_threshold", cfg.scenario.n_threshold},
        {"seed", cfg.scenario.seed},
    };
    doc["motion"] = {{"sigma_q", cfg.motion.sigma_q}};
    doc["planner"] = {
        {"alpha", cfg.planner.alpha},
        {"gamma", cfg.planner.gamma},
        {"n_horizon", cfg.planner.n_horizon},
        {"t_plan", cfg.planner.t_plan},
        {"n_plan_cycles", cfg.planner.n_plan_cycles},
        {"m_samples", cfg.planner.m_samples},
        {"n_action_subset", cfg.planner.n_action_subset},
        {"theta_max", cfg.planner.theta_max},
        {"v_uav", cfg.planner.v_uav},
        {"heading_count", cfg.planner.heading_count},
        {"policy", to_string(cfg.planner.policy)},
        {"track_spacing", cfg.planner.track_spacing},
        {"inject_fraction", cfg.planner.inject_fraction},
    };
    doc["propagation"] = {
        {"kind", cfg.propagation.kind == PropagationKind::LogPath ? "logpath"
                                                                  : "multipath"},
        {"p_ref", cfg.propagation.p_ref},
        {"d_ref", cfg.propagation.d_ref},
        {"n_exp", cfg.propagation.n_exp},
        {"sigma_p", cfg.propagation.sigma_p},
        {"lambda", cfg.propagation.lambda},
        {"eps_ground", cfg.propagation.eps_ground},
        {"floor_dbm", cfg.propagation.floor_dbm},
    };
    doc["antenna"] = {
        {"mode", cfg.antenna.mode},
        {"spacing_wavelengths", cfg.antenna.spacing_wavelengths},
        {"front_to_back_db", cfg.antenna.front_to_back_db},
        {"table_path", cfg.antenna.table_path},
    };
    if (!cfg.sweep.parameter.empty()) {
        doc["sweep"] = {
            {"parameter", cfg.sweep.parameter},
            {"values", cfg.sweep.values},
            {"runs", cfg.sweep.runs},
        };
    }
    return doc;
}

std::string config_to_toml(const Config& cfg) {
    return to_toml(config_to_json(cfg));
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    if (fs::path(path).extension() == ".json") {
        doc = json::parse(buf.str());
    } else {
        doc = parse_toml(buf.str());
    }
    Config cfg = config_from_json(doc);
    // resolve relative antenna tables against the config's directory
    if (!cfg.antenna.table_path.empty()) {
        fs::path t(cfg.antenna.table_path);
        if (t.is_relative())
            cfg.antenna.table_path =
                (fs::path(path).parent_path() / t).string();
    }
    return cfg;
}

void apply_override(Config& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must be key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string val = assignment.substr(eq + 1);

    json doc = config_to_json(cfg);
    json* cur = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("empty override key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!cur->contains(parts[i]))
            throw std::invalid_argument("unknown config key: " + key);
        cur = &(*cur)[parts[i]];
    }
    const std::string& leaf = parts.back();
    if (!cur->contains(leaf) && !(parts.size() == 1 && leaf == "sweep"))
        throw std::invalid_argument("unknown config key: " + key);
    // reuse the TOML value grammar so strings/arrays/numbers all work;
    // bare words (e.g. policy=uniform) fall back to plain strings
    try {
        json parsed = parse_toml("v = " + val);
        (*cur)[leaf] = parsed.at("v");
    } catch (const std::exception&) {
        (*cur)[leaf] = val;
    }
    cfg = config_from_json(doc);
}

}  // namespace rftrack
