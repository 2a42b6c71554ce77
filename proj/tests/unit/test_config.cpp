#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <fstream>

#include "rftrack/config.hpp"
#include "rftrack/toml_lite.hpp"

using namespace rftrack;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/rftrack_test_" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("toml subset parsing") {
    const auto doc = parse_toml(
        "# comment\n"
        "[scenario]\n"
        "n_targets = 3        # trailing comment\n"
        "max_time = 60.5\n"
        "area = [0.0, 10.0, 0.0, 20.0]\n"
        "[planner]\n"
        "policy = \"uniform\"\n");
    CHECK(doc["scenario"]["n_targets"] == 3);
    CHECK(doc["scenario"]["max_time"] == doctest::Approx(60.5));
    CHECK(doc["scenario"]["area"].size() == 4);
    CHECK(doc["planner"]["policy"] == "uniform");
}

TEST_CASE("toml errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_toml("[scenario\n"),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_toml("a = 1\nbroken line\n"),
                         doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("config round-trips losslessly through TOML") {
    Config cfg;
    cfg.scenario.seed = 987654321;
    cfg.planner.alpha = 0.30000000000000004;
    cfg.propagation.p_ref = -15.69;
    cfg.planner.policy = Policy::Shannon;
    const std::string path = write_temp("roundtrip.toml", config_to_toml(cfg));
    const Config back = load_config(path);
    CHECK(config_to_json(back) == config_to_json(cfg));
    std::remove(path.c_str());
}

TEST_CASE("config loads from JSON as well") {
    Config cfg;
    cfg.scenario.n_targets = 4;
    const std::string path =
        write_temp("cfg.json", config_to_json(cfg).dump(2));
    const Config back = load_config(path);
    CHECK(back.scenario.n_targets == 4);
    CHECK(config_to_json(back) == config_to_json(cfg));
    std::remove(path.c_str());
}

TEST_CASE("unknown keys are rejected") {
    const std::string path = write_temp("bad.toml",
                                        "[scenario]\nn_tragets = 3\n");
    CHECK_THROWS_WITH_AS(load_config(path),
                         doctest::Contains("unknown config key"),
                         std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("dotted-path overrides") {
    Config cfg;
    apply_override(cfg, "planner.alpha=0.5");
    CHECK(cfg.planner.alpha == doctest::Approx(0.5));
    apply_override(cfg, "planner.policy=uniform");
    CHECK(cfg.planner.policy == Policy::Uniform);
    apply_override(cfg, "scenario.seed=42");
    CHECK(cfg.scenario.seed == 42);
    apply_override(cfg, "scenario.area=[0.0, 100.0, 0.0, 100.0]");
    CHECK(cfg.scenario.area.xmax == doctest::Approx(100.0));
    CHECK_THROWS_AS(apply_override(cfg, "planner.no_such=1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_override(cfg, "not-an-assignment"),
                    std::invalid_argument);
}

TEST_CASE("validation rejects bad configs") {
    Config cfg;
    cfg.planner.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = Config{};
    cfg.scenario.n_particles = 50;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = Config{};
    cfg.scenario.area = {0, 0, 0, 100};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = Config{};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("shipped presets parse and validate") {
    for (const char* name :
         {"sim-5.1", "table-1", "table-2", "table-4", "fig-7",
          "field-logpath", "field-multipath"}) {
        const Config cfg = load_config(std::string(RFTRACK_PRESET_DIR) + "/" +
                                       name + ".toml");
        CHECK_NOTHROW(cfg.validate());
        CHECK_NOTHROW(cfg.antenna.build());
    }
}
