#include <doctest.h>

#include <stdexcept>

#include "rftrack/planner.hpp"

using namespace rftrack;

namespace {

constexpr double kPi = std::numbers::pi;

TargetParticleSet gaussian_cloud(double cx, double cy, double sd, int n,
                                 Rng& rng, int id = 0) {
    TargetParticleSet ps;
    ps.target_id = id;
    std::normal_distribution<double> g(0.0, sd);
    ps.px.resize(n);
    ps.py.resize(n);
    for (int i = 0; i < n; ++i) {
        ps.px[i] = cx + g(rng);
        ps.py[i] = cy + g(rng);
    }
    ps.weights.assign(n, 1.0 / n);
    recompute_stats(ps);
    return ps;
}

}  // namespace

TEST_CASE("enumerate_actions: evenly spaced heading set") {
    PlannerConfig cfg;
    const auto actions = enumerate_actions(cfg);
    REQUIRE(actions.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(actions[i].index == i);
        CHECK(actions[i].target_heading == doctest::Approx(i * kPi / 4.0));
    }
    cfg.heading_count = 1;
    CHECK_THROWS_AS(enumerate_actions(cfg), std::invalid_argument);
}

TEST_CASE("predict_uav_trajectory: rotate then translate") {
    PlannerConfig cfg;  // theta_max pi/6, v 5
    const Area area{-1e6, 1e6, -1e6, 1e6};
    const UavState uav{{0, 0, 20}, 0.0};

    SUBCASE("quarter turn left") {
        const auto traj = predict_uav_trajectory(uav, {kPi / 2, 2}, cfg, area, 5);
        REQUIRE(traj.size() == 5);
        // three full-rate rotation cycles (pi/2 / (pi/6) = 3), position held
        CHECK(traj[0].heading == doctest::Approx(kPi / 6));
        CHECK(traj[1].heading == doctest::Approx(kPi / 3));
        CHECK(traj[2].heading == doctest::Approx(kPi / 2));
        for (int c = 0; c < 3; ++c) {
            CHECK(traj[c].position.px == 0.0);
            CHECK(traj[c].position.py == 0.0);
        }
        // then forward at 5 m/s along +y
        CHECK(traj[3].position.py == doctest::Approx(5.0));
        CHECK(traj[4].position.py == doctest::Approx(10.0));
        CHECK(traj[4].position.px == doctest::Approx(0.0));
        CHECK(traj[4].heading == doctest::Approx(kPi / 2));
    }

    SUBCASE("residual rotation completes on the first forward cycle") {
        // pi/4 = 1.5 * theta_max: one rotation cycle, then snap + move
        const auto traj = predict_uav_trajectory(uav, {kPi / 4, 1}, cfg, area, 3);
        CHECK(traj[0].heading == doctest::Approx(kPi / 6));
        CHECK(traj[0].position.px == 0.0);
        CHECK(traj[1].heading == doctest::Approx(kPi / 4));
        CHECK(traj[1].position.px == doctest::Approx(5.0 * std::cos(kPi / 4)));
        CHECK(traj[2].position.py == doctest::Approx(10.0 * std::sin(kPi / 4)));
    }

    SUBCASE("already on heading: straight line") {
        const auto traj = predict_uav_trajectory(uav, {0.0, 0}, cfg, area, 4);
        for (int c = 0; c < 4; ++c) {
            CHECK(traj[c].heading == 0.0);
            CHECK(traj[c].position.px == doctest::Approx(5.0 * (c + 1)));
        }
    }

    SUBCASE("turns the short way round") {
        // commanded 3*pi/2 is -pi/2 away: rotation decreases the heading
        const auto traj =
            predict_uav_trajectory(uav, {3 * kPi / 2, 6}, cfg, area, 4);
        CHECK(traj[0].heading == doctest::Approx(kTwoPi - kPi / 6));
        CHECK(traj[2].heading == doctest::Approx(3 * kPi / 2));
    }

    SUBCASE("position is clamped at the boundary") {
        const Area box{0, 100, 0, 100};
        const UavState edge{{98, 50, 20}, 0.0};
        const auto traj = predict_uav_trajectory(edge, {0.0, 0}, cfg, box, 3);
        CHECK(traj[0].position.px == doctest::Approx(100.0));
        CHECK(traj[2].position.px == doctest::Approx(100.0));
    }
}

TEST_CASE("select_action_subset keeps the highest-gain actions in order") {
    PlannerConfig cfg;
    const auto actions = enumerate_actions(cfg);
    const auto pattern = AntennaPattern::analytic(0.1, 12.0);
    // terminal poses all at the origin, heading = commanded heading; the
    // target sits due east, so gain ranks by |heading|
    std::vector<UavState> terminals;
    for (const auto& a : actions)
        terminals.push_back({{0, 0, 20}, a.target_heading});
    const Position3 x_hat{500, 0, 0};
    const auto subset = select_action_subset(actions, terminals, pattern,
                                             x_hat, 3);
    REQUIRE(subset.size() == 3);
    // east (0), its neighbors pi/4 (1) and 7*pi/4 (7); enumeration order kept
    CHECK(subset[0].index == 0);
    CHECK(subset[1].index == 1);
    CHECK(subset[2].index == 7);

    CHECK(select_action_subset(actions, terminals, pattern, x_hat, 8).size() ==
          8);
    CHECK(select_action_subset(actions, terminals, pattern, x_hat, 99).size() ==
          8);
    CHECK_THROWS_AS(select_action_subset({}, {}, pattern, x_hat, 2),
                    std::invalid_argument);
}

TEST_CASE("renyi reward: two-particle hand case") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<double> g{1.0, 0.0};
    // R = alpha * ln 2 / (1 - alpha) for this configuration
    CHECK(renyi_reward_from_likelihoods(w, g, 0.5) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-12));
    CHECK(renyi_reward_from_likelihoods(w, g, 0.1) ==
          doctest::Approx(0.6931471805599453 / 9.0).epsilon(1e-12));
}

TEST_CASE("renyi reward: uninformative likelihood gives zero") {
    const std::vector<double> w{0.2, 0.3, 0.5};
    for (double c : {1.0, 0.01, 123.0}) {
        const std::vector<double> g{c, c, c};
        CHECK(renyi_reward_from_likelihoods(w, g, 0.1) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("renyi reward: all-zero likelihood flags divergence") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<double> g{0.0, 0.0};
    bool diverged = false;
    CHECK(renyi_reward_from_likelihoods(w, g, 0.5, &diverged) == 0.0);
    CHECK(diverged);
    const std::vector<double> ones{1.0, 1.0};
    CHECK_THROWS_AS(renyi_reward_from_likelihoods(w, ones, 1.0),
                    std::invalid_argument);
}

TEST_CASE("renyi reward is invariant to likelihood scaling") {
    Rng rng = make_rng(1);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(50), lg(50);
    double tw = 0.0;
    for (auto& x : w) tw += (x = u(rng));
    for (auto& x : w) x /= tw;
    for (auto& x : lg) x = std::log(u(rng));
    const double base = renyi_reward_from_log_likelihoods(w, lg, 0.1);
    for (double shift : {-700.0, -5.0, 40.0}) {
        auto shifted = lg;
        for (auto& x : shifted) x += shift;
        CHECK(renyi_reward_from_log_likelihoods(w, shifted, 0.1) ==
              doctest::Approx(base).epsilon(1e-9));
    }
    // and the linear-domain entry point agrees
    std::vector<double> g(lg.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(lg[i]);
    CHECK(renyi_reward_from_likelihoods(w, g, 0.1) ==
          doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("renyi reward approaches the KL divergence as alpha -> 1") {
    Rng rng = make_rng(2);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> w(100), g(100);
    double tw = 0.0;
    for (auto& x : w) tw += (x = u(rng));
    for (auto& x : w) x /= tw;
    for (auto& x : g) x = u(rng);
    // the alpha -> 1 limit of the estimator: log(sum w g) - sum w log g
    double s = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += w[i] * g[i];
        sl += w[i] * std::log(g[i]);
    }
    const double kl = std::log(s) - sl;
    CHECK(renyi_reward_from_likelihoods(w, g, 0.9999) ==
          doctest::Approx(kl).epsilon(1e-3));
    CHECK(renyi_reward_from_likelihoods(w, g, 1.0001) ==
          doctest::Approx(kl).epsilon(1e-3));
}

TEST_CASE("shannon reward is positive for an informative measurement") {
    Rng rng = make_rng(3);
    auto ps = gaussian_cloud(100.0, 100.0, 60.0, 20000, rng);
    const auto iso = AntennaPattern::isotropic();
    PropagationParams p = PropagationParams::sim_defaults();
    const UavState uav{{100, 100, 20}, 0};
    // a strong pulse concentrates mass near the UAV: entropy drops
    const double z = expected_rssi(p, iso, {100, 100, 0}, uav);
    CHECK(shannon_reward(ps, z, uav, p, iso) > 0.0);
    CHECK(renyi_reward(ps, z, uav, p, iso, 0.1) > 0.0);
}

TEST_CASE("sample_future_measurement: one-hot draw and detection gate") {
    TargetParticleSet ps;
    ps.px = {50.0, 400.0};
    ps.py = {0.0, 0.0};
    ps.weights = {1.0, 0.0};
    recompute_stats(ps);
    const auto iso = AntennaPattern::isotropic();
    PropagationParams p = PropagationParams::sim_defaults();
    p.sigma_p = 1e-9;
    const UavState uav{{0, 0, 20}, 0};
    Rng rng = make_rng(4);
    const double h = expected_rssi(p, iso, {50, 0, 0}, uav);
    auto z = sample_future_measurement(ps, uav, p, iso, -90.0, rng);
    REQUIRE(z.has_value());
    CHECK(*z == doctest::Approx(h).epsilon(1e-6));
    // an impossible sensitivity yields a non-detection
    CHECK_FALSE(
        sample_future_measurement(ps, uav, p, iso, 100.0, rng).has_value());
}

TEST_CASE("plan: heads toward a concentrated far-away cloud") {
    Rng rng = make_rng(5);
    std::vector<TargetParticleSet> filters;
    filters.push_back(gaussian_cloud(350.0, 250.0, 40.0, 4000, rng, 0));
    Config cfg;
    cfg.scenario.area = {0, 500, 0, 500};
    cfg.planner.m_samples = 50;
    const UavState uav{{100, 250, 20}, 0.0};
    const auto pattern = AntennaPattern::analytic(0.1, 12.0);
    const auto res = plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                          cfg.propagation, pattern, derive_seed(99, 30, 0));
    REQUIRE(res.candidates.size() == 4);
    CHECK(res.scores.size() == res.candidates.size());
    // gain pruning already restricts to cloud-facing candidates; the chosen
    // heading must move toward the cloud (due east), never away from it
    const double bearing = bearing_to(uav.position, filters[0].estimate);
    CHECK(std::abs(signed_angle_diff(res.action.target_heading, bearing)) <=
          kPi / 2 + 1e-12);
    for (const auto& c : res.candidates)
        CHECK(std::abs(signed_angle_diff(c.target_heading, bearing)) <=
              kPi / 2 + 1e-12);
    for (double s : res.scores) CHECK(s >= 0.0);
}

TEST_CASE("plan: east-pointing action dominates for a distant east target") {
    // At long range only near-boresight poses keep the tag above the
    // receiver sensitivity, so the east action should win almost always.
    Config cfg;
    cfg.scenario.area = {0, 3000, 0, 3000};
    cfg.planner.m_samples = 50;
    int wins = 0;
    for (int trial = 0; trial < 100; ++trial) {
        TargetParticleSet ps;
        const int n = 3000;
        Rng rng = make_rng(500 + trial);
        std::normal_distribution<double> g(0.0, 60.0);
        ps.px.resize(n);
        ps.py.resize(n);
        ps.weights.assign(n, 1.0 / n);
        for (int i = 0; i < n; ++i) {
            ps.px[i] = 1900.0 + g(rng);
            ps.py[i] = 1000.0 + g(rng);
        }
        ps.pz = 0.0;
        recompute_stats(ps);
        std::vector<TargetParticleSet> filters{ps};
        const UavState uav{{1000, 1000, 20}, 0.0};
        const auto res =
            plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                 cfg.propagation, AntennaPattern::analytic(0.1, 12.0),
                 900 + trial);
        if (res.action.index == 0) ++wins;
    }
    CHECK(wins >= 90);
}

TEST_CASE("plan is deterministic in the plan seed") {
    Rng rng = make_rng(6);
    std::vector<TargetParticleSet> filters;
    filters.push_back(gaussian_cloud(300.0, 100.0, 80.0, 2000, rng, 0));
    filters.push_back(gaussian_cloud(100.0, 400.0, 80.0, 2000, rng, 1));
    Config cfg;
    cfg.planner.m_samples = 10;
    const UavState uav{{250, 250, 20}, 1.0};
    const auto pattern = AntennaPattern::analytic();
    const auto a = plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                        cfg.propagation, pattern, 1234);
    const auto b = plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                        cfg.propagation, pattern, 1234);
    CHECK(a.action.index == b.action.index);
    for (std::size_t i = 0; i < a.scores.size(); ++i)
        CHECK(a.scores[i] == b.scores[i]);
}

TEST_CASE("plan rejects baseline policies and empty active sets") {
    Rng rng = make_rng(7);
    std::vector<TargetParticleSet> filters;
    filters.push_back(gaussian_cloud(300.0, 100.0, 50.0, 100, rng, 0));
    Config cfg;
    cfg.planner.policy = Policy::Uniform;
    const auto pattern = AntennaPattern::analytic();
    const UavState uav{{0, 0, 20}, 0};
    CHECK_THROWS_AS(plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                         cfg.propagation, pattern, 1),
                    std::invalid_argument);
    cfg.planner.policy = Policy::Renyi;
    filters[0].localized = true;
    CHECK_THROWS_AS(plan(filters, uav, cfg.planner, cfg.scenario, cfg.motion,
                         cfg.propagation, pattern, 1),
                    std::invalid_argument);
}

TEST_CASE("closest_target_action: nearest unlocalized estimate, discretized") {
    PlannerConfig cfg;
    std::vector<TargetParticleSet> filters(2);
    filters[0].target_id = 0;
    filters[0].estimate = {0.0, 200.0, 0.0};
    filters[1].target_id = 1;
    filters[1].estimate = {100.0, 0.0, 0.0};
    const UavState uav{{0, 0, 20}, 0};
    CHECK(closest_target_action(filters, uav, cfg).index == 0);
    // localizing the near one re-targets the far one (due north)
    filters[1].localized = true;
    CHECK(closest_target_action(filters, uav, cfg).index == 2);
    filters[0].localized = true;
    CHECK_THROWS_AS(closest_target_action(filters, uav, cfg),
                    std::invalid_argument);
}

TEST_CASE("closest_target_action breaks distance ties by lower id") {
    PlannerConfig cfg;
    std::vector<TargetParticleSet> filters(2);
    // equidistant targets; enumeration order puts the higher id first
    filters[0].target_id = 5;
    filters[0].estimate = {0.0, 100.0, 0.0};
    filters[1].target_id = 2;
    filters[1].estimate = {100.0, 0.0, 0.0};
    const UavState uav{{0, 0, 20}, 0};
    // id 2 wins: heading east
    CHECK(closest_target_action(filters, uav, cfg).target_heading ==
          doctest::Approx(0.0));
}

TEST_CASE("boustrophedon_waypoints serpentine layout") {
    const Area area{0, 100, 0, 100};
    const auto wp = boustrophedon_waypoints(area, 50.0);
    REQUIRE(wp.size() == 6);
    CHECK(wp[0].px == 0.0);
    CHECK(wp[0].py == 0.0);
    CHECK(wp[1].py == 100.0);
    CHECK(wp[2].px == 50.0);
    CHECK(wp[2].py == 100.0);  // down the second track
    CHECK(wp[3].py == 0.0);
    CHECK(wp[4].px == 100.0);
    CHECK(wp[5].py == 100.0);
    CHECK_THROWS_AS(boustrophedon_waypoints(area, 0.0), std::invalid_argument);
}

TEST_CASE("uniform_path_action tracks the sweep waypoints") {
    PlannerConfig cfg;  // spacing 50, v 5, n_plan_cycles 5 -> capture 25 m
    const Area area{0, 100, 0, 100};
    SweepState sweep;
    // at the origin the first waypoint is already captured; head for (0,100)
    Action a = uniform_path_action({{0, 0, 20}, 0}, cfg, area, sweep);
    CHECK(a.target_heading == doctest::Approx(std::numbers::pi / 2));
    CHECK(sweep.next == 1);
    // near the top of the first track the target flips to the second track
    a = uniform_path_action({{0, 90, 20}, 0}, cfg, area, sweep);
    CHECK(sweep.next == 2);
    CHECK(a.target_heading == doctest::Approx(0.0));  // (50,100) is east-ish
}
