#include "rftrack/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rftrack {

std::vector<Action> enumerate_actions(const PlannerConfig& cfg) {
    if (cfg.heading_count < 2)
        throw std::invalid_argument("heading_count must be >= 2");
    std::vector<Action> out(cfg.heading_count);
    const double step = kTwoPi / cfg.heading_count;
    for (int i = 0; i < cfg.heading_count; ++i)
        out[i] = Action{normalize_angle(i * step), i};
    return out;
}

std::vector<UavState> predict_uav_trajectory(const UavState& uav,
                                             const Action& a,
                                             const PlannerConfig& cfg,
                                             const Area& area, int n_cycles) {
    std::vector<UavState> out;
    out.reserve(n_cycles);
    const double dtheta = signed_angle_diff(a.target_heading, uav.heading);
    const int rot_cycles = static_cast<int>(
        std::floor(std::abs(dtheta) / cfg.theta_max + 1e-12));
    const double dir = dtheta >= 0.0 ? 1.0 : -1.0;
    UavState cur = uav;
    for (int c = 0; c < n_cycles; ++c) {
        if (c < rot_cycles) {
            cur.heading = normalize_angle(cur.heading + dir * cfg.theta_max);
        } else {
            cur.heading = a.target_heading;
            cur.position.px += cfg.v_uav * std::cos(cur.heading);
            cur.position.py += cfg.v_uav * std::sin(cur.heading);
            cur.position = clamp_to_area(cur.position, area);
        }
        out.push_back(cur);
    }
    return out;
}

std::vector<Action> select_action_subset(
    const std::vector<Action>& actions,
    const std::vector<UavState>& terminal_states, const AntennaPattern& pattern,
    const Position3& x_hat, int n_subset) {
    if (actions.empty()) throw std::invalid_argument("empty action set");
    if (actions.size() != terminal_states.size())
        throw std::invalid_argument("one terminal state per action required");
    if (n_subset >= static_cast<int>(actions.size())) return actions;
    std::vector<std::size_t> order(actions.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> gain(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i)
        gain[i] = antenna_gain(pattern, terminal_states[i], x_hat);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
    order.resize(n_subset);
    std::sort(order.begin(), order.end());  // keep enumeration order
    std::vector<Action> out;
    out.reserve(n_subset);
    for (std::size_t i : order) out.push_back(actions[i]);
    return out;
}

std::optional<double> sample_future_measurement(const TargetParticleSet& ps,
                                                const UavState& uav_future,
                                                const PropagationParams& params,
                                                const AntennaPattern& pattern,
                                                double sensitivity_dbm,
                                                Rng& rng) {
    std::discrete_distribution<std::size_t> pick(ps.weights.begin(),
                                                 ps.weights.end());
    const std::size_t i = pick(rng);
    const Position3 p{ps.px[i], ps.py[i], ps.pz};
    const double z = sample_measurement(params, pattern, p, uav_future, rng);
    if (!detect(z, sensitivity_dbm)) return std::nullopt;
    return z;
}

double renyi_reward_from_log_likelihoods(std::span<const double> weights,
                                         std::span<const double> log_g,
                                         double alpha, bool* diverged) {
    if (alpha < 0.0 || alpha == 1.0)
        throw std::invalid_argument("alpha must be >= 0 and != 1");
    if (diverged) *diverged = false;
    double m = -std::numeric_limits<double>::infinity();
    for (double lg : log_g)
        if (lg > m) m = lg;
    if (!std::isfinite(m)) {
        if (diverged) *diverged = true;
        return 0.0;
    }
    const double one_minus_alpha = 1.0 - alpha;
    double s_pow = 0.0;  // sum w_i g_i^(1-alpha), g normalized by max
    double s_lin = 0.0;  // sum w_i g_i
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double d = log_g[i] - m;
        s_pow += weights[i] * std::exp(one_minus_alpha * d);
        s_lin += weights[i] * std::exp(d);
    }
    if (s_lin <= 0.0) {
        if (diverged) *diverged = true;
        return 0.0;
    }
    // the max-normalization cancels between numerator and denominator
    return (std::log(s_pow) - one_minus_alpha * std::log(s_lin)) /
           (alpha - 1.0);
}

double renyi_reward_from_likelihoods(std::span<const double> weights,
                                     std::span<const double> g, double alpha,
                                     bool* diverged) {
    std::vector<double> lg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        lg[i] = g[i] > 0.0 ? std::log(g[i])
                           : -std::numeric_limits<double>::infinity();
    return renyi_reward_from_log_likelihoods(weights, lg, alpha, diverged);
}

namespace {

void log_likelihoods_from_expected(const std::vector<double>& expected,
                                   double z, double sigma_p,
                                   std::vector<double>& out) {
    out.resize(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        out[i] = log_likelihood_from_expected(z, expected[i], sigma_p);
}

/// det of the 2x2 weighted xy covariance for arbitrary weights
double weighted_cov_det(const TargetParticleSet& ps,
                        const std::vector<double>& w) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        mx += w[i] * ps.px[i];
        my += w[i] * ps.py[i];
    }
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double dx = ps.px[i] - mx;
        const double dy = ps.py[i] - my;
        cxx += w[i] * dx * dx;
        cxy += w[i] * dx * dy;
        cyy += w[i] * dy * dy;
    }
    const double det = cxx * cyy - cxy * cxy;
    return det > 0.0 ? det : 0.0;
}

double shannon_reward_from_log_likelihoods(const TargetParticleSet& ps,
                                           const std::vector<double>& lg) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : lg)
        if (v > m) m = v;
    if (!std::isfinite(m)) return 0.0;
    std::vector<double> post(ps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        post[i] = ps.weights[i] * std::exp(lg[i] - m);
        total += post[i];
    }
    if (total <= 0.0) return 0.0;
    for (auto& w : post) w /= total;
    const double det_prior = weighted_cov_det(ps, ps.weights);
    const double det_post = weighted_cov_det(ps, post);
    if (det_prior <= 0.0 || det_post <= 0.0) return 0.0;
    return 0.5 * (std::log(det_prior) - std::log(det_post));
}

}  // namespace

double renyi_reward(const TargetParticleSet& ps_predicted, double z,
                    const UavState& uav_future,
                    const PropagationParams& params,
                    const AntennaPattern& pattern, double alpha) {
    std::vector<double> expected, lg;
    expected_rssi_per_particle(ps_predicted, uav_future, params, pattern,
                               expected);
    log_likelihoods_from_expected(expected, z, params.sigma_p, lg);
    return renyi_reward_from_log_likelihoods(ps_predicted.weights, lg, alpha);
}

double shannon_reward(const TargetParticleSet& ps_predicted, double z,
                      const UavState& uav_future,
                      const PropagationParams& params,
                      const AntennaPattern& pattern) {
    std::vector<double> expected, lg;
    expected_rssi_per_particle(ps_predicted, uav_future, params, pattern,
                               expected);
    log_likelihoods_from_expected(expected, z, params.sigma_p, lg);
    return shannon_reward_from_log_likelihoods(ps_predicted, lg);
}

PlanResult plan(const std::vector<TargetParticleSet>& filters,
                const UavState& uav, const PlannerConfig& cfg,
                const ScenarioConfig& scenario, const MotionModel& motion,
                const PropagationParams& params, const AntennaPattern& pattern,
                std::uint64_t plan_seed) {
    if (cfg.policy != Policy::Renyi && cfg.policy != Policy::Shannon)
        throw std::invalid_argument(
            "plan() only evaluates reward-based policies");
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < filters.size(); ++j)
        if (!filters[j].localized) active.push_back(j);
    if (active.empty())
        throw std::invalid_argument("no unlocalized targets to plan for");

    const auto actions = enumerate_actions(cfg);
    const double horizon_s = cfg.horizon_seconds();
    const int traj_cycles = std::max(
        cfg.n_plan_cycles, static_cast<int>(std::ceil(horizon_s)));
    std::vector<std::vector<UavState>> trajectories;
    trajectories.reserve(actions.size());
    for (const auto& a : actions)
        trajectories.push_back(
            predict_uav_trajectory(uav, a, cfg, scenario.area, traj_cycles));

    // look-ahead cycle index for step i (1-based), the state at time k + i*t_p
    auto step_cycle = [&](int i) {
        int c = static_cast<int>(std::lround(i * cfg.t_plan)) - 1;
        return std::clamp(c, 0, traj_cycles - 1);
    };

    // Gain pruning aims at the nearest unlocalized target, which turns the
    // search into a nearest-target tour; the random-walk transition is
    // mean-preserving, so its current estimate is also its H-step predicted
    // mean.
    std::size_t focus = active.front();
    for (std::size_t j : active)
        if (horizontal_distance(uav.position, filters[j].estimate) <
            horizontal_distance(uav.position, filters[focus].estimate))
            focus = j;
    std::vector<UavState> terminals;
    terminals.reserve(actions.size());
    for (const auto& traj : trajectories)
        terminals.push_back(traj[step_cycle(cfg.n_horizon)]);
    const auto subset =
        select_action_subset(actions, terminals, pattern,
                             filters[focus].estimate, cfg.n_action_subset);

    // Predicted priors per (target, step) are shared by every action.
    std::vector<std::vector<TargetParticleSet>> predicted(active.size());
    for (std::size_t aj = 0; aj < active.size(); ++aj) {
        const auto& base = filters[active[aj]];
        predicted[aj].reserve(cfg.n_horizon);
        TargetParticleSet cur = base;
        for (int i = 1; i <= cfg.n_horizon; ++i) {
            Rng rng = make_rng(derive_seed(plan_seed, 1, active[aj],
                                           static_cast<std::uint64_t>(i)));
            predict(cur, motion, cfg.t_plan, rng);
            predicted[aj].push_back(cur);
        }
    }

    // Black-box measurement draws (prior particle index + noise) are shared
    // by every action: common random numbers keep the score differences free
    // of sampling noise, so the argmax compares poses, not noise.
    struct Draw {
        std::size_t particle;
        double noise;
    };
    std::vector<std::vector<std::vector<Draw>>> draws(active.size());
    {
        std::normal_distribution<double> noise(0.0, params.sigma_p);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::vector<double> cdf;
        for (std::size_t aj = 0; aj < active.size(); ++aj) {
            draws[aj].resize(cfg.n_horizon);
            for (int i = 1; i <= cfg.n_horizon; ++i) {
                const TargetParticleSet& prior = predicted[aj][i - 1];
                cdf.resize(prior.size());
                std::partial_sum(prior.weights.begin(), prior.weights.end(),
                                 cdf.begin());
                Rng rng = make_rng(derive_seed(plan_seed, 2, active[aj],
                                               static_cast<std::uint64_t>(i)));
                auto& out = draws[aj][i - 1];
                out.resize(cfg.m_samples);
                for (int m = 0; m < cfg.m_samples; ++m) {
                    const double u = u01(rng) * cdf.back();
                    const std::size_t pi = static_cast<std::size_t>(
                        std::lower_bound(cdf.begin(), cdf.end(), u) -
                        cdf.begin());
                    out[m] = {std::min(pi, prior.size() - 1), noise(rng)};
                }
            }
        }
    }

    PlanResult result;
    result.candidates = subset;
    result.scores.assign(subset.size(), 0.0);
    std::vector<double> expected, lg;

    for (std::size_t ai = 0; ai < subset.size(); ++ai) {
        const auto& traj = trajectories[subset[ai].index];
        double score = 0.0;
        for (std::size_t aj = 0; aj < active.size(); ++aj) {
            for (int i = 1; i <= cfg.n_horizon; ++i) {
                const TargetParticleSet& prior = predicted[aj][i - 1];
                const UavState& uf = traj[step_cycle(i)];
                expected_rssi_per_particle(prior, uf, params, pattern,
                                           expected);
                const double discount =
                    std::pow(cfg.gamma, static_cast<double>(i) * cfg.t_plan);
                for (const Draw& d : draws[aj][i - 1]) {
                    const double z = expected[d.particle] + d.noise;
                    if (!detect(z, scenario.sensitivity_dbm)) continue;
                    log_likelihoods_from_expected(expected, z, params.sigma_p,
                                                  lg);
                    const double r =
                        cfg.policy == Policy::Renyi
                            ? renyi_reward_from_log_likelihoods(prior.weights,
                                                                lg, cfg.alpha)
                            : shannon_reward_from_log_likelihoods(prior, lg);
                    score += discount * r;
                }
            }
        }
        result.scores[ai] = score / static_cast<double>(cfg.m_samples);
    }

    std::size_t best = 0;
    for (std::size_t ai = 1; ai < subset.size(); ++ai)
        if (result.scores[ai] > result.scores[best]) best = ai;
    result.action = subset[best];
    return result;
}

Action closest_target_action(const std::vector<TargetParticleSet>& filters,
                             const UavState& uav, const PlannerConfig& cfg) {
    const TargetParticleSet* pick = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : filters) {
        if (f.localized) continue;
        const double d = horizontal_distance(uav.position, f.estimate);
        if (d < best || (d == best && pick && f.target_id < pick->target_id)) {
            best = d;
            pick = &f;
        }
    }
    if (!pick) throw std::invalid_argument("no unlocalized targets");
    const double bearing = bearing_to(uav.position, pick->estimate);
    const auto actions = enumerate_actions(cfg);
    std::size_t nearest = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const double e =
            std::abs(signed_angle_diff(actions[i].target_heading, bearing));
        if (e < err) {
            err = e;
            nearest = i;
        }
    }
    return actions[nearest];
}

std::vector<Position3> boustrophedon_waypoints(const Area& area,
                                               double spacing) {
    if (spacing <= 0.0) throw std::invalid_argument("spacing must be positive");
    std::vector<Position3> out;
    const int tracks = static_cast<int>(std::floor(area.width() / spacing)) + 1;
    for (int k = 0; k < tracks; ++k) {
        const double x = std::min(area.xmin + k * spacing, area.xmax);
        if (k % 2 == 0) {
            out.push_back({x, area.ymin, 0.0});
            out.push_back({x, area.ymax, 0.0});
        } else {
            out.push_back({x, area.ymax, 0.0});
            out.push_back({x, area.ymin, 0.0});
        }
    }
    return out;
}

Action uniform_path_action(const UavState& uav, const PlannerConfig& cfg,
                           const Area& area, SweepState& sweep) {
    if (sweep.waypoints.empty()) {
        sweep.waypoints = boustrophedon_waypoints(area, cfg.track_spacing);
        sweep.next = 0;
    }
    const double capture =
        cfg.v_uav * static_cast<double>(cfg.n_plan_cycles);
    while (horizontal_distance(uav.position, sweep.waypoints[sweep.next]) <=
           capture) {
        sweep.next = (sweep.next + 1) % sweep.waypoints.size();
        if (sweep.next == 0) break;  // sweep finished, restart from the origin
    }
    const double bearing =
        bearing_to(uav.position, sweep.waypoints[sweep.next]);
    const auto actions = enumerate_actions(cfg);
    std::size_t nearest = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const double e =
            std::abs(signed_angle_diff(actions[i].target_heading, bearing));
        if (e < err) {
            err = e;
            nearest = i;
        }
    }
    return actions[nearest];
}

}  // namespace rftrack
