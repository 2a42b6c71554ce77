#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rftrack/config.hpp"
#include "rftrack/filter.hpp"

namespace rftrack {

/// Discrete heading set A_k: heading_count actions evenly spaced over
/// [0, 2*pi).
std::vector<Action> enumerate_actions(const PlannerConfig& cfg);

/// Per-cycle UAV states over n_cycles one-second cycles: the UAV rotates in
/// place by at most theta_max per cycle until the commanded heading is
/// reached, then moves forward at v_uav; position is clamped to the area.
/// The residual (< theta_max) rotation completes at the start of the first
/// forward cycle.
std::vector<UavState> predict_uav_trajectory(const UavState& uav,
                                             const Action& a,
                                             const PlannerConfig& cfg,
                                             const Area& area, int n_cycles);

/// Gain-based action pruning: keep the n_subset actions whose terminal
/// predicted pose has the highest receiver gain toward x_hat. Stable in
/// enumeration order.
std::vector<Action> select_action_subset(
    const std::vector<Action>& actions,
    const std::vector<UavState>& terminal_states, const AntennaPattern& pattern,
    const Position3& x_hat, int n_subset);

/// Black-box future measurement: draw one particle by weight, sample a noisy
/// RSSI from its position, apply the detection threshold. nullopt means the
/// drawn pulse fell below sensitivity.
std::optional<double> sample_future_measurement(const TargetParticleSet& ps,
                                                const UavState& uav_future,
                                                const PropagationParams& params,
                                                const AntennaPattern& pattern,
                                                double sensitivity_dbm,
                                                Rng& rng);

/// Particle estimator of the Renyi information gain between the predicted
/// prior (weights w) and the posterior implied by likelihood values g:
///   R = 1/(alpha-1) * log[ sum w_i g_i^(1-alpha) / (sum w_i g_i)^(1-alpha) ]
/// Returns 0 (and sets *diverged when given) if every g_i is zero.
double renyi_reward_from_likelihoods(std::span<const double> weights,
                                     std::span<const double> g, double alpha,
                                     bool* diverged = nullptr);

/// Same estimator from log-likelihood values (numerically robust hot path).
double renyi_reward_from_log_likelihoods(std::span<const double> weights,
                                         std::span<const double> log_g,
                                         double alpha,
                                         bool* diverged = nullptr);

/// Renyi reward of measurement z at pose uav_future against the predicted
/// prior ps_predicted. A non-detection carries no information: pass no z
/// (callers should score it as 0).
double renyi_reward(const TargetParticleSet& ps_predicted, double z,
                    const UavState& uav_future,
                    const PropagationParams& params,
                    const AntennaPattern& pattern, double alpha);

/// Shannon-entropy reduction H(prior) - H(posterior) under the 2D Gaussian
/// approximation 0.5 * log((2*pi*e)^2 * det(Sigma)).
double shannon_reward(const TargetParticleSet& ps_predicted, double z,
                      const UavState& uav_future,
                      const PropagationParams& params,
                      const AntennaPattern& pattern);

struct PlanResult {
    Action action;
    std::vector<Action> candidates;  // post-pruning action subset
    std::vector<double> scores;      // aligned with candidates
};

/// Total-expected-reward action selection over the pruned action subset.
/// Only Renyi and Shannon policies evaluate rewards; use
/// closest_target_action / uniform_path_action for the baselines.
/// plan_seed derives all rollout substreams by counter, so the result is
/// independent of evaluation order.
PlanResult plan(const std::vector<TargetParticleSet>& filters,
                const UavState& uav, const PlannerConfig& cfg,
                const ScenarioConfig& scenario, const MotionModel& motion,
                const PropagationParams& params, const AntennaPattern& pattern,
                std::uint64_t plan_seed);

/// Baseline: head toward the closest unlocalized estimate (ties by lower
/// target id), snapped to the discrete heading set.
Action closest_target_action(const std::vector<TargetParticleSet>& filters,
                             const UavState& uav, const PlannerConfig& cfg);

/// Boustrophedon sweep waypoints over the area at the given track spacing.
std::vector<Position3> boustrophedon_waypoints(const Area& area,
                                               double spacing);

/// Baseline: predefined lawnmower sweep, independent of filter state.
struct SweepState {
    std::vector<Position3> waypoints;
    std::size_t next = 0;
};

Action uniform_path_action(const UavState& uav, const PlannerConfig& cfg,
                           const Area& area, SweepState& sweep);

}  // namespace rftrack
