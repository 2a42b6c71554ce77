#pragma once

#include <ostream>
#include <vector>

#include "rftrack/geometry.hpp"
#include "rftrack/propagation.hpp"
#include "rftrack/rng.hpp"
#include "rftrack/types.hpp"

namespace rftrack {

/// Weighted particle cloud for one target's position posterior.
/// All particles share the same z (2D tracking); weights sum to 1.
struct TargetParticleSet {
    int target_id = 0;
    double pz = 0.0;
    std::vector<double> px;
    std::vector<double> py;
    std::vector<double> weights;
    bool localized = false;
    bool diverged = false;  // set when an update underflowed to zero weight
    Position3 estimate;
    double cov_det = 0.0;  // m^4, det of the 2x2 weighted xy covariance

    std::size_t size() const { return px.size(); }
};

/// Uniform prior over the search area at height target_z.
TargetParticleSet init_particles(const Area& area, int n_particles,
                                 double target_z, Rng& rng, int target_id = 0);

/// Random-walk prediction: independent Gaussian xy displacement with
/// per-axis std sigma_q * sqrt(dt); z untouched; weights unchanged.
void predict(TargetParticleSet& ps, const MotionModel& motion, double dt,
             Rng& rng);

/// Bayes update: w_i *= N(z; h(x_i, u), sigma_p^2), renormalized.
/// A total-weight underflow resets to uniform weights and flags divergence.
void update(TargetParticleSet& ps, double z, const UavState& uav,
            const PropagationParams& params, const AntennaPattern& pattern);

/// Same update given precomputed per-particle expected RSSI values.
void update_with_expected(TargetParticleSet& ps, double z,
                          const std::vector<double>& expected, double sigma_p);

/// 1 / sum(w_i^2), in [1, N_s].
double effective_sample_size(const TargetParticleSet& ps);

/// Systematic resampling to equal weights, then floor(inject_fraction * N_s)
/// particles replaced by uniform draws over the area.
void resample_and_inject(TargetParticleSet& ps, Rng& rng,
                         double inject_fraction, const Area& area);

/// True iff the xy covariance determinant is below n_threshold; marks the
/// set localized so it is excluded from further updates and planning.
bool localization_test(TargetParticleSet& ps, double n_threshold);

/// Recompute estimate (weighted mean) and cov_det from current particles.
void recompute_stats(TargetParticleSet& ps);

/// Per-particle expected RSSI at a given UAV pose; planner/filter hot path.
void expected_rssi_per_particle(const TargetParticleSet& ps,
                                const UavState& uav,
                                const PropagationParams& params,
                                const AntennaPattern& pattern,
                                std::vector<double>& out);

/// Append rows `time_s,target_id,px,py,weight`.
void append_snapshot_csv(std::ostream& os, double time_s,
                         const TargetParticleSet& ps);

}  // namespace rftrack
