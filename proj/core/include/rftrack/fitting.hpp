#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rftrack/propagation.hpp"

namespace rftrack {

/// One range/RSSI calibration sample. Geometry (tag and UAV heights) is
/// needed for MultiPath fitting only.
struct RangeRssiSample {
    double dist = 0.0;  // m, direct path length, > 0
    double rssi = 0.0;  // dBm
    std::optional<double> target_z;  // m
    std::optional<double> uav_z;     // m
};

struct FitResult {
    double p_ref = 0.0;    // dBm
    double sigma_p = 0.0;  // dB, residual std (n-1 denominator)
    std::vector<double> residuals;  // per sample, z_i - h_i(p_ref)
};

/// Least-squares estimate of the reference power with the path-loss exponent
/// held fixed. The model is linear in p_ref, so the estimate is the mean of
/// z_i minus the per-sample geometric offset; sigma_p is the residual std.
///
/// MultiPath samples must carry geometry; the two-ray term is evaluated from
/// each sample's heights and distance. Antenna gain is assumed constant over
/// the calibration run and is absorbed into p_ref.
///
/// Throws std::invalid_argument when fewer than two distinct distances are
/// present (rank-deficient design).
FitResult fit_propagation_params(const std::vector<RangeRssiSample>& samples,
                                 PropagationKind kind, double n_fixed = 2.0,
                                 double lambda = 2.0, double eps_ground = 15.0);

/// Noise-free model value for a calibration sample under the fitted setup.
double fit_model_rssi(const RangeRssiSample& s, PropagationKind kind,
                      double p_ref, double n_fixed, double lambda,
                      double eps_ground);

/// CSV with header `dist_m,rssi_dbm[,target_z_m,uav_z_m]`.
std::vector<RangeRssiSample> load_range_rssi_csv(const std::string& path);

}  // namespace rftrack
