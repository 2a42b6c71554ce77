#pragma once

#include "rftrack/antenna.hpp"
#include "rftrack/geometry.hpp"
#include "rftrack/rng.hpp"

namespace rftrack {

enum class PropagationKind { LogPath, MultiPath };

/// Parameters of the RSSI measurement function h(x, u) and its noise.
struct PropagationParams {
    PropagationKind kind = PropagationKind::LogPath;
    double p_ref = 7.7;       // dBm, received power at the reference distance
    double d_ref = 1.0;       // m
    double n_exp = 3.1;       // path-loss exponent
    double sigma_p = 4.22;    // dB, measurement noise std
    double lambda = 2.0;      // m, wavelength (MultiPath)
    double eps_ground = 15.0; // relative ground permittivity (MultiPath)
    double floor_dbm = -150.0; // clamp for destructive-interference nulls

    void validate() const;

    /// Ten-target simulation scenario parameters (LogPath).
    static PropagationParams sim_defaults();
    /// Field-fitted LogPath model.
    static PropagationParams field_logpath();
    /// Field-fitted MultiPath model.
    static PropagationParams field_multipath();
};

/// Real-valued ground reflection coefficient for incidence angle psi
/// (radians, in (0, pi/2]) and relative permittivity eps_g >= 1.
double ground_reflection(double psi, double eps_g);

/// Noise-free RSSI h(x, u) in dBm. MultiPath adds the two-ray ground
/// interference term; the result is clamped below at params.floor_dbm.
double expected_rssi(const PropagationParams& params,
                     const AntennaPattern& pattern, const Position3& target,
                     const UavState& uav);

/// expected_rssi plus a Gaussian noise draw with std sigma_p.
double sample_measurement(const PropagationParams& params,
                          const AntennaPattern& pattern,
                          const Position3& target, const UavState& uav,
                          Rng& rng);

/// Gaussian measurement density N(z; h(x,u), sigma_p^2).
double likelihood(double z, const PropagationParams& params,
                  const AntennaPattern& pattern, const Position3& target,
                  const UavState& uav);

/// Unnormalized Gaussian log-density given a precomputed h(x, u);
/// the hot path used by the filter and planner.
inline double log_likelihood_from_expected(double z, double expected,
                                           double sigma_p) {
    const double e = (z - expected) / sigma_p;
    return -0.5 * e * e;
}

/// Closed lower boundary: a pulse exactly at the sensitivity is detected.
inline bool detect(double z, double sensitivity_dbm) {
    return z >= sensitivity_dbm;
}

}  // namespace rftrack
