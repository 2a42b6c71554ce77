#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rftrack/geometry.hpp"

namespace rftrack {

/// Receiver antenna gain over azimuth (E-plane cut only).
///
/// Analytic mode models a two-element array: driven element plus a reflector
/// at spacing d1 (in wavelengths), with the reflector excitation amplitude
/// solved so the pattern hits a requested front-to-back ratio. Table mode
/// linearly interpolates a measured (azimuth, gain) table with wraparound.
/// Both are normalized to 0 dB at boresight and symmetric G(phi) = G(-phi).
class AntennaPattern {
public:
    enum class Mode { Analytic, Table };

    /// Two-element array pattern; front_to_back_db >= 0.
    static AntennaPattern analytic(double spacing_wavelengths = 0.1,
                                   double front_to_back_db = 12.0);

    /// Constant 0 dB gain in every direction.
    static AntennaPattern isotropic();

    /// Table of (azimuth_rad in [0, 2*pi), gain_db) pairs, need not be sorted.
    static AntennaPattern from_table(
        std::vector<std::pair<double, double>> table);

    /// CSV with header `azimuth_deg,gain_db`.
    static AntennaPattern from_csv(const std::string& path);

    /// Gain in dB at azimuth phi (radians, any value; wrapped internally).
    double gain_db(double phi) const;

    Mode mode() const { return mode_; }
    double front_to_back_db() const;

private:
    AntennaPattern() = default;

    Mode mode_ = Mode::Analytic;
    // analytic parameters
    double kd_ = 0.0;         // 2*pi*spacing
    double beta_ = 0.0;       // reflector phase
    double rho_ = 0.0;        // reflector amplitude
    double af0_sq_ = 1.0;     // boresight |AF|^2, for normalization
    // table mode
    std::vector<std::pair<double, double>> table_;
};

/// G_r evaluated at the off-boresight azimuth of `target` as seen from `uav`.
double antenna_gain(const AntennaPattern& pattern, const UavState& uav,
                    const Position3& target);

}  // namespace rftrack
