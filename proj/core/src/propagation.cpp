#include "rftrack/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace rftrack {

void PropagationParams::validate() const {
    if (n_exp < 1.5 || n_exp > 5.0)
        throw std::invalid_argument("path-loss exponent out of range [1.5, 5]");
    if (sigma_p <= 0.0)
        throw std::invalid_argument("sigma_p must be positive");
    if (d_ref <= 0.0) throw std::invalid_argument("d_ref must be positive");
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (eps_ground < 1.0)
        throw std::invalid_argument("eps_ground must be >= 1");
}

PropagationParams PropagationParams::sim_defaults() {
    PropagationParams p;
    p.kind = PropagationKind::LogPath;
    p.p_ref = 7.7;
    p.n_exp = 3.1;
    p.sigma_p = 4.22;
    return p;
}

PropagationParams PropagationParams::field_logpath() {
    PropagationParams p;
    p.kind = PropagationKind::LogPath;
    p.p_ref = -15.69;
    p.n_exp = 2.0;
    p.sigma_p = 4.21;
    return p;
}

PropagationParams PropagationParams::field_multipath() {
    PropagationParams p;
    p.kind = PropagationKind::MultiPath;
    p.p_ref = -15.28;
    p.n_exp = 2.0;
    p.sigma_p = 2.31;
    return p;
}

double ground_reflection(double psi, double eps_g) {
    if (psi <= 0.0 || psi > 0.5 * std::numbers::pi + 1e-12)
        throw std::domain_error("incidence angle must be in (0, pi/2]");
    if (eps_g < 1.0) throw std::domain_error("eps_g must be >= 1");
    const double s = std::sin(psi);
    const double c = std::cos(psi);
    const double r = std::sqrt(eps_g - c * c);
    return (s - r) / (s + r);
}

double expected_rssi(const PropagationParams& params,
                     const AntennaPattern& pattern, const Position3& target,
                     const UavState& uav) {
    const double d = distance(target, uav.position);
    if (d <= 0.0) throw std::domain_error("target coincides with UAV");
    const double gain = antenna_gain(pattern, uav, target);
    double h = params.p_ref -
               10.0 * params.n_exp * std::log10(d / params.d_ref) + gain;
    if (params.kind == PropagationKind::MultiPath) {
        const double hd = horizontal_distance(target, uav.position);
        const double hz = target.pz + uav.position.pz;
        // reflected path length minus direct path length
        const double d_refl = std::sqrt(hd * hd + hz * hz);
        const double delta_d = d_refl - d;
        const double psi = std::atan2(hz, hd);
        double gamma = 0.0;
        if (psi > 0.0) gamma = ground_reflection(psi, params.eps_ground);
        const double dphi = kTwoPi * delta_d / params.lambda;
        const double re = 1.0 + gamma * std::cos(dphi);
        const double im = -gamma * std::sin(dphi);
        const double mag = std::sqrt(re * re + im * im);
        if (mag <= 0.0)
            return params.floor_dbm;
        h += 10.0 * params.n_exp * std::log10(mag);
    }
    return h < params.floor_dbm ? params.floor_dbm : h;
}

double sample_measurement(const PropagationParams& params,
                          const AntennaPattern& pattern,
                          const Position3& target, const UavState& uav,
                          Rng& rng) {
    std::normal_distribution<double> noise(0.0, params.sigma_p);
    return expected_rssi(params, pattern, target, uav) + noise(rng);
}

double likelihood(double z, const PropagationParams& params,
                  const AntennaPattern& pattern, const Position3& target,
                  const UavState& uav) {
    const double h = expected_rssi(params, pattern, target, uav);
    const double e = (z - h) / params.sigma_p;
    const double norm = 1.0 / (params.sigma_p * std::sqrt(kTwoPi));
    return norm * std::exp(-0.5 * e * e);
}

}  // namespace rftrack
