#include "rftrack/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rftrack {
namespace {

double array_factor_sq(double kd, double beta, double rho, double phi) {
    const double theta = beta + kd * std::cos(phi);
    return 1.0 + rho * rho + 2.0 * rho * std::cos(theta);
}

double ftb_db_for_rho(double kd, double beta, double rho) {
    const double front = array_factor_sq(kd, beta, rho, 0.0);
    const double back = array_factor_sq(kd, beta, rho, std::numbers::pi);
    if (back <= 0.0) return 1e9;
    return 10.0 * std::log10(front / back);
}

}  // namespace

AntennaPattern AntennaPattern::analytic(double spacing_wavelengths,
                                        double front_to_back_db) {
    if (spacing_wavelengths <= 0.0)
        throw std::invalid_argument("antenna spacing must be positive");
    if (front_to_back_db < 0.0)
        throw std::invalid_argument("front-to-back ratio must be >= 0 dB");
    AntennaPattern p;
    p.mode_ = Mode::Analytic;
    p.kd_ = kTwoPi * spacing_wavelengths;
    // reflector phased to null the back lobe at rho = 1
    p.beta_ = std::numbers::pi + p.kd_;
    // bisect rho in [0, 1): front-to-back grows monotonically with rho
    double lo = 0.0, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (ftb_db_for_rho(p.kd_, p.beta_, mid) < front_to_back_db)
            lo = mid;
        else
            hi = mid;
    }
    p.rho_ = 0.5 * (lo + hi);
    p.af0_sq_ = array_factor_sq(p.kd_, p.beta_, p.rho_, 0.0);
    return p;
}

AntennaPattern AntennaPattern::isotropic() { return analytic(0.1, 0.0); }

AntennaPattern AntennaPattern::from_table(
    std::vector<std::pair<double, double>> table) {
    if (table.empty())
        throw std::invalid_argument("antenna gain table is empty");
    for (auto& [az, g] : table) {
        az = normalize_angle(az);
        if (!std::isfinite(g))
            throw std::invalid_argument("antenna gain table has non-finite gain");
    }
    std::sort(table.begin(), table.end());
    AntennaPattern p;
    p.mode_ = Mode::Table;
    p.table_ = std::move(table);
    return p;
}

AntennaPattern AntennaPattern::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open antenna table: " + path);
    std::vector<std::pair<double, double>> table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find("azimuth") != std::string::npos) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ss(line);
        std::string a, g;
        if (!std::getline(ss, a, ',') || !std::getline(ss, g, ','))
            throw std::runtime_error("malformed antenna table row: " + line);
        table.emplace_back(std::stod(a) * std::numbers::pi / 180.0,
                           std::stod(g));
    }
    return from_table(std::move(table));
}

double AntennaPattern::gain_db(double phi) const {
    phi = normalize_angle(phi);
    if (mode_ == Mode::Analytic) {
        const double af = array_factor_sq(kd_, beta_, rho_, phi);
        const double floor = 1e-12 * af0_sq_;
        return 10.0 * std::log10(std::max(af, floor) / af0_sq_);
    }
    // table lookup with wraparound
    if (table_.size() == 1) return table_.front().second;
    auto it = std::lower_bound(
        table_.begin(), table_.end(), phi,
        [](const std::pair<double, double>& e, double v) { return e.first < v; });
    if (it != table_.end() && it->first == phi) return it->second;
    double a0, g0, a1, g1;
    if (it == table_.begin() || it == table_.end()) {
        a0 = table_.back().first;
        g0 = table_.back().second;
        a1 = table_.front().first + kTwoPi;
        g1 = table_.front().second;
        if (phi < table_.front().first) phi += kTwoPi;
    } else {
        a0 = (it - 1)->first;
        g0 = (it - 1)->second;
        a1 = it->first;
        g1 = it->second;
    }
    const double span = a1 - a0;
    const double t = span > 0.0 ? (phi - a0) / span : 0.0;
    return g0 + t * (g1 - g0);
}

double AntennaPattern::front_to_back_db() const {
    return gain_db(0.0) - gain_db(std::numbers::pi);
}

double antenna_gain(const AntennaPattern& pattern, const UavState& uav,
                    const Position3& target) {
    const double bearing = bearing_to(uav.position, target);
    return pattern.gain_db(bearing - uav.heading);
}

}  // namespace rftrack
