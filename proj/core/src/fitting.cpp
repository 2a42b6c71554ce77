#include "rftrack/fitting.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rftrack {

double fit_model_rssi(const RangeRssiSample& s, PropagationKind kind,
                      double p_ref, double n_fixed, double lambda,
                      double eps_ground) {
    double h = p_ref - 10.0 * n_fixed * std::log10(s.dist);
    if (kind == PropagationKind::MultiPath) {
        if (!s.target_z || !s.uav_z)
            throw std::invalid_argument(
                "MultiPath fitting requires target_z and uav_z per sample");
        const double dz = *s.uav_z - *s.target_z;
        const double hd_sq = s.dist * s.dist - dz * dz;
        if (hd_sq <= 0.0)
            throw std::invalid_argument(
                "sample distance inconsistent with geometry");
        const double hd = std::sqrt(hd_sq);
        const double hz = *s.target_z + *s.uav_z;
        const double d_refl = std::sqrt(hd * hd + hz * hz);
        const double psi = std::atan2(hz, hd);
        const double gamma = psi > 0.0 ? ground_reflection(psi, eps_ground) : 0.0;
        const double dphi = kTwoPi * (d_refl - s.dist) / lambda;
        const double re = 1.0 + gamma * std::cos(dphi);
        const double im = -gamma * std::sin(dphi);
        const double mag = std::sqrt(re * re + im * im);
        h += 10.0 * n_fixed * std::log10(std::max(mag, 1e-15));
    }
    return h;
}

FitResult fit_propagation_params(const std::vector<RangeRssiSample>& samples,
                                 PropagationKind kind, double n_fixed,
                                 double lambda, double eps_ground) {
    std::set<double> distinct;
    for (const auto& s : samples) {
        if (s.dist <= 0.0)
            throw std::invalid_argument("sample distance must be positive");
        distinct.insert(s.dist);
    }
    if (distinct.size() < 2)
        throw std::invalid_argument(
            "rank-deficient data: need samples at >= 2 distinct distances");

    // h_i = p_ref + offset_i, so the LS estimate is the mean of z_i - offset_i
    double acc = 0.0;
    for (const auto& s : samples)
        acc += s.rssi - fit_model_rssi(s, kind, 0.0, n_fixed, lambda, eps_ground);
    FitResult out;
    out.p_ref = acc / static_cast<double>(samples.size());

    out.residuals.reserve(samples.size());
    double ss = 0.0;
    for (const auto& s : samples) {
        const double r = s.rssi - fit_model_rssi(s, kind, out.p_ref, n_fixed,
                                                 lambda, eps_ground);
        out.residuals.push_back(r);
        ss += r * r;
    }
    out.sigma_p = samples.size() > 1
                      ? std::sqrt(ss / static_cast<double>(samples.size() - 1))
                      : 0.0;
    return out;
}

std::vector<RangeRssiSample> load_range_rssi_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample CSV: " + path);
    std::vector<RangeRssiSample> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (first && line.find("dist") != std::string::npos) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ss(line);
        std::string tok;
        std::vector<double> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        if (cols.size() != 2 && cols.size() != 4)
            throw std::runtime_error("malformed sample row: " + line);
        RangeRssiSample s;
        s.dist = cols[0];
        s.rssi = cols[1];
        if (cols.size() == 4) {
            s.target_z = cols[2];
            s.uav_z = cols[3];
        }
        out.push_back(s);
    }
    if (out.empty()) throw std::runtime_error("sample CSV is empty: " + path);
    return out;
}

}  // namespace rftrack
