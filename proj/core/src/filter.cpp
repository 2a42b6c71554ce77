#include "rftrack/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace rftrack {

TargetParticleSet init_particles(const Area& area, int n_particles,
                                 double target_z, Rng& rng, int target_id) {
    if (area.degenerate()) throw std::invalid_argument("area is degenerate");
    if (n_particles < 2)
        throw std::invalid_argument("need at least 2 particles");
    TargetParticleSet ps;
    ps.target_id = target_id;
    ps.pz = target_z;
    ps.px.resize(n_particles);
    ps.py.resize(n_particles);
    ps.weights.assign(n_particles, 1.0 / n_particles);
    std::uniform_real_distribution<double> ux(area.xmin, area.xmax);
    std::uniform_real_distribution<double> uy(area.ymin, area.ymax);
    for (int i = 0; i < n_particles; ++i) {
        ps.px[i] = ux(rng);
        ps.py[i] = uy(rng);
    }
    recompute_stats(ps);
    return ps;
}

void predict(TargetParticleSet& ps, const MotionModel& motion, double dt,
             Rng& rng) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (motion.sigma_q == 0.0) return;
    const double s = motion.sigma_q * std::sqrt(dt);
    std::normal_distribution<double> g(0.0, s);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        ps.px[i] += g(rng);
        ps.py[i] += g(rng);
    }
}

void update_with_expected(TargetParticleSet& ps, double z,
                          const std::vector<double>& expected, double sigma_p) {
    const std::size_t n = ps.size();
    // log-domain weighting, shifted by the max exponent before exp
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (z - expected[i]) / sigma_p;
        lw[i] = std::log(ps.weights[i]) - 0.5 * e * e;
        if (lw[i] > best) best = lw[i];
    }
    if (!std::isfinite(best)) {
        // every weighted likelihood underflowed; reset and flag
        ps.weights.assign(n, 1.0 / static_cast<double>(n));
        ps.diverged = true;
        recompute_stats(ps);
        return;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ps.weights[i] = std::exp(lw[i] - best);
        total += ps.weights[i];
    }
    if (total <= 0.0) {
        ps.weights.assign(n, 1.0 / static_cast<double>(n));
        ps.diverged = true;
    } else {
        const double inv = 1.0 / total;
        for (auto& w : ps.weights) w *= inv;
    }
    recompute_stats(ps);
}

void expected_rssi_per_particle(const TargetParticleSet& ps,
                                const UavState& uav,
                                const PropagationParams& params,
                                const AntennaPattern& pattern,
                                std::vector<double>& out) {
    out.resize(ps.size());
    Position3 p;
    p.pz = ps.pz;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        p.px = ps.px[i];
        p.py = ps.py[i];
        out[i] = expected_rssi(params, pattern, p, uav);
    }
}

void update(TargetParticleSet& ps, double z, const UavState& uav,
            const PropagationParams& params, const AntennaPattern& pattern) {
    if (!std::isfinite(z)) throw std::invalid_argument("z must be finite");
    std::vector<double> expected;
    expected_rssi_per_particle(ps, uav, params, pattern, expected);
    update_with_expected(ps, z, expected, params.sigma_p);
}

double effective_sample_size(const TargetParticleSet& ps) {
    double sq = 0.0;
    for (double w : ps.weights) sq += w * w;
    return sq > 0.0 ? 1.0 / sq : 0.0;
}

void resample_and_inject(TargetParticleSet& ps, Rng& rng,
                         double inject_fraction, const Area& area) {
    const std::size_t n = ps.size();
    std::vector<double> nx(n), ny(n);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double step = 1.0 / static_cast<double>(n);
    double pointer = u01(rng) * step;
    double cum = ps.weights[0];
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (cum < pointer && j + 1 < n) cum += ps.weights[++j];
        nx[i] = ps.px[j];
        ny[i] = ps.py[j];
        pointer += step;
    }
    const auto n_inject = static_cast<std::size_t>(
        std::floor(inject_fraction * static_cast<double>(n)));
    if (n_inject > 0) {
        std::uniform_real_distribution<double> ux(area.xmin, area.xmax);
        std::uniform_real_distribution<double> uy(area.ymin, area.ymax);
        for (std::size_t i = n - n_inject; i < n; ++i) {
            nx[i] = ux(rng);
            ny[i] = uy(rng);
        }
    }
    ps.px = std::move(nx);
    ps.py = std::move(ny);
    ps.weights.assign(n, step);
    recompute_stats(ps);
}

void recompute_stats(TargetParticleSet& ps) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        mx += ps.weights[i] * ps.px[i];
        my += ps.weights[i] * ps.py[i];
    }
    double cxx = 0.0, cxy = 0.0, cyy = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double dx = ps.px[i] - mx;
        const double dy = ps.py[i] - my;
        cxx += ps.weights[i] * dx * dx;
        cxy += ps.weights[i] * dx * dy;
        cyy += ps.weights[i] * dy * dy;
    }
    ps.estimate = {mx, my, ps.pz};
    ps.cov_det = cxx * cyy - cxy * cxy;
    if (ps.cov_det < 0.0) ps.cov_det = 0.0;
}

bool localization_test(TargetParticleSet& ps, double n_threshold) {
    if (ps.cov_det < n_threshold) {
        ps.localized = true;
        return true;
    }
    return false;
}

void append_snapshot_csv(std::ostream& os, double time_s,
                         const TargetParticleSet& ps) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
        os << time_s << ',' << ps.target_id << ',' << ps.px[i] << ','
           << ps.py[i] << ',' << ps.weights[i] << '\n';
    }
}

}  // namespace rftrack
