#include <benchmark/benchmark.h>

#include "rftrack/filter.hpp"
#include "rftrack/planner.hpp"
#include "rftrack/sim.hpp"

using namespace rftrack;

namespace {

struct Fixture {
    Area area{0.0, 500.0, 0.0, 500.0};
    PropagationParams params = PropagationParams::sim_defaults();
    AntennaPattern pattern = AntennaPattern::analytic();
    UavState uav{{250.0, 250.0, 20.0}, 0.0};
    TargetParticleSet ps;

    explicit Fixture(int n_particles) {
        Rng rng = make_rng(42);
        ps = init_particles(area, n_particles, 0.0, rng);
    }
};

void BM_FilterUpdate(benchmark::State& state) {
    Fixture fx(static_cast<int>(state.range(0)));
    double z = -70.0;
    for (auto _ : state) {
        TargetParticleSet ps = fx.ps;
        update(ps, z, fx.uav, fx.params, fx.pattern);
        benchmark::DoNotOptimize(ps.cov_det);
    }
}
BENCHMARK(BM_FilterUpdate)->Arg(10000)->Arg(100000);

void BM_RenyiReward(benchmark::State& state) {
    Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const double r =
            renyi_reward(fx.ps, -70.0, fx.uav, fx.params, fx.pattern, 0.1);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_RenyiReward)->Arg(10000)->Arg(100000);

void BM_PlanEvent(benchmark::State& state) {
    Config cfg;
    cfg.scenario.n_targets = static_cast<int>(state.range(0));
    Fixture fx(cfg.scenario.n_particles);
    std::vector<TargetParticleSet> filters;
    for (int j = 0; j < cfg.scenario.n_targets; ++j) {
        Rng rng = make_rng(derive_seed(7, j));
        filters.push_back(init_particles(cfg.scenario.area,
                                         cfg.scenario.n_particles, 0.0, rng, j));
    }
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const PlanResult pr = plan(filters, fx.uav, cfg.planner, cfg.scenario,
                                   cfg.motion, fx.params, fx.pattern, ++seed);
        benchmark::DoNotOptimize(pr.action.index);
    }
}
BENCHMARK(BM_PlanEvent)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
