// Microbenchmarks for the scheduling and power hot paths.

#include <benchmark/benchmark.h>

#include "fransim/pipeline.hpp"

using namespace fransim;

namespace {

struct BenchEnv {
    ScenarioConfig cfg;
    Topology topo;
    SideInfo side;
    CacheMatrix cache;
    ChannelRealization h;
    LinkCapacities caps;
    Partition partition;

    explicit BenchEnv(int num_users) {
        cfg.num_users = num_users;
        cfg.num_faps = 3;
        cfg.num_ced2d = 4;
        cfg.num_files = 10;
        cfg.rate_threshold = 0.0;
        cfg.seed = 99;
        Rng trng = Rng::derive(cfg.seed, 101);
        topo = Topology::generate(cfg, trng);
        Rng srng = Rng::derive(cfg.seed, 2);
        side = draw_side_info(cfg, srng);
        Rng crng = Rng::derive(cfg.seed, 3);
        h = draw_channel(topo, cfg, crng);
        cache = CacheMatrix(cfg.num_files, cfg.num_faps, cfg.num_ced2d);
        Rng krng = Rng::derive(cfg.seed, 4);
        for (auto& e : cache.fap_entries) e = krng.uniform() < 0.5 ? 1 : 0;
        for (auto& e : cache.ced2d_entries) e = krng.uniform() < 0.5 ? 1 : 0;
        caps = compute_capacities(h, PowerProfile::all_max(cfg));
        const CoalitionContext ctx{topo, cache, side, caps, cfg};
        Rng prng = Rng::derive(cfg.seed, 16);
        partition = init_partition(ctx, prng);
    }
};

void BM_BuildGraph(benchmark::State& state) {
    BenchEnv env(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto g = build_graph(env.partition, env.cache, env.side, env.caps, env.cfg);
        benchmark::DoNotOptimize(g.vertices.data());
    }
}
BENCHMARK(BM_BuildGraph)->Arg(20)->Arg(40);

void BM_GreedyMwc(benchmark::State& state) {
    BenchEnv env(static_cast<int>(state.range(0)));
    const auto g = build_graph(env.partition, env.cache, env.side, env.caps, env.cfg);
    for (auto _ : state) {
        auto c = greedy_mwc(g);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_GreedyMwc)->Arg(20)->Arg(40);

void BM_SolveSchedule(benchmark::State& state) {
    BenchEnv env(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto s = solve_schedule(env.partition, env.cache, env.side, env.caps, env.cfg);
        benchmark::DoNotOptimize(s.per_tx.data());
    }
}
BENCHMARK(BM_SolveSchedule)->Arg(20)->Arg(40);

void BM_PowerUpdateStep(benchmark::State& state) {
    BenchEnv env(20);
    const Schedule s = solve_schedule(env.partition, env.cache, env.side, env.caps, env.cfg);
    PowerProfile p = PowerProfile::all_max(env.cfg);
    for (auto _ : state) {
        p = power_update_step(p, s, env.h, env.cfg);
        benchmark::DoNotOptimize(p.fap_power_w.data());
    }
}
BENCHMARK(BM_PowerUpdateStep);

void BM_SwitchPhase(benchmark::State& state) {
    BenchEnv env(static_cast<int>(state.range(0)));
    const CoalitionContext ctx{env.topo, env.cache, env.side, env.caps, env.cfg};
    for (auto _ : state) {
        state.PauseTiming();
        Rng prng = Rng::derive(env.cfg.seed, 16);
        Partition p = init_partition(ctx, prng);
        state.ResumeTiming();
        switch_phase(p, ctx);
        benchmark::DoNotOptimize(p.fap_members.data());
    }
}
BENCHMARK(BM_SwitchPhase)->Arg(20)->Arg(40);

void BM_FullDeliveryRealization(benchmark::State& state) {
    BenchEnv env(static_cast<int>(state.range(0)));
    std::uint64_t i = 0;
    for (auto _ : state) {
        Rng prng = Rng::derive(env.cfg.seed, 16, i++);
        auto r = run_delivery(env.topo, env.cache, env.side, env.h, env.cfg, prng);
        benchmark::DoNotOptimize(r.clnc.sum_rate_se);
    }
}
BENCHMARK(BM_FullDeliveryRealization)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
