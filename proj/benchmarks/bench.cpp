#include <benchmark/benchmark.h>

#include <cmath>

#include "levytc/ivp.hpp"
#include "levytc/simulate.hpp"
#include "levytc/symbol.hpp"

using namespace ltc;

namespace {

MarkovTriplet brownian_triplet() {
    MarkovTriplet t;
    t.state_space = StateSpace::full(1);
    t.drift = [](const Vec&) { return Vec(0.0); };
    t.diffusion = [](const Vec&) { return Mat::scalar(1, 1.0); };
    t.jumps = JumpFamily::none_();
    return t;
}

void BM_simulate_brownian(benchmark::State& state) {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    MarkovTriplet t = brownian_triplet();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(t, Vec(0.0), cfg, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(1.0 / cfg.dt));
}
BENCHMARK(BM_simulate_brownian);

void BM_simulate_stable(benchmark::State& state) {
    MarkovTriplet t = brownian_triplet();
    t.diffusion = [](const Vec&) { return Mat::scalar(1, 0.0); };
    t.jumps = JumpFamily::stable_like([](const Vec&) { return 1.5; },
                                      [](const Vec&) { return 1.0; });
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(t, Vec(0.0), cfg, ++seed));
    }
}
BENCHMARK(BM_simulate_stable);

void BM_solve_ivp(benchmark::State& state) {
    const double dt = 1e-4;
    std::vector<double> ts, vs;
    for (double t = 0.0; t <= 1.0 + 0.5 * dt; t += dt) {
        ts.push_back(t);
        vs.push_back(std::max(0.0, 0.5 + std::sin(6.0 * t)));
    }
    TimeProfile y = TimeProfile::from_samples(ts, vs);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_ivp_extremal(y));
    }
}
BENCHMARK(BM_solve_ivp);

void BM_h_global(benchmark::State& state) {
    SymbolSpec s = make_preset("stable(1.5)");
    for (auto _ : state) {
        benchmark::DoNotOptimize(h_global(s, 0.01));
    }
}
BENCHMARK(BM_h_global);

}  // namespace

BENCHMARK_MAIN();
