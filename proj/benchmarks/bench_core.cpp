#include <benchmark/benchmark.h>

#include <complex>

#include "lrp/ensemble.hpp"
#include "lrp/montecarlo.hpp"
#include "lrp/profile.hpp"
#include "lrp/rng.hpp"
#include "lrp/spectra.hpp"
#include "lrp/theory.hpp"

namespace {

lrp::EnsembleSpec spec_for(int n, double b) {
    lrp::EnsembleSpec spec;
    spec.n = n;
    spec.b = b;
    spec.dist = {lrp::EntryKind::gaussian, 1.0};
    spec.profile = lrp::Profile::gaussian();
    return spec;
}

void BM_PhiloxBlock(benchmark::State& state) {
    lrp::philox::Counter ctr{1, 2, 3, 4};
    const lrp::philox::Key key{5, 6};
    for (auto _ : state) {
        ctr = lrp::philox::block(ctr, key);
        benchmark::DoNotOptimize(ctr);
    }
}
BENCHMARK(BM_PhiloxBlock);

void BM_SampleMatrix(benchmark::State& state) {
    const auto spec = spec_for(static_cast<int>(state.range(0)), state.range(0) / 10.0);
    std::uint64_t rep = 0;
    for (auto _ : state) {
        auto m = lrp::sample_matrix(spec, 42, rep++);
        benchmark::DoNotOptimize(m.h.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleMatrix)->RangeMultiplier(2)->Range(100, 800)->Complexity();

void BM_Eigensolve(benchmark::State& state) {
    const auto spec = spec_for(static_cast<int>(state.range(0)), state.range(0) / 10.0);
    const auto m = lrp::sample_matrix(spec, 42, 0);
    for (auto _ : state) {
        auto sample = lrp::eigenvalues_symmetric(m.h);
        benchmark::DoNotOptimize(sample.eigenvalues.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigensolve)->RangeMultiplier(2)->Range(100, 800)->Complexity();

void BM_ResolventTrace(benchmark::State& state) {
    const auto spec = spec_for(500, 50.0);
    const auto sample = lrp::eigenvalues_symmetric(lrp::sample_matrix(spec, 42, 0).h);
    const std::complex<double> z{0.0, 4.0};
    for (auto _ : state) {
        auto g = lrp::resolvent_trace(sample, z);
        benchmark::DoNotOptimize(g.g);
    }
}
BENCHMARK(BM_ResolventTrace);

void BM_ComputeQ(benchmark::State& state) {
    const lrp::TheoryContext ctx{1.0, 3.0, lrp::Profile::gaussian()};
    for (auto _ : state) {
        auto q = lrp::compute_Q(ctx, {0.0, 4.0}, {0.0, -4.0});
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ComputeQ);

void BM_ComputeXi(benchmark::State& state) {
    const lrp::TheoryContext ctx{1.0, 3.0, lrp::Profile::gaussian()};
    for (auto _ : state) {
        auto xi = lrp::compute_xi(ctx, 5e-3, -5e-3);
        benchmark::DoNotOptimize(xi);
    }
}
BENCHMARK(BM_ComputeXi);

}  // namespace

BENCHMARK_MAIN();
