#include <benchmark/benchmark.h>

#include "clusterforge/criteria.hpp"
#include "clusterforge/expansion.hpp"
#include "clusterforge/graphs.hpp"
#include "clusterforge/rng.hpp"
#include "clusterforge/subset_algebra.hpp"

using namespace clusterforge;

namespace {

ZetaMatrix random_zeta(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Complex> upper;
    for (int i = 0; i < n * (n - 1) / 2; ++i)
        upper.emplace_back(rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.5));
    return ZetaMatrix::from_zeta(n, upper);
}

void bm_connected_stream(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        int count = 0;
        ConnectedGraphStream s(n);
        while (s.next()) ++count;
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(bm_connected_stream)->Arg(4)->Arg(5)->Arg(6);

void bm_connected_sum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto z = random_zeta(n, 7);
    for (auto _ : state) {
        auto v = connected_graph_sum(
            n, [&](int i, int j) { return z.zeta(i, j); });
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_connected_sum)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

void bm_alg_exp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto z = random_zeta(n, 11);
    const auto phi = phi_psi(z).first;
    for (auto _ : state) {
        auto e = alg_exp(phi);
        benchmark::DoNotOptimize(e.values.data());
    }
}
BENCHMARK(bm_alg_exp)->Arg(5)->Arg(6)->Arg(7);

void bm_cluster_logZ(benchmark::State& state) {
    const auto m = random_certified_model(5, 20260823);
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto s = cluster_logZ(m, order, ClusterOptions{1e-15, false});
        benchmark::DoNotOptimize(s.partial.data());
    }
}
BENCHMARK(bm_cluster_logZ)->Arg(6)->Arg(8)->Arg(10);

} // namespace

BENCHMARK_MAIN();
