#include <benchmark/benchmark.h>

#include <vector>

#include "bundle_lab/group_revenue.hpp"
#include "bundle_lab/pair_revenue.hpp"
#include "bundle_lab/random.hpp"
#include "bundle_lab/single_pricing.hpp"

using namespace bundle_lab;

namespace {

ValuationDistribution bumpy() {
  return make_piecewise_linear({0.0, 0.2, 0.5, 0.8, 1.0}, {0.4, 1.6, 0.9, 1.3, 0.5});
}

void BM_Cdf(benchmark::State& state) {
  const auto d = bumpy();
  double v = 0.0;
  for (auto _ : state) {
    v += 0.001;
    if (v > 1.0) v = 0.0;
    benchmark::DoNotOptimize(d.cdf(v));
  }
}
BENCHMARK(BM_Cdf);

void BM_Quantile(benchmark::State& state) {
  const auto d = bumpy();
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(d.quantile(rng.uniform01()));
}
BENCHMARK(BM_Quantile);

void BM_OptimalSinglePrice(benchmark::State& state) {
  const auto d = bumpy();
  for (auto _ : state) benchmark::DoNotOptimize(optimal_single_price(d));
}
BENCHMARK(BM_OptimalSinglePrice)->Unit(benchmark::kMicrosecond);

void BM_PairExact(benchmark::State& state) {
  const auto d = bumpy();
  const BundleOffer offer = epsilon_offer(0.55, 0.5, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(pair_expected_revenue_exact(d, d, offer));
}
BENCHMARK(BM_PairExact)->Unit(benchmark::kMicrosecond);

void BM_GroupMonteCarlo(benchmark::State& state) {
  const std::vector<ValuationDistribution> dists(static_cast<std::size_t>(state.range(0)), make_uniform(1.0));
  const BundleOffer offer = pure_bundle_offer(dists.size(), 0.45 * static_cast<double>(dists.size()));
  for (auto _ : state) benchmark::DoNotOptimize(group_expected_revenue_mc(dists, offer, 100000, 3));
  state.SetItemsProcessed(state.iterations() * 100000 * state.range(0));
}
BENCHMARK(BM_GroupMonteCarlo)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
