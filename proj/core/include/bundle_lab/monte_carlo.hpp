#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bundle_lab/bundle_mechanism.hpp"
#include "bundle_lab/valuation.hpp"

namespace bundle_lab {

/// Samples are drawn in fixed-size batches; batch k uses Rng::substream(seed, k)
/// and fills customers 0..n-1 of each sample in order. Every sampler below
/// follows this layout, so they all see the same valuation profiles for a
/// given seed (common random numbers).
inline constexpr std::size_t kMonteCarloBatch = 4096;

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double accept_fraction = 0.0;  ///< share of samples in which the bundle sold
  std::size_t samples = 0;
};

/// Seeded Monte Carlo estimate of the expected seller revenue of `offer`
/// against independent valuations drawn from `dists`. Batches may run in
/// parallel; the reduction runs in batch order, so results are bit-identical
/// for a given seed regardless of thread count.
MonteCarloEstimate expected_revenue_mc(std::span<const ValuationDistribution> dists,
                                       const BundleOffer& offer, std::size_t n_samples,
                                       std::uint64_t seed);

/// The valuation profiles expected_revenue_mc would draw, row-major
/// (sample-major, n values per sample).
std::vector<double> sample_profiles(std::span<const ValuationDistribution> dists,
                                    std::size_t n_samples, std::uint64_t seed);

/// Per-sample totals sum_i V_i for the same profiles, without storing them.
std::vector<double> sample_valuation_totals(std::span<const ValuationDistribution> dists,
                                            std::size_t n_samples, std::uint64_t seed);

/// Mean and standard error of a stored sample of revenues.
MonteCarloEstimate summarize(std::span<const double> revenues);

}  // namespace bundle_lab
