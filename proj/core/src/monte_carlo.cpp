#include "bundle_lab/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>

#include "bundle_lab/parallel.hpp"
#include "bundle_lab/random.hpp"

namespace bundle_lab {

namespace {

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double accepted = 0.0;

  void push(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  // Chan et al. pairwise combination.
  void merge(const Moments& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const double d = other.mean - mean;
    mean += d * other.count / total;
    m2 += other.m2 + d * d * count * other.count / total;
    count = total;
    accepted += other.accepted;
  }
};

std::size_t batch_count(std::size_t n_samples) {
  return (n_samples + kMonteCarloBatch - 1) / kMonteCarloBatch;
}

template <class PerSample>
void for_each_batch_sample(std::span<const ValuationDistribution> dists, std::size_t n_samples,
                           std::uint64_t seed, std::size_t batch, std::vector<double>& buffer,
                           PerSample&& per_sample) {
  Rng rng = Rng::substream(seed, batch);
  const std::size_t first = batch * kMonteCarloBatch;
  const std::size_t last = std::min(n_samples, first + kMonteCarloBatch);
  buffer.resize(dists.size());
  for (std::size_t s = first; s < last; ++s) {
    for (std::size_t i = 0; i < dists.size(); ++i) buffer[i] = sample_one(dists[i], rng);
    per_sample(s, std::span<const double>(buffer));
  }
}

}  // namespace

MonteCarloEstimate expected_revenue_mc(std::span<const ValuationDistribution> dists,
                                       const BundleOffer& offer, std::size_t n_samples,
                                       std::uint64_t seed) {
  validate_offer(offer);
  if (offer.size() != dists.size())
    throw std::invalid_argument("offer length does not match the number of distributions");
  if (n_samples == 0) throw std::invalid_argument("need at least one Monte Carlo sample");

  const std::size_t batches = batch_count(n_samples);
  std::vector<Moments> partial(batches);
  parallel_for(batches, [&](std::size_t b) {
    std::vector<double> buffer;
    Moments m;
    for_each_batch_sample(dists, n_samples, seed, b, buffer,
                          [&](std::size_t, std::span<const double> v) {
                            const double revenue = realized_revenue(offer, v);
                            double capped = 0.0;
                            for (std::size_t i = 0; i < v.size(); ++i)
                              capped += capped_value(v[i], offer.individual_prices[i]);
                            if (capped >= offer.bundle_price) m.accepted += 1.0;
                            m.push(revenue);
                          });
    partial[b] = m;
  });

  Moments total;
  for (const Moments& m : partial) total.merge(m);
  MonteCarloEstimate out;
  out.samples = n_samples;
  out.estimate = total.mean;
  out.accept_fraction = total.accepted / total.count;
  out.std_error = total.count > 1.0 ? std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  return out;
}

std::vector<double> sample_profiles(std::span<const ValuationDistribution> dists,
                                    std::size_t n_samples, std::uint64_t seed) {
  const std::size_t n = dists.size();
  std::vector<double> out(n_samples * n);
  parallel_for(batch_count(n_samples), [&](std::size_t b) {
    std::vector<double> buffer;
    for_each_batch_sample(dists, n_samples, seed, b, buffer,
                          [&](std::size_t s, std::span<const double> v) {
                            std::copy(v.begin(), v.end(), out.begin() + s * n);
                          });
  });
  return out;
}

std::vector<double> sample_valuation_totals(std::span<const ValuationDistribution> dists,
                                            std::size_t n_samples, std::uint64_t seed) {
  std::vector<double> out(n_samples);
  parallel_for(batch_count(n_samples), [&](std::size_t b) {
    std::vector<double> buffer;
    for_each_batch_sample(dists, n_samples, seed, b, buffer,
                          [&](std::size_t s, std::span<const double> v) {
                            double sum = 0.0;
                            for (double x : v) sum += x;
                            out[s] = sum;
                          });
  });
  return out;
}

MonteCarloEstimate summarize(std::span<const double> revenues) {
  Moments m;
  for (double r : revenues) m.push(r);
  MonteCarloEstimate out;
  out.samples = revenues.size();
  out.estimate = m.mean;
  out.std_error = m.count > 1.0 ? std::sqrt(m.m2 / (m.count - 1.0) / m.count) : 0.0;
  return out;
}

}  // namespace bundle_lab
