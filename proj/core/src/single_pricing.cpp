#include "bundle_lab/single_pricing.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bundle_lab {

namespace {

constexpr int kScanIntervals = 2048;
constexpr double kPriceTolerance = 1e-10;

double bisect_root(const ValuationDistribution& dist, double lo, double hi) {
  double f_lo = revenue_derivative(dist, lo);
  while (hi - lo > kPriceTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = revenue_derivative(dist, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double expected_revenue_single(const ValuationDistribution& dist, double price) {
  if (price < 0.0) throw std::invalid_argument("price must be nonnegative");
  return price * (1.0 - dist.cdf(price));
}

double revenue_derivative(const ValuationDistribution& dist, double price) {
  if (price < 0.0 || price > dist.upper_bound())
    throw std::invalid_argument("revenue derivative is only defined on [0, M]");
  return 1.0 - dist.cdf(price) - price * dist.pdf(price);
}

SinglePriceSolution optimal_single_price(const ValuationDistribution& dist) {
  const double upper = dist.upper_bound();
  std::vector<double> grid(kScanIntervals + 1);
  std::vector<double> slope(kScanIntervals + 1);
  for (int i = 0; i <= kScanIntervals; ++i) {
    grid[i] = i == kScanIntervals ? upper : upper * i / kScanIntervals;
    slope[i] = revenue_derivative(dist, grid[i]);
  }

  std::vector<double> critical;
  for (int i = 0; i < kScanIntervals; ++i) {
    if (slope[i] == 0.0) {
      critical.push_back(grid[i]);
    } else if (slope[i + 1] != 0.0 && (slope[i] > 0.0) != (slope[i + 1] > 0.0)) {
      critical.push_back(bisect_root(dist, grid[i], grid[i + 1]));
    }
  }
  if (slope[kScanIntervals] == 0.0) critical.push_back(upper);
  // The derivative is 1 at p = 0 and -M f(M) < 0 at p = M, so a sign change
  // always exists; this guards against a pathological scan only.
  if (critical.empty()) throw std::logic_error("no critical point found for the single price");

  SinglePriceSolution best;
  best.expected_revenue = -1.0;
  for (double p : critical) {
    const double u = expected_revenue_single(dist, p);
    if (u > best.expected_revenue) {
      best.price = p;
      best.expected_revenue = u;
    }
  }
  const double f = dist.pdf(best.price);
  best.fixed_point_residual = std::abs(best.price - (1.0 - dist.cdf(best.price)) / f);
  best.derivative_residual = std::abs(revenue_derivative(dist, best.price));
  return best;
}

}  // namespace bundle_lab
