#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check: integration is plain composite Simpson on a fixed
// grid, inversion is bisection on the CDF, and the split search enumerates
// candidate payments directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Composite Simpson with `intervals` (even) equal panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

struct GridMax {
  double argmax;
  double value;
};

/// Exhaustive evaluation on `points` equally spaced points in [lo, hi].
inline GridMax grid_max(const std::function<double(double)>& f, double lo, double hi, int points) {
  GridMax best{lo, f(lo)};
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double y = f(x);
    if (y > best.value) best = {x, y};
  }
  return best;
}

/// Refines a grid maximum by ternary search inside the neighbouring cells.
inline GridMax grid_then_ternary_max(const std::function<double(double)>& f, double lo, double hi,
                                     int points) {
  const GridMax g = grid_max(f, lo, hi, points);
  const double cell = (hi - lo) / (points - 1);
  double a = std::max(lo, g.argmax - cell);
  double b = std::min(hi, g.argmax + cell);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// x with cdf(x) = u by bisection on [lo, hi] to absolute tolerance tol.
inline double bisect_inverse(const std::function<double(double)>& cdf, double u, double lo, double hi,
                             double tol = 1e-12) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Brute-force feasibility of a payment split, everything in integer cents.
///
/// Looks for P_1..P_n on the 0.01 grid, each in [-200, +inf) cents, with
/// sum P_i = bundle and P_i <= valuation_i and P_i <= price_i (price < 0
/// meaning "no individual price"). The last payment is the remainder; every
/// other payment is enumerated from its largest admissible value downward,
/// and a branch is abandoned once the remainder already exceeds what the
/// remaining customers can absorb.
class SplitSearch {
 public:
  static constexpr int kLowest = -200;

  SplitSearch(std::vector<int> valuations, std::vector<int> prices)
      : valuations_(std::move(valuations)), prices_(std::move(prices)) {}

  bool feasible(int bundle) const { return search(0, bundle); }

 private:
  bool admissible(std::size_t i, int payment) const {
    if (payment < kLowest) return false;
    if (payment > valuations_[i]) return false;
    if (prices_[i] >= 0 && payment > prices_[i]) return false;
    return true;
  }

  int largest_admissible(std::size_t i) const {
    int top = valuations_[i];
    if (prices_[i] >= 0) top = std::min(top, prices_[i]);
    return top;
  }

  bool search(std::size_t i, int remaining) const {
    const std::size_t n = valuations_.size();
    if (i + 1 == n) return admissible(i, remaining);
    // The customers after i can take at most this much in total.
    int rest_cap = 0;
    for (std::size_t k = i + 1; k < n; ++k) rest_cap += largest_admissible(k);
    for (int p = largest_admissible(i); p >= kLowest; --p) {
      if (!admissible(i, p)) continue;
      if (remaining - p > rest_cap) break;  // lowering p only raises the remainder
      if (search(i + 1, remaining - p)) return true;
    }
    return false;
  }

  std::vector<int> valuations_;
  std::vector<int> prices_;
};

}  // namespace oracle
