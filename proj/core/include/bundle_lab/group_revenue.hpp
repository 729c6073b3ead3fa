#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bundle_lab/bundle_mechanism.hpp"
#include "bundle_lab/monte_carlo.hpp"
#include "bundle_lab/valuation.hpp"

namespace bundle_lab {

/// Raised when the large-bundle price mu - 2M sqrt(n ln n) is not positive,
/// i.e. the construction says nothing at this n.
class VacuousBoundError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// sum_i E[V_i].
double total_mean(std::span<const ValuationDistribution> dists);

/// max_i M_i.
double common_upper_bound(std::span<const ValuationDistribution> dists);

/// Pure bundle of all customers at b = mu - 2M sqrt(n ln n), M = max_i M_i.
/// Requires n >= 2; throws VacuousBoundError when b <= 0.
BundleOffer thm2_offer(std::span<const ValuationDistribution> dists);

/// Bernstein tail bound exp(-(t^2/2) / (n M^2 + M t / 3)) for a sum of n
/// centred variables bounded by M, clamped to at most 1.
double bernstein_upper_bound(std::size_t n, double upper_bound, double t);

/// (1 - 1/n) (mu - 2M sqrt(n ln n)); may be negative.
double thm2_revenue_lower_bound(std::size_t n, double mu, double upper_bound);

/// Requires n_samples >= 1000.
MonteCarloEstimate group_expected_revenue_mc(std::span<const ValuationDistribution> dists,
                                             const BundleOffer& offer, std::size_t n_samples,
                                             std::uint64_t seed);

enum class GroupSearchMode { pure_bundle, full };

struct GroupOptimum {
  BundleOffer offer;
  double revenue = 0.0;    ///< common-random-number estimate at the optimum
  double std_error = 0.0;
};

/// Offer search on a fixed set of sampled profiles (common random numbers:
/// every candidate is scored on the same draws, so comparisons carry no
/// sampling noise).
///
/// pure_bundle: scan + golden-section on b in [0, sum M_i].
/// full: starts from the pure-bundle optimum and runs `budget` coordinate
/// descent sweeps over a_1..a_n (each tried as NO_SALE and over [0, M_i])
/// and b.
GroupOptimum optimize_group_offer(std::span<const ValuationDistribution> dists,
                                  GroupSearchMode mode, int budget, std::size_t n_samples,
                                  std::uint64_t seed);

/// Pure-bundle revenue b * P[sum V >= b] on presampled totals, as a function
/// of b. Totals are sorted on construction.
class PureBundleCurve {
 public:
  explicit PureBundleCurve(std::vector<double> totals);
  double revenue(double bundle_price) const;
  /// Standard error of the per-sample revenue b * 1{sum V >= b}.
  double std_error(double bundle_price) const;
  std::size_t samples() const noexcept { return sorted_.size(); }

 private:
  double accept_fraction(double bundle_price) const;
  std::vector<double> sorted_;
};

struct Thm2Report {
  std::size_t n = 0;
  double mu = 0.0;
  double upper_bound = 0.0;  ///< M
  double bundle_price = 0.0;
  double accept_prob_estimate = 0.0;
  double revenue_estimate = 0.0;
  double revenue_std_error = 0.0;
  double lower_bound = 0.0;
  double bernstein_bound = 0.0;
  bool lower_bound_holds = false;  ///< estimate + 4 SE >= lower_bound
  bool upper_bound_holds = false;  ///< estimate - 4 SE <= mu
  bool passed() const noexcept { return lower_bound_holds && upper_bound_holds; }
};

/// For each n: n i.i.d. copies of `dist_template`, the large-bundle offer,
/// its Monte Carlo revenue and both bounds. Rows come back in the order of
/// n_list. Propagates VacuousBoundError.
std::vector<Thm2Report> verify_thm2(const ValuationDistribution& dist_template,
                                    std::span<const std::size_t> n_list, std::size_t n_samples,
                                    std::uint64_t seed);

}  // namespace bundle_lab
