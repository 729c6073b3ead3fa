#include "bundle_lab/group_revenue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bundle_lab/scalar_search.hpp"

namespace bundle_lab {

namespace {

constexpr std::size_t kScanPoints = 33;
constexpr double kSearchTolerance = 1e-6;

double large_bundle_margin(std::size_t n, double upper_bound) {
  const double nd = static_cast<double>(n);
  return 2.0 * upper_bound * std::sqrt(nd * std::log(nd));
}

// Mean revenue of `offer` over stored profiles, summed in sample order.
double mean_revenue(const BundleOffer& offer, std::span<const double> profiles, std::size_t n) {
  const std::size_t samples = profiles.size() / n;
  double sum = 0.0;
  for (std::size_t s = 0; s < samples; ++s) sum += realized_revenue(offer, profiles.subspan(s * n, n));
  return sum / static_cast<double>(samples);
}

}  // namespace

double total_mean(std::span<const ValuationDistribution> dists) {
  double mu = 0.0;
  for (const auto& d : dists) mu += d.mean();
  return mu;
}

double common_upper_bound(std::span<const ValuationDistribution> dists) {
  double m = 0.0;
  for (const auto& d : dists) m = std::max(m, d.upper_bound());
  return m;
}

BundleOffer thm2_offer(std::span<const ValuationDistribution> dists) {
  const std::size_t n = dists.size();
  if (n < 2) throw std::invalid_argument("the large-bundle offer needs at least two customers");
  const double mu = total_mean(dists);
  const double b = mu - large_bundle_margin(n, common_upper_bound(dists));
  if (!(b > 0.0)) {
    std::ostringstream msg;
    msg << "large-bundle price mu - 2M sqrt(n ln n) = " << b << " is not positive at n = " << n;
    throw VacuousBoundError(msg.str());
  }
  return pure_bundle_offer(n, b);
}

double bernstein_upper_bound(std::size_t n, double upper_bound, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("deviation t must be nonnegative");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(upper_bound > 0.0)) throw std::invalid_argument("upper bound M must be positive");
  const double variance_bound = static_cast<double>(n) * upper_bound * upper_bound;
  const double exponent = -(0.5 * t * t) / (variance_bound + upper_bound * t / 3.0);
  return std::min(1.0, std::exp(exponent));
}

double thm2_revenue_lower_bound(std::size_t n, double mu, double upper_bound) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const double nd = static_cast<double>(n);
  return (1.0 - 1.0 / nd) * (mu - large_bundle_margin(n, upper_bound));
}

MonteCarloEstimate group_expected_revenue_mc(std::span<const ValuationDistribution> dists,
                                             const BundleOffer& offer, std::size_t n_samples,
                                             std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("group Monte Carlo needs at least 1000 samples");
  return expected_revenue_mc(dists, offer, n_samples, seed);
}

PureBundleCurve::PureBundleCurve(std::vector<double> totals) : sorted_(std::move(totals)) {
  if (sorted_.empty()) throw std::invalid_argument("pure-bundle curve needs samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double PureBundleCurve::accept_fraction(double bundle_price) const {
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), bundle_price);
  return static_cast<double>(sorted_.end() - first) / static_cast<double>(sorted_.size());
}

double PureBundleCurve::revenue(double bundle_price) const {
  return bundle_price * accept_fraction(bundle_price);
}

double PureBundleCurve::std_error(double bundle_price) const {
  const double q = accept_fraction(bundle_price);
  const double n = static_cast<double>(sorted_.size());
  if (n < 2.0) return 0.0;
  // Bernoulli(q) scaled by b, unbiased sample variance.
  return bundle_price * std::sqrt(q * (1.0 - q) * n / (n - 1.0) / n);
}

GroupOptimum optimize_group_offer(std::span<const ValuationDistribution> dists,
                                  GroupSearchMode mode, int budget, std::size_t n_samples,
                                  std::uint64_t seed) {
  const std::size_t n = dists.size();
  if (n == 0) throw std::invalid_argument("need at least one customer");
  if (n_samples < 1000) throw std::invalid_argument("group optimization needs at least 1000 samples");
  if (mode == GroupSearchMode::full && budget < 1)
    throw std::invalid_argument("full search needs at least one sweep");

  double total_upper = 0.0;
  for (const auto& d : dists) total_upper += d.upper_bound();

  const PureBundleCurve curve(sample_valuation_totals(dists, n_samples, seed));
  const ScalarMaximum pure = scan_then_golden_max(
      [&](double b) { return curve.revenue(b); }, 0.0, total_upper, kScanPoints, kSearchTolerance);

  GroupOptimum result{pure_bundle_offer(n, pure.argmax), pure.value, curve.std_error(pure.argmax)};
  if (mode == GroupSearchMode::pure_bundle) return result;

  const std::vector<double> profiles = sample_profiles(dists, n_samples, seed);
  auto score = [&](const BundleOffer& offer) { return mean_revenue(offer, profiles, n); };

  BundleOffer current = result.offer;
  double current_value = score(current);
  for (int sweep = 0; sweep < budget; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      BundleOffer trial = current;
      trial.individual_prices[i] = kNoSale;
      BundleOffer best_trial = trial;
      double best_value = score(trial);
      const ScalarMaximum finite = scan_then_golden_max(
          [&](double a) {
            trial.individual_prices[i] = ItemPrice::finite(a);
            return score(trial);
          },
          0.0, dists[i].upper_bound(), kScanPoints, kSearchTolerance);
      if (finite.value > best_value) {
        best_value = finite.value;
        best_trial.individual_prices[i] = ItemPrice::finite(finite.argmax);
      }
      if (best_value > current_value) {
        current = best_trial;
        current_value = best_value;
        changed = true;
      }
    }
    BundleOffer trial = current;
    const ScalarMaximum bundle = scan_then_golden_max(
        [&](double b) {
          trial.bundle_price = b;
          return score(trial);
        },
        0.0, total_upper, kScanPoints, kSearchTolerance);
    if (bundle.value > current_value) {
      current.bundle_price = bundle.argmax;
      current_value = bundle.value;
      changed = true;
    }
    if (!changed) break;
  }

  std::vector<double> revenues(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s)
    revenues[s] = realized_revenue(current, std::span<const double>(profiles).subspan(s * n, n));
  const MonteCarloEstimate summary = summarize(revenues);
  return {current, current_value, summary.std_error};
}

std::vector<Thm2Report> verify_thm2(const ValuationDistribution& dist_template,
                                    std::span<const std::size_t> n_list, std::size_t n_samples,
                                    std::uint64_t seed) {
  std::vector<Thm2Report> reports;
  reports.reserve(n_list.size());
  for (std::size_t n : n_list) {
    const std::vector<ValuationDistribution> dists(n, dist_template);
    const BundleOffer offer = thm2_offer(dists);
    const MonteCarloEstimate mc = group_expected_revenue_mc(dists, offer, n_samples, seed);

    Thm2Report r;
    r.n = n;
    r.mu = total_mean(dists);
    r.upper_bound = common_upper_bound(dists);
    r.bundle_price = offer.bundle_price;
    r.accept_prob_estimate = mc.accept_fraction;
    r.revenue_estimate = mc.estimate;
    r.revenue_std_error = mc.std_error;
    r.lower_bound = thm2_revenue_lower_bound(n, r.mu, r.upper_bound);
    r.bernstein_bound = bernstein_upper_bound(n, r.upper_bound, large_bundle_margin(n, r.upper_bound));
    r.lower_bound_holds = r.revenue_estimate + 4.0 * r.revenue_std_error >= r.lower_bound;
    r.upper_bound_holds = r.revenue_estimate - 4.0 * r.revenue_std_error <= r.mu;
    reports.push_back(r);
  }
  return reports;
}

}  // namespace bundle_lab
