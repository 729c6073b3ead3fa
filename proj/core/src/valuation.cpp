#include "bundle_lab/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bundle_lab {

namespace {

// Integral of the linear density over [x0, x0 + t] within one segment with
// left value f0 and slope s.
double segment_mass(double f0, double slope, double t) noexcept {
  return t * (f0 + 0.5 * slope * t);
}

}  // namespace

ValuationDistribution make_uniform(double upper_bound) {
  if (!(upper_bound > 0.0) || !std::isfinite(upper_bound))
    throw DistributionError("uniform distribution needs a positive finite upper bound M");
  return make_piecewise_linear({0.0, upper_bound}, {1.0 / upper_bound, 1.0 / upper_bound});
}

ValuationDistribution make_piecewise_linear(std::vector<double> knots,
                                            std::vector<double> densities) {
  if (knots.size() < 2)
    throw DistributionError("piecewise-linear distribution needs at least two knots");
  if (knots.size() != densities.size())
    throw DistributionError("knots and densities must have the same length");
  if (knots.front() != 0.0) throw DistributionError("first knot must be 0");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!std::isfinite(knots[k])) throw DistributionError("knots must be finite");
    if (k > 0 && !(knots[k] > knots[k - 1]))
      throw DistributionError("knots must be strictly ascending");
  }
  for (double f : densities)
    if (!(f > 0.0) || !std::isfinite(f))
      throw DistributionError("densities must be strictly positive and finite");

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    total += 0.5 * (knots[k + 1] - knots[k]) * (densities[k] + densities[k + 1]);

  ValuationDistribution dist;
  dist.normalization_factor_ = 1.0 / total;
  for (double& f : densities) f /= total;

  dist.cdf_at_knots_.assign(knots.size(), 0.0);
  double first_moment = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double h = knots[k + 1] - knots[k];
    const double f0 = densities[k];
    const double f1 = densities[k + 1];
    dist.cdf_at_knots_[k + 1] = dist.cdf_at_knots_[k] + 0.5 * h * (f0 + f1);
    // Exact first moment of the linear piece: h * (x0 (f0+f1)/2 + h (f0 + 2 f1)/6).
    first_moment += h * (knots[k] * 0.5 * (f0 + f1) + h * (f0 + 2.0 * f1) / 6.0);
  }
  // Absorb rounding so that cdf(M) is exactly 1.
  const double last = dist.cdf_at_knots_.back();
  for (double& c : dist.cdf_at_knots_) c /= last;
  dist.mean_ = first_moment / last;
  dist.knots_ = std::move(knots);
  dist.densities_ = std::move(densities);
  return dist;
}

std::size_t ValuationDistribution::segment_of(double v) const noexcept {
  // Index k with knots_[k] <= v < knots_[k+1], clamped to the last segment.
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), v);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots_.begin() - 1, 0));
  return std::min(k, knots_.size() - 2);
}

double ValuationDistribution::pdf(double v) const noexcept {
  if (v < 0.0 || v > upper_bound()) return 0.0;
  const std::size_t k = segment_of(v);
  const double h = knots_[k + 1] - knots_[k];
  const double w = (v - knots_[k]) / h;
  return densities_[k] + w * (densities_[k + 1] - densities_[k]);
}

double ValuationDistribution::cdf(double v) const noexcept {
  if (v <= 0.0) return 0.0;
  if (v >= upper_bound()) return 1.0;
  const std::size_t k = segment_of(v);
  const double h = knots_[k + 1] - knots_[k];
  const double slope = (densities_[k + 1] - densities_[k]) / h;
  const double c = cdf_at_knots_[k] + segment_mass(densities_[k], slope, v - knots_[k]);
  return std::clamp(c, 0.0, 1.0);
}

double ValuationDistribution::probability(double lo, double hi) const noexcept {
  if (!(hi > lo)) return 0.0;
  return std::max(0.0, cdf(hi) - cdf(lo));
}

double ValuationDistribution::quantile(double u) const noexcept {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return upper_bound();
  const auto it = std::upper_bound(cdf_at_knots_.begin(), cdf_at_knots_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cdf_at_knots_.begin()) - 1;
  k = std::min(k, knots_.size() - 2);
  const double h = knots_[k + 1] - knots_[k];
  const double f0 = densities_[k];
  const double slope = (densities_[k + 1] - f0) / h;
  const double r = u - cdf_at_knots_[k];
  // Root of (slope/2) t^2 + f0 t - r = 0 in the cancellation-free form;
  // f0 > 0 keeps the denominator positive.
  const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * r);
  const double t = 2.0 * r / (f0 + std::sqrt(disc));
  return std::clamp(knots_[k] + t, knots_[k], knots_[k + 1]);
}

double sample_one(const ValuationDistribution& dist, Rng& rng) noexcept {
  return dist.quantile(rng.uniform01());
}

SmoothnessReport validate_smoothness(const ValuationDistribution& dist, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw DistributionError("delta must lie strictly between 0 and 1");

  SmoothnessReport report;
  report.delta_used = delta;
  const auto dens = dist.densities();
  report.min_density = *std::min_element(dens.begin(), dens.end());
  report.max_density = *std::max_element(dens.begin(), dens.end());

  if (!(dist.upper_bound() > 0.0) || !std::isfinite(dist.upper_bound()))
    report.violations.emplace_back("support is not a bounded interval [0, M] with M > 0");
  if (!(report.min_density > delta)) {
    std::ostringstream msg;
    msg << "min density " << report.min_density << " is not above delta " << delta;
    report.violations.push_back(msg.str());
  }
  if (!(report.max_density < 1.0 / delta)) {
    std::ostringstream msg;
    msg << "max density " << report.max_density << " is not below 1/delta " << 1.0 / delta;
    report.violations.push_back(msg.str());
  }
  report.passes = report.violations.empty();
  return report;
}

}  // namespace bundle_lab
