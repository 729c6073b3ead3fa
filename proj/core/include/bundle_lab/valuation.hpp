#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bundle_lab/random.hpp"

namespace bundle_lab {

class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Valuation distribution on [0, M] with a strictly positive, continuous,
/// piecewise-linear density.
///
/// The density is given by its values at ascending knots 0 = x_0 < ... < x_K = M
/// and interpolated linearly in between. CDF, mean and quantile are evaluated
/// in closed form (the CDF is piecewise quadratic). Instances are immutable.
class ValuationDistribution {
 public:
  double upper_bound() const noexcept { return knots_.back(); }
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> densities() const noexcept { return densities_; }

  /// Factor the caller's densities were multiplied by to integrate to one.
  double normalization_factor() const noexcept { return normalization_factor_; }

  /// 0 outside [0, M].
  double pdf(double v) const noexcept;
  /// 0 below 0, 1 above M.
  double cdf(double v) const noexcept;
  /// P[lo <= V < hi] for lo <= hi (0 otherwise).
  double probability(double lo, double hi) const noexcept;
  double mean() const noexcept { return mean_; }

  /// Inverse CDF for u in [0, 1].
  double quantile(double u) const noexcept;

  bool operator==(const ValuationDistribution&) const = default;

 private:
  friend ValuationDistribution make_piecewise_linear(std::vector<double>, std::vector<double>);

  ValuationDistribution() = default;
  std::size_t segment_of(double v) const noexcept;

  std::vector<double> knots_;
  std::vector<double> densities_;
  std::vector<double> cdf_at_knots_;
  double mean_ = 0.0;
  double normalization_factor_ = 1.0;
};

/// Uniform density 1/M on [0, M]. Throws DistributionError unless M > 0.
ValuationDistribution make_uniform(double upper_bound);

/// Piecewise-linear density through (knots[k], densities[k]), rescaled to
/// integrate to one. Knots must start at 0, be strictly ascending and end at
/// M > 0; every density must be strictly positive.
ValuationDistribution make_piecewise_linear(std::vector<double> knots,
                                            std::vector<double> densities);

/// Inverse-transform draw: one uniform from `rng`, mapped through quantile().
double sample_one(const ValuationDistribution& dist, Rng& rng) noexcept;

struct SmoothnessReport {
  bool passes = false;
  double min_density = 0.0;
  double max_density = 0.0;
  double delta_used = 0.0;
  std::vector<std::string> violations;
};

/// Checks the boundedness/smoothness hypotheses: bounded support [0, M], a
/// density, and delta < f(p) < 1/delta on [0, M]. For a piecewise-linear
/// density the extreme values sit on knots, so the knot values decide.
/// Throws DistributionError unless 0 < delta < 1.
SmoothnessReport validate_smoothness(const ValuationDistribution& dist, double delta);

}  // namespace bundle_lab
