#pragma once

#include "bundle_lab/valuation.hpp"

namespace bundle_lab {

/// Optimal take-it-or-leave-it price for one customer.
struct SinglePriceSolution {
  double price = 0.0;
  double expected_revenue = 0.0;
  double fixed_point_residual = 0.0;  ///< |p - (1 - F(p)) / f(p)|
  double derivative_residual = 0.0;   ///< |1 - F(p) - p f(p)|
};

/// p (1 - F(p)). Throws std::invalid_argument for p < 0.
double expected_revenue_single(const ValuationDistribution& dist, double price);

/// d/dp of p (1 - F(p)) = 1 - F(p) - p f(p). Only defined on [0, M].
double revenue_derivative(const ValuationDistribution& dist, double price);

/// Scans the derivative on 2048 intervals of [0, M], bisects every sign
/// change to 1e-10 and keeps the critical point with the highest revenue
/// (smaller price on ties).
SinglePriceSolution optimal_single_price(const ValuationDistribution& dist);

}  // namespace bundle_lab
