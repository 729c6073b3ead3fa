#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "bundle_lab/bundle_mechanism.hpp"
#include "bundle_lab/monte_carlo.hpp"
#include "bundle_lab/single_pricing.hpp"
#include "bundle_lab/valuation.hpp"

namespace bundle_lab {

inline constexpr double kDefaultPairTolerance = 1e-7;

struct PairRevenueBreakdown {
  double total = 0.0;
  double bundle_part = 0.0;   ///< b * P[bundle accepted]
  double solo_part_1 = 0.0;   ///< a_1 * P[no bundle, customer 1 buys alone]
  double solo_part_2 = 0.0;
  double accept_probability = 0.0;
};

/// Half-open rectangle [lo1, hi1) x [lo2, hi2) of valuation space. Bounds may
/// be +infinity.
struct ValuationRect {
  double lo1 = 0.0;
  double hi1 = std::numeric_limits<double>::infinity();
  double lo2 = 0.0;
  double hi2 = std::numeric_limits<double>::infinity();
};

/// Exact expected revenue of a two-customer offer.
///
/// Revenue is piecewise constant in (V_1, V_2). Conditioning on V_1 the
/// acceptance and solo-purchase sets in V_2 are intervals with closed-form
/// probabilities, so only a one-dimensional integral over V_1 remains. It is
/// computed by adaptive Simpson with every kink of the integrand passed as a
/// breakpoint. Throws std::invalid_argument unless offer has two entries and
/// tol > 0.
PairRevenueBreakdown pair_expected_revenue_exact(const ValuationDistribution& d1,
                                                 const ValuationDistribution& d2,
                                                 const BundleOffer& offer,
                                                 double tol = kDefaultPairTolerance);

/// Same, restricted to the event (V_1, V_2) in `region` (contributions outside
/// are dropped; probabilities are unconditional).
PairRevenueBreakdown pair_expected_revenue_exact(const ValuationDistribution& d1,
                                                 const ValuationDistribution& d2,
                                                 const BundleOffer& offer,
                                                 const ValuationRect& region, double tol);

/// Expected revenue of separate sales at p1 and p2, restricted to `region`.
double singles_revenue_on(const ValuationDistribution& d1, const ValuationDistribution& d2,
                          double p1, double p2, const ValuationRect& region);

/// Seeded Monte Carlo counterpart of pair_expected_revenue_exact. Requires
/// n_samples >= 1000.
MonteCarloEstimate pair_expected_revenue_mc(const ValuationDistribution& d1,
                                            const ValuationDistribution& d2,
                                            const BundleOffer& offer, std::size_t n_samples,
                                            std::uint64_t seed);

/// a = (p1 + eps, p2), b = p1 + p2.
BundleOffer epsilon_offer(double p1, double p2, double eps);

enum class RegionLabel { A1, A2, A3, A4, A5 };

std::string_view to_string(RegionLabel label) noexcept;

/// Partition of the quadrant used to compare the eps-offer with separate
/// sales at (p1, p2):
///   A1 = [p1, inf) x [p2, inf)          A2 = [0, inf) x [0, p2 - eps)
///   A3 = [0, p1) x [p2 - eps, inf)      A4 = [p1, p1 + eps) x [p2 - eps, p2)
///   A5 = [p1 + eps, inf) x [p2 - eps, p2)
/// Requires eps > 0 and p2 - eps >= 0.
RegionLabel classify_region(double v1, double v2, double p1, double p2, double eps);
ValuationRect region_rect(RegionLabel label, double p1, double p2, double eps);
double region_probability(const ValuationDistribution& d1, const ValuationDistribution& d2,
                          RegionLabel label, double p1, double p2, double eps);

/// V_1 + V_2 >= p1 + p2, V_1 >= p1 and V_2 >= p2 - eps: acceptance of the
/// eps-offer written out by hand.
bool bundle_accept_condition_pair(double v1, double v2, double p1, double p2, double eps);

struct EpsilonRow {
  double eps = 0.0;
  double revenue = 0.0;
  double improvement = 0.0;  ///< revenue minus the separate-sales optimum
};

struct Thm1Report {
  SinglePriceSolution single_1;
  SinglePriceSolution single_2;
  double singles_revenue = 0.0;
  std::vector<EpsilonRow> rows;
  double refined_eps = 0.0;      ///< golden-section optimum over (0, p2*)
  double refined_revenue = 0.0;
  double improvement_tolerance = 1e-6;
  bool verified = false;         ///< some grid eps improves by more than the tolerance
};

inline constexpr double kDefaultEpsGrid[] = {0.01, 0.02, 0.05, 0.1, 0.2};

/// Evaluates the eps-offer built on both customers' optimal single prices for
/// every eps in the grid. Every eps must satisfy 0 < eps < p2*.
Thm1Report verify_thm1(const ValuationDistribution& d1, const ValuationDistribution& d2,
                       std::span<const double> eps_grid, double tol = kDefaultPairTolerance);

enum class PairSearchMode { full, pure_bundle };

struct PairOptimum {
  BundleOffer offer;
  double revenue = 0.0;
};

/// Deterministic search for the revenue-maximizing two-customer offer.
///
/// full: 32^3 grid over [0,M1] x [0,M2] x [0,M1+M2] plus NO_SALE variants of
/// each a_i, plus the separate-sales reduction (a = p*, b = p1* + p2*), then
/// `budget` rounds of compass search (step halved each round) from the best
/// point. pure_bundle: a = (NO_SALE, NO_SALE), scan + golden-section on b.
PairOptimum optimize_pair_offer(const ValuationDistribution& d1, const ValuationDistribution& d2,
                                int budget, PairSearchMode mode = PairSearchMode::full,
                                double tol = kDefaultPairTolerance);

}  // namespace bundle_lab
