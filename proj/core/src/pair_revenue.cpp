#include "bundle_lab/pair_revenue.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bundle_lab/parallel.hpp"
#include "bundle_lab/quadrature.hpp"
#include "bundle_lab/scalar_search.hpp"

namespace bundle_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 32;

void require_pair(const BundleOffer& offer, double tol) {
  if (offer.size() != 2) throw std::invalid_argument("pair revenue needs an offer for exactly two customers");
  validate_offer(offer);
  if (!(tol > 0.0)) throw std::invalid_argument("integration tolerance must be positive");
}

void require_region_params(double p2, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(p2 - eps >= 0.0)) throw std::invalid_argument("eps must not exceed p2");
}

}  // namespace

PairRevenueBreakdown pair_expected_revenue_exact(const ValuationDistribution& d1,
                                                 const ValuationDistribution& d2,
                                                 const BundleOffer& offer, double tol) {
  return pair_expected_revenue_exact(d1, d2, offer, ValuationRect{}, tol);
}

PairRevenueBreakdown pair_expected_revenue_exact(const ValuationDistribution& d1,
                                                 const ValuationDistribution& d2,
                                                 const BundleOffer& offer,
                                                 const ValuationRect& region, double tol) {
  require_pair(offer, tol);
  const ItemPrice a1 = offer.individual_prices[0];
  const ItemPrice a2 = offer.individual_prices[1];
  const double b = offer.bundle_price;

  // Masses over V_2 in [lo2, hi2) given V_1 = v1: {accept, customer 1 alone,
  // customer 2 alone}, weighted by f_1(v1).
  auto integrand = [&](double v1) -> std::array<double, 3> {
    const double c1 = capped_value(v1, a1);
    const double x = b - c1;
    double accept_from;
    if (x <= 0.0)
      accept_from = 0.0;
    else if (a2.is_finite() && x > a2.amount())
      accept_from = kInf;
    else
      accept_from = x;

    const double reject_hi = std::min(region.hi2, accept_from);
    const double accept = d2.probability(std::max(region.lo2, accept_from), region.hi2);
    const double solo1 =
        a1.is_finite() && v1 >= a1.amount() ? d2.probability(region.lo2, reject_hi) : 0.0;
    const double solo2 =
        a2.is_finite() ? d2.probability(std::max(region.lo2, a2.amount()), reject_hi) : 0.0;
    const double w = d1.pdf(v1);
    return {w * accept, w * solo1, w * solo2};
  };

  const double lo = std::max(region.lo1, 0.0);
  const double hi = std::min(region.hi1, d1.upper_bound());

  std::vector<double> cuts(d1.knots().begin(), d1.knots().end());
  if (a1.is_finite()) cuts.push_back(a1.amount());
  cuts.push_back(b);
  for (double k : d2.knots()) cuts.push_back(b - k);
  if (a2.is_finite()) cuts.push_back(b - a2.amount());
  for (double y : {region.lo2, region.hi2})
    if (std::isfinite(y)) cuts.push_back(b - y);

  AdaptiveSimpson<3> quad(tol);
  const auto mass = quad.integrate(integrand, lo, hi, cuts);

  PairRevenueBreakdown out;
  out.accept_probability = std::clamp(mass[0], 0.0, 1.0);
  out.bundle_part = b * mass[0];
  out.solo_part_1 = a1.is_finite() ? a1.amount() * mass[1] : 0.0;
  out.solo_part_2 = a2.is_finite() ? a2.amount() * mass[2] : 0.0;
  out.total = out.bundle_part + out.solo_part_1 + out.solo_part_2;
  return out;
}

double singles_revenue_on(const ValuationDistribution& d1, const ValuationDistribution& d2,
                          double p1, double p2, const ValuationRect& region) {
  const double buy1 = d1.probability(std::max(region.lo1, p1), region.hi1);
  const double buy2 = d2.probability(std::max(region.lo2, p2), region.hi2);
  return p1 * buy1 * d2.probability(region.lo2, region.hi2) +
         p2 * buy2 * d1.probability(region.lo1, region.hi1);
}

MonteCarloEstimate pair_expected_revenue_mc(const ValuationDistribution& d1,
                                            const ValuationDistribution& d2,
                                            const BundleOffer& offer, std::size_t n_samples,
                                            std::uint64_t seed) {
  if (offer.size() != 2) throw std::invalid_argument("pair revenue needs an offer for exactly two customers");
  if (n_samples < 1000) throw std::invalid_argument("pair Monte Carlo needs at least 1000 samples");
  const std::array<ValuationDistribution, 2> dists{d1, d2};
  return expected_revenue_mc(dists, offer, n_samples, seed);
}

BundleOffer epsilon_offer(double p1, double p2, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  return BundleOffer{{ItemPrice::finite(p1 + eps), ItemPrice::finite(p2)}, p1 + p2};
}

std::string_view to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::A1: return "A1";
    case RegionLabel::A2: return "A2";
    case RegionLabel::A3: return "A3";
    case RegionLabel::A4: return "A4";
    case RegionLabel::A5: return "A5";
  }
  return "?";
}

RegionLabel classify_region(double v1, double v2, double p1, double p2, double eps) {
  require_region_params(p2, eps);
  if (v2 < p2 - eps) return RegionLabel::A2;
  if (v1 < p1) return RegionLabel::A3;
  if (v2 >= p2) return RegionLabel::A1;
  return v1 < p1 + eps ? RegionLabel::A4 : RegionLabel::A5;
}

ValuationRect region_rect(RegionLabel label, double p1, double p2, double eps) {
  require_region_params(p2, eps);
  switch (label) {
    case RegionLabel::A1: return {p1, kInf, p2, kInf};
    case RegionLabel::A2: return {0.0, kInf, 0.0, p2 - eps};
    case RegionLabel::A3: return {0.0, p1, p2 - eps, kInf};
    case RegionLabel::A4: return {p1, p1 + eps, p2 - eps, p2};
    case RegionLabel::A5: return {p1 + eps, kInf, p2 - eps, p2};
  }
  throw std::invalid_argument("unknown region label");
}

double region_probability(const ValuationDistribution& d1, const ValuationDistribution& d2,
                          RegionLabel label, double p1, double p2, double eps) {
  const ValuationRect r = region_rect(label, p1, p2, eps);
  return d1.probability(r.lo1, r.hi1) * d2.probability(r.lo2, r.hi2);
}

bool bundle_accept_condition_pair(double v1, double v2, double p1, double p2, double eps) {
  require_region_params(p2, eps);
  return v1 + v2 >= p1 + p2 && v1 >= p1 && v2 >= p2 - eps;
}

Thm1Report verify_thm1(const ValuationDistribution& d1, const ValuationDistribution& d2,
                       std::span<const double> eps_grid, double tol) {
  Thm1Report report;
  report.single_1 = optimal_single_price(d1);
  report.single_2 = optimal_single_price(d2);
  const double p1 = report.single_1.price;
  const double p2 = report.single_2.price;
  report.singles_revenue = report.single_1.expected_revenue + report.single_2.expected_revenue;

  if (eps_grid.empty()) throw std::invalid_argument("eps grid must not be empty");
  for (double eps : eps_grid)
    if (!(eps > 0.0 && eps < p2))
      throw std::invalid_argument("every eps must lie strictly between 0 and the optimal price p2");

  for (double eps : eps_grid) {
    const double revenue = pair_expected_revenue_exact(d1, d2, epsilon_offer(p1, p2, eps), tol).total;
    const double gain = revenue - report.singles_revenue;
    report.rows.push_back({eps, revenue, gain});
    if (gain > report.improvement_tolerance) report.verified = true;
  }

  const auto refined = golden_section_max(
      [&](double eps) { return pair_expected_revenue_exact(d1, d2, epsilon_offer(p1, p2, eps), tol).total; },
      0.0, p2, 1e-6);
  report.refined_eps = refined.argmax;
  report.refined_revenue = refined.value;
  return report;
}

namespace {

struct PairPoint {
  ItemPrice a1;
  ItemPrice a2;
  double b = 0.0;

  BundleOffer offer() const { return BundleOffer{{a1, a2}, b}; }
};

double grid_value(int i, int count, double upper) {
  return i + 1 == count ? upper : upper * i / (count - 1);
}

}  // namespace

PairOptimum optimize_pair_offer(const ValuationDistribution& d1, const ValuationDistribution& d2,
                                int budget, PairSearchMode mode, double tol) {
  if (budget < 1) throw std::invalid_argument("optimizer budget must be at least one round");
  const double m1 = d1.upper_bound();
  const double m2 = d2.upper_bound();
  auto revenue = [&](const BundleOffer& offer) {
    return pair_expected_revenue_exact(d1, d2, offer, tol).total;
  };

  if (mode == PairSearchMode::pure_bundle) {
    const auto best = scan_then_golden_max(
        [&](double b) { return revenue(pure_bundle_offer(2, b)); }, 0.0, m1 + m2, 65, 1e-9);
    return {pure_bundle_offer(2, best.argmax), best.value};
  }

  // Candidate list: grid (index kGridPoints stands for NO_SALE), then the
  // separate-sales reduction.
  std::vector<PairPoint> candidates;
  candidates.reserve((kGridPoints + 1) * (kGridPoints + 1) * kGridPoints + 1);
  for (int i = 0; i <= kGridPoints; ++i) {
    const ItemPrice a1 = i == kGridPoints ? kNoSale : ItemPrice::finite(grid_value(i, kGridPoints, m1));
    for (int j = 0; j <= kGridPoints; ++j) {
      const ItemPrice a2 = j == kGridPoints ? kNoSale : ItemPrice::finite(grid_value(j, kGridPoints, m2));
      for (int k = 0; k < kGridPoints; ++k)
        candidates.push_back({a1, a2, grid_value(k, kGridPoints, m1 + m2)});
    }
  }
  const SinglePriceSolution s1 = optimal_single_price(d1);
  const SinglePriceSolution s2 = optimal_single_price(d2);
  candidates.push_back({ItemPrice::finite(s1.price), ItemPrice::finite(s2.price), s1.price + s2.price});

  std::vector<double> values(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t c) { values[c] = revenue(candidates[c].offer()); });

  std::size_t best_index = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c)
    if (values[c] > values[best_index]) best_index = c;
  PairPoint best = candidates[best_index];
  double best_value = values[best_index];

  // Compass search over the finite coordinates. Coordinate 0/1 are a_1/a_2,
  // coordinate 2 is b.
  std::array<double, 3> step{m1 / (kGridPoints - 1), m2 / (kGridPoints - 1),
                             (m1 + m2) / (kGridPoints - 1)};
  const std::array<double, 3> upper{m1, m2, m1 + m2};
  auto coordinate = [](const PairPoint& p, int c) {
    return c == 0 ? p.a1.amount() : c == 1 ? p.a2.amount() : p.b;
  };
  auto with = [](PairPoint p, int c, double x) {
    if (c == 0) p.a1 = ItemPrice::finite(x);
    else if (c == 1) p.a2 = ItemPrice::finite(x);
    else p.b = x;
    return p;
  };

  constexpr int kMaxPollsPerRound = 64;
  for (int round = 0; round < budget; ++round) {
    for (int poll = 0; poll < kMaxPollsPerRound; ++poll) {
      bool improved = false;
      for (int c = 0; c < 3; ++c) {
        if ((c == 0 && best.a1.is_no_sale()) || (c == 1 && best.a2.is_no_sale())) continue;
        for (double dir : {-1.0, 1.0}) {
          const double x = std::clamp(coordinate(best, c) + dir * step[c], 0.0, upper[c]);
          if (x == coordinate(best, c)) continue;
          const PairPoint trial = with(best, c, x);
          const double v = revenue(trial.offer());
          if (v > best_value) {
            best = trial;
            best_value = v;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
    for (double& s : step) s *= 0.5;
  }
  return {best.offer(), best_value};
}

}  // namespace bundle_lab
