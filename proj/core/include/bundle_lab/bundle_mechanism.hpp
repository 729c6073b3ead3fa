#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bundle_lab {

/// Price at which one customer may buy its item alone, or NO_SALE when the
/// item is only available through the bundle (an infinite individual price).
class ItemPrice {
 public:
  constexpr ItemPrice() = default;  // NO_SALE
  static constexpr ItemPrice no_sale() { return ItemPrice(); }
  static ItemPrice finite(double amount);

  constexpr bool is_no_sale() const noexcept { return !amount_.has_value(); }
  constexpr bool is_finite() const noexcept { return amount_.has_value(); }
  /// Precondition: is_finite().
  constexpr double amount() const { return *amount_; }

  bool operator==(const ItemPrice&) const = default;

 private:
  explicit constexpr ItemPrice(double amount) : amount_(amount) {}
  std::optional<double> amount_;
};

inline constexpr ItemPrice kNoSale = ItemPrice::no_sale();

/// Bundle offer: individual prices a_1..a_n and the joint bundle price b.
struct BundleOffer {
  std::vector<ItemPrice> individual_prices;
  double bundle_price = 0.0;

  std::size_t size() const noexcept { return individual_prices.size(); }
  bool operator==(const BundleOffer&) const = default;
};

/// Checks n >= 1 and b >= 0 (finite prices are nonnegative by construction).
void validate_offer(const BundleOffer& offer);

/// Pure bundle of n customers at price b: no item sold individually.
BundleOffer pure_bundle_offer(std::size_t n, double bundle_price);

/// Realized valuations V_1..V_n of one auction instance.
struct ValuationProfile {
  std::vector<double> valuations;
  std::size_t size() const noexcept { return valuations.size(); }
};

struct Outcome {
  bool bundle_accepted = false;
  std::vector<bool> receives;
  std::vector<double> payments;
  double seller_revenue = 0.0;
};

class MechanismError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// min(V_i, a_i); V_i itself when the item is not sold individually.
double capped_value(double valuation, ItemPrice price) noexcept;

/// The group buys the bundle iff some split P with sum P_i = b, P_i <= V_i and
/// P_i <= a_i exists. Since no lower bound is placed on P_i this is exactly
/// sum_i min(V_i, a_i) >= b.
bool group_rational_accepts(const BundleOffer& offer, const ValuationProfile& profile);

/// Equal-slack split: P_i = min(V_i, a_i) - S/n with S = sum min(V_i, a_i) - b.
/// Empty when the group would not accept.
std::optional<std::vector<double>> witness_split(const BundleOffer& offer,
                                                 const ValuationProfile& profile);

/// Outcome of one instance. Bundle first; otherwise each customer with a
/// finite a_i <= V_i buys alone at a_i. Ties resolve toward purchase.
Outcome resolve_outcome(const BundleOffer& offer, const ValuationProfile& profile);

/// Seller revenue of resolve_outcome without building the Outcome. Hot path
/// of the Monte Carlo estimators; no length checks.
double realized_revenue(const BundleOffer& offer, std::span<const double> valuations) noexcept;

}  // namespace bundle_lab
