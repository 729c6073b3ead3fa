#include "bundle_lab/bundle_mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace bundle_lab {

namespace {

void check_lengths(const BundleOffer& offer, const ValuationProfile& profile) {
  if (offer.size() != profile.size())
    throw MechanismError("offer and valuation profile have different lengths");
  validate_offer(offer);
  for (double v : profile.valuations)
    if (!(v >= 0.0)) throw MechanismError("valuations must be nonnegative");
}

double capped_sum(const BundleOffer& offer, std::span<const double> valuations) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < valuations.size(); ++i)
    sum += capped_value(valuations[i], offer.individual_prices[i]);
  return sum;
}

}  // namespace

ItemPrice ItemPrice::finite(double amount) {
  if (!(amount >= 0.0) || !std::isfinite(amount))
    throw MechanismError("individual prices must be finite and nonnegative");
  return ItemPrice(amount);
}

void validate_offer(const BundleOffer& offer) {
  if (offer.individual_prices.empty()) throw MechanismError("offer must cover at least one customer");
  if (!(offer.bundle_price >= 0.0) || !std::isfinite(offer.bundle_price))
    throw MechanismError("bundle price must be finite and nonnegative");
}

BundleOffer pure_bundle_offer(std::size_t n, double bundle_price) {
  return BundleOffer{std::vector<ItemPrice>(n, kNoSale), bundle_price};
}

double capped_value(double valuation, ItemPrice price) noexcept {
  return price.is_no_sale() ? valuation : std::min(valuation, price.amount());
}

bool group_rational_accepts(const BundleOffer& offer, const ValuationProfile& profile) {
  check_lengths(offer, profile);
  return capped_sum(offer, profile.valuations) >= offer.bundle_price;
}

std::optional<std::vector<double>> witness_split(const BundleOffer& offer,
                                                 const ValuationProfile& profile) {
  if (!group_rational_accepts(offer, profile)) return std::nullopt;
  const std::size_t n = profile.size();
  std::vector<double> split(n);
  for (std::size_t i = 0; i < n; ++i)
    split[i] = capped_value(profile.valuations[i], offer.individual_prices[i]);
  const double slack = capped_sum(offer, profile.valuations) - offer.bundle_price;
  const double share = slack / static_cast<double>(n);
  for (double& p : split) p -= share;
  return split;
}

Outcome resolve_outcome(const BundleOffer& offer, const ValuationProfile& profile) {
  check_lengths(offer, profile);
  const std::size_t n = profile.size();
  Outcome out;
  out.receives.assign(n, false);
  out.payments.assign(n, 0.0);

  if (auto split = witness_split(offer, profile)) {
    out.bundle_accepted = true;
    out.receives.assign(n, true);
    out.payments = std::move(*split);
    out.seller_revenue = offer.bundle_price;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const ItemPrice a = offer.individual_prices[i];
    if (a.is_finite() && profile.valuations[i] >= a.amount()) {
      out.receives[i] = true;
      out.payments[i] = a.amount();
      out.seller_revenue += a.amount();
    }
  }
  return out;
}

double realized_revenue(const BundleOffer& offer, std::span<const double> valuations) noexcept {
  if (capped_sum(offer, valuations) >= offer.bundle_price) return offer.bundle_price;
  double revenue = 0.0;
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    const ItemPrice a = offer.individual_prices[i];
    if (a.is_finite() && valuations[i] >= a.amount()) revenue += a.amount();
  }
  return revenue;
}

}  // namespace bundle_lab
