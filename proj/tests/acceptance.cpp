// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Every tolerance, threshold and runtime budget below is fixed; nothing is
// calibrated from the results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bundle_lab/experiment.hpp"
#include "bundle_lab/group_revenue.hpp"
#include "bundle_lab/pair_revenue.hpp"
#include "bundle_lab/single_pricing.hpp"
#include "split_grid.hpp"
#include "oracles.hpp"

using namespace bundle_lab;

namespace {

struct Check {
  std::ostringstream detail;
  bool ok = true;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<void(Check&)> body;
};

ValuationDistribution uniform1() { return make_uniform(1.0); }
ValuationDistribution ramp() { return make_piecewise_linear({0.0, 1.0}, {0.5, 1.5}); }
ItemPrice at(double x) { return ItemPrice::finite(x); }

void myerson(Check& c) {
  const auto su = optimal_single_price(uniform1());
  c.detail << "uniform p*=" << su.price << " u*=" << su.expected_revenue;
  c.expect(std::abs(su.price - 0.5) <= 1e-6, "uniform p*");
  c.expect(std::abs(su.expected_revenue - 0.25) <= 1e-6, "uniform u*");

  const auto r = ramp();
  const auto sr = optimal_single_price(r);
  const auto grid = oracle::grid_then_ternary_max([&](double p) { return expected_revenue_single(r, p); }, 0.0, 1.0, 10001);
  c.detail << "; ramp p*=" << sr.price << " u*=" << sr.expected_revenue << " grid u*=" << grid.value;
  c.expect(std::abs(sr.price - (std::sqrt(7.0) - 1.0) / 3.0) <= 1e-6, "ramp p*");
  c.expect(std::abs(sr.expected_revenue - grid.value) <= 1e-6, "ramp u* vs grid oracle");
}

void eps_offer_gain(Check& c) {
  const auto u = uniform1();
  const auto r = ramp();
  const double us = 2 * optimal_single_price(u).expected_revenue;
  const double eps_rev = pair_expected_revenue_exact(u, u, epsilon_offer(0.5, 0.5, 0.1)).total;
  c.detail << "u^s=" << us << " eps=0.1 revenue=" << eps_rev;
  c.expect(std::abs(us - 0.5) <= 1e-6, "u^s");
  c.expect(std::abs(eps_rev - 0.516) <= 1e-4, "eps-offer revenue");

  struct Pair {
    const char* name;
    ValuationDistribution d1, d2;
  };
  for (const Pair& p : {Pair{"uniform x uniform", u, u}, Pair{"uniform x ramp", u, r}, Pair{"ramp x ramp", r, r}}) {
    const Thm1Report rep = verify_thm1(p.d1, p.d2, kDefaultEpsGrid);
    double best = -1.0;
    for (const auto& row : rep.rows) best = std::max(best, row.improvement);
    c.detail << "; " << p.name << " best gain=" << best;
    c.expect(rep.verified, std::string("strict improvement ") + p.name);
  }
}

void pair_optimization(Check& c) {
  const auto u = uniform1();
  const PairOptimum full = optimize_pair_offer(u, u, 8);
  const PairOptimum pure = optimize_pair_offer(u, u, 8, PairSearchMode::pure_bundle);
  c.detail << "optimized=" << full.revenue << " pure-bundle b=" << pure.offer.bundle_price
           << " revenue=" << pure.revenue;
  c.expect(full.revenue >= 0.5443 - 0.002, "optimized >= 0.5443 - 0.002");
  c.expect(full.revenue > 0.5, "optimized > 0.5");
  c.expect(std::abs(pure.offer.bundle_price - std::sqrt(2.0 / 3.0)) <= 0.02, "pure-bundle price");
}

void large_bundle(Check& c) {
  const auto u = uniform1();
  const std::size_t n = 1000;
  const std::vector<ValuationDistribution> dists(n, u);
  const BundleOffer offer = thm2_offer(dists);
  const MonteCarloEstimate mc = group_expected_revenue_mc(dists, offer, 100000, 20240601);
  const double mu = total_mean(dists);
  const double lower = thm2_revenue_lower_bound(n, mu, 1.0);
  c.detail << "b=" << offer.bundle_price << " estimate=" << mc.estimate << " se=" << mc.std_error
           << " lower=" << lower << " mu=" << mu;
  c.expect(std::abs(offer.bundle_price - 333.77) <= 0.01, "b ~ 333.77");
  c.expect(std::abs(mc.estimate - offer.bundle_price) <= 4.0 * mc.std_error, "estimate within 4 SE of b");
  c.expect(std::abs(lower - 333.44) <= 0.01, "lower bound ~ 333.44");
  c.expect(mc.estimate + 4.0 * mc.std_error >= lower, "estimate + 4 SE >= lower bound");
  c.expect(mc.estimate <= mu, "estimate <= mu");

  const std::size_t ns[] = {100, 1000, 10000};
  const auto rows = verify_thm2(u, ns, 100000, 20240602);
  double previous = 2.0;
  c.detail << "; relative gaps";
  for (const auto& row : rows) {
    const double gap = (row.mu - row.revenue_estimate) / row.mu;
    c.detail << " n=" << row.n << ":" << gap;
    c.expect(row.passed(), "bounds at n=" + std::to_string(row.n));
    c.expect(gap < previous, "gap decreases at n=" + std::to_string(row.n));
    previous = gap;
  }
}

void bernstein(Check& c) {
  std::size_t worst_n = 0;
  double worst_ratio = 0.0;
  for (std::size_t n = 2; n <= 1'000'000; ++n) {
    const double nd = static_cast<double>(n);
    const double t = 2.0 * std::sqrt(nd * std::log(nd));
    const double ratio = bernstein_upper_bound(n, 1.0, t) * nd;  // must be <= 1
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_n = n;
    }
  }
  c.detail << "max n*bound=" << worst_ratio << " at n=" << worst_n;
  c.expect(worst_ratio <= 1.0, "bound <= 1/n for all n");
}

void acceptance_rule(Check& c) {
  const auto pairs = split_grid::check_pairs();
  const auto triples = split_grid::check_triples();
  c.detail << "n=2 checked=" << pairs.checked << " excluded=" << pairs.excluded
           << " disagreements=" << pairs.disagreements << "; n=3 checked=" << triples.checked
           << " excluded=" << triples.excluded << " disagreements=" << triples.disagreements;
  c.expect(pairs.disagreements == 0 && pairs.checked > 0, "n=2 agreement");
  c.expect(triples.disagreements == 0 && triples.checked > 0, "n=3 agreement");
}

void consistency(Check& c) {
  const auto u = uniform1();
  const auto r = ramp();
  const auto mixed = make_piecewise_linear({0.0, 0.3, 0.7, 1.0}, {1.0, 2.0, 0.4, 1.2});
  const double pr = (std::sqrt(7.0) - 1.0) / 3.0;

  struct Case {
    const ValuationDistribution* d1;
    const ValuationDistribution* d2;
    BundleOffer offer;
  };
  std::vector<Case> cases{
      {&u, &u, BundleOffer{{at(0.5), at(0.5)}, 1.0}},
      {&u, &u, epsilon_offer(0.5, 0.5, 0.1)},
      {&u, &u, pure_bundle_offer(2, std::sqrt(2.0 / 3.0))},
      {&r, &r, epsilon_offer(pr, pr, 0.05)},
      {&u, &r, epsilon_offer(0.5, pr, 0.1)},
      {&r, &r, BundleOffer{{at(0.7), kNoSale}, 0.8}},
      {&mixed, &r, BundleOffer{{at(0.65), at(0.55)}, 0.9}},
  };
  cases.push_back({&u, &u, optimize_pair_offer(u, u, 4).offer});
  cases.push_back({&r, &r, optimize_pair_offer(r, r, 4).offer});

  double worst_z = 0.0;
  std::uint64_t seed = 7000;
  for (const auto& k : cases) {
    const double exact = pair_expected_revenue_exact(*k.d1, *k.d2, k.offer).total;
    const auto mc = pair_expected_revenue_mc(*k.d1, *k.d2, k.offer, 1'000'000, seed++);
    worst_z = std::max(worst_z, std::abs(exact - mc.estimate) / mc.std_error);
  }
  c.detail << "max |exact-MC|/SE=" << worst_z << " over " << cases.size() << " offers";
  c.expect(worst_z <= 4.0, "exact vs MC within 4 SE");

  constexpr RegionLabel kLabels[] = {RegionLabel::A1, RegionLabel::A2, RegionLabel::A3, RegionLabel::A4,
                                     RegionLabel::A5};
  double worst_partition = 0.0;
  struct Params {
    const ValuationDistribution* d1;
    const ValuationDistribution* d2;
    double p1, p2, eps;
  };
  for (const Params& p : {Params{&u, &u, 0.5, 0.5, 0.1}, Params{&r, &r, pr, pr, 0.05},
                          Params{&u, &r, 0.5, pr, 0.2}, Params{&mixed, &u, 0.4, 0.6, 0.01}}) {
    double total = 0.0;
    for (RegionLabel l : kLabels) {
      total += region_probability(*p.d1, *p.d2, l, p.p1, p.p2, p.eps);
    }
    worst_partition = std::max(worst_partition, std::abs(total - 1.0));
  }
  c.detail << "; max |sum P(A_i) - 1|=" << worst_partition;
  c.expect(worst_partition <= 1e-8, "region probabilities sum to 1");

  const BundleOffer eps_offer = epsilon_offer(0.5, 0.5, 0.1);
  double worst_region = 0.0;
  for (RegionLabel l : {RegionLabel::A1, RegionLabel::A3}) {
    const ValuationRect rect = region_rect(l, 0.5, 0.5, 0.1);
    const double bundle = pair_expected_revenue_exact(u, u, eps_offer, rect, 1e-10).total;
    const double singles = singles_revenue_on(u, u, 0.5, 0.5, rect);
    worst_region = std::max(worst_region, std::abs(bundle - singles));
  }
  c.detail << "; max region A1/A3 mismatch=" << worst_region;
  c.expect(worst_region <= 1e-6, "region-wise equalities");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bundle_lab_acceptance";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  bool identical = true;
  for (const char* cfg :
       {R"({"command":"pair-opt","distributions":[{"type":"uniform","M":1},{"type":"uniform","M":1}],"seed":42,"n_samples":100000,"budget":3})",
        R"({"command":"verify-thm2","distributions":[{"type":"uniform","M":1}],"seed":42,"n_samples":20000,"n_list":[100,1000]})",
        R"({"command":"partition","distributions":[{"type":"uniform","M":1}],"seed":42,"customers":36,"n_samples":20000,"budget":2})"}) {
    ExperimentConfig config = parse_config(cfg);
    config.output = (dir / "first.csv").string();
    run(config);
    config.output = (dir / "second.csv").string();
    run(config);
    const std::string a = slurp(dir / "first.csv");
    identical = identical && !a.empty() && a == slurp(dir / "second.csv");
  }
  c.detail << "; CSV byte-identical=" << (identical ? "yes" : "no");
  c.expect(identical, "byte-reproducible CSV");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "optimal single price fixed point", 1.0, myerson},
      {"AC2", "two-customer bundling beats separate sales", 10.0, eps_offer_gain},
      {"AC3", "pair offer optimization", 60.0, pair_optimization},
      {"AC4", "large-bundle revenue bounds", 120.0, large_bundle},
      {"AC5", "Bernstein sweep n in [2, 1e6]", 5.0, bernstein},
      {"AC6", "acceptance rule vs brute-force split search", 60.0, acceptance_rule},
      {"AC7", "consistency: exact vs MC, regions, reproducibility", 300.0, consistency},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << " EXCEPTION: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) check.expect(false, "runtime budget");
    if (!check.ok) ++failures;
    std::printf("[%s] %s %s (%.2f s / %.0f s): %s\n", check.ok ? "PASS" : "FAIL", criterion.id, criterion.title,
                seconds, criterion.budget_seconds, check.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
