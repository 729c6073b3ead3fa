#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bundle_lab/parallel.hpp"
#include "bundle_lab/quadrature.hpp"
#include "bundle_lab/random.hpp"
#include "bundle_lab/scalar_search.hpp"

using namespace bundle_lab;

TEST_CASE("adaptive Simpson") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-9));
  // A kink at 0.3 handled by a breakpoint.
  const double kink[] = {0.3};
  const double v = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12, kink);
  CHECK(v == doctest::Approx(0.045 + 0.245).epsilon(1e-12));
  // A jump without a breakpoint still converges, more slowly.
  const double jump = integrate_adaptive([](double x) { return x < 0.37 ? 1.0 : 0.0; }, 0.0, 1.0, 1e-9);
  CHECK(std::abs(jump - 0.37) < 1e-7);
  CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 1e-9) == 0.0);
  CHECK_THROWS_AS(AdaptiveSimpson<1>(0.0), std::invalid_argument);
}

TEST_CASE("golden section and scan") {
  const auto m = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-9);
  CHECK(m.argmax == doctest::Approx(0.3).epsilon(1e-7));
  // Two bumps: the scan finds the taller one.
  auto two = [](double x) { return std::exp(-200 * (x - 0.1) * (x - 0.1)) + 2 * std::exp(-200 * (x - 0.8) * (x - 0.8)); };
  CHECK(scan_then_golden_max(two, 0.0, 1.0, 33, 1e-9).argmax == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("substreams are distinct and reproducible") {
  Rng a = Rng::substream(1, 0), b = Rng::substream(1, 1), c = Rng::substream(1, 0);
  const double x = a.uniform01();
  CHECK(x == c.uniform01());
  CHECK(x != b.uniform01());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("parallel_for covers every index and propagates errors") {
  setenv("BUNDLE_LAB_THREADS", "4", 1);
  CHECK(thread_count() == 4);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) { if (i == 42) throw std::runtime_error("x"); }),
                  std::runtime_error);
  setenv("BUNDLE_LAB_THREADS", "junk", 1);
  CHECK(thread_count() >= 1);
  unsetenv("BUNDLE_LAB_THREADS");
}
