#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bundle_lab {

/// Adaptive composite Simpson integration of a vector-valued integrand.
///
/// The integrand is called with a scalar abscissa and must return
/// std::array<double, N>. Refinement stops on an interval once every
/// component meets the (interval-share of the) absolute tolerance, using the
/// usual Richardson-corrected estimate. Kinks must be passed as breakpoints:
/// with them the integrand is smooth on each piece and Simpson converges at
/// full order.
template <std::size_t N>
class AdaptiveSimpson {
 public:
  using Value = std::array<double, N>;

  explicit AdaptiveSimpson(double abs_tol, int max_depth = 48)
      : abs_tol_(abs_tol), max_depth_(max_depth) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  }

  /// Integrates over [lo, hi], splitting first at every breakpoint strictly
  /// inside the interval.
  template <class F>
  Value integrate(F&& f, double lo, double hi, std::span<const double> breakpoints = {}) const {
    Value total{};
    if (!(hi > lo)) return total;
    std::vector<double> cuts{lo};
    for (double x : breakpoints)
      if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double width = hi - lo;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k];
      const double b = cuts[k + 1];
      const double m = 0.5 * (a + b);
      const Value fa = f(a), fm = f(m), fb = f(b);
      const Value whole = simpson(a, b, fa, fm, fb);
      const double tol = abs_tol_ * (b - a) / width;
      add(total, refine(f, a, b, fa, fm, fb, whole, tol, max_depth_));
    }
    return total;
  }

 private:
  static Value simpson(double a, double b, const Value& fa, const Value& fm, const Value& fb) {
    Value s;
    const double h = (b - a) / 6.0;
    for (std::size_t i = 0; i < N; ++i) s[i] = h * (fa[i] + 4.0 * fm[i] + fb[i]);
    return s;
  }

  static void add(Value& acc, const Value& v) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += v[i];
  }

  template <class F>
  Value refine(F& f, double a, double b, const Value& fa, const Value& fm, const Value& fb,
               const Value& whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Value flm = f(lm), frm = f(rm);
    const Value left = simpson(a, m, fa, flm, fm);
    const Value right = simpson(m, b, fm, frm, fb);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      err = std::max(err, std::abs(left[i] + right[i] - whole[i]));

    if (depth <= 0 || err <= 15.0 * tol) {
      Value out;
      for (std::size_t i = 0; i < N; ++i)
        out[i] = left[i] + right[i] + (left[i] + right[i] - whole[i]) / 15.0;
      return out;
    }
    Value out = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    add(out, refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1));
    return out;
  }

  double abs_tol_;
  int max_depth_;
};

/// Scalar convenience wrapper around AdaptiveSimpson<1>.
template <class F>
double integrate_adaptive(F&& f, double lo, double hi, double abs_tol,
                          std::span<const double> breakpoints = {}) {
  AdaptiveSimpson<1> quad(abs_tol);
  return quad.integrate([&](double x) { return std::array<double, 1>{f(x)}; }, lo, hi,
                        breakpoints)[0];
}

}  // namespace bundle_lab
