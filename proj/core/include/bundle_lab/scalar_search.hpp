#pragma once

#include <cmath>
#include <cstddef>

namespace bundle_lab {

struct ScalarMaximum {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi], stopping once the
/// bracket is narrower than tol. Assumes f is unimodal on the bracket; the
/// returned point is the best one evaluated.
template <class F>
ScalarMaximum golden_section_max(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  ScalarMaximum best = f1 >= f2 ? ScalarMaximum{x1, f1} : ScalarMaximum{x2, f2};
  while (hi - lo > tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
      if (f1 > best.value || (f1 == best.value && x1 < best.argmax)) best = {x1, f1};
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
      if (f2 > best.value || (f2 == best.value && x2 < best.argmax)) best = {x2, f2};
    }
  }
  return best;
}

/// Uniform scan with `scan_points` points (ends included), then golden-section
/// refinement inside the two grid cells around the best scan point. The scan
/// keeps golden-section away from local maxima of mildly multimodal curves.
/// Ties go to the smaller argument.
template <class F>
ScalarMaximum scan_then_golden_max(F&& f, double lo, double hi, std::size_t scan_points,
                                   double tol) {
  if (scan_points < 2) scan_points = 2;
  const double step = (hi - lo) / static_cast<double>(scan_points - 1);
  ScalarMaximum best{lo, f(lo)};
  std::size_t best_index = 0;
  for (std::size_t i = 1; i < scan_points; ++i) {
    const double x = i + 1 == scan_points ? hi : lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_index = i;
    }
  }
  const double a = best_index == 0 ? lo : lo + step * static_cast<double>(best_index - 1);
  const double b = best_index + 1 >= scan_points ? hi : lo + step * static_cast<double>(best_index + 1);
  if (b - a > tol) {
    const ScalarMaximum refined = golden_section_max(f, a, b, tol);
    if (refined.value > best.value) best = refined;
  }
  return best;
}

}  // namespace bundle_lab
