#pragma once

#include <cmath>
#include <cstdint>

#include "winding/common.hpp"

namespace winding {

/// Adaptive Simpson quadrature.
///
/// Splits panels until the classic |S_left + S_right - S_whole|/15 estimate
/// drops below the local tolerance share. The panel budget is a hard cap;
/// exceeding it raises QuadratureNonConvergence.
struct QuadratureOptions {
  double tol = 1e-10;
  std::uint64_t max_panels = (1ull << 24);
};

namespace detail {

inline double simpson_panel(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(const F& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, std::uint64_t& budget, int depth) {
  if (budget == 0)
    fail(ErrorCode::QuadratureNonConvergence, "adaptive Simpson exceeded panel budget");
  if (depth >= 64)
    fail(ErrorCode::QuadratureNonConvergence, "panel width collapsed without convergence");
  --budget;
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(a, fa, m, fm, flm);
  const double right = simpson_panel(m, fm, b, fb, frm);
  const double err = (left + right - whole) / 15.0;
  // depth floor guards against spuriously small error estimates on the first panels
  if (std::abs(err) <= tol && depth >= 4) return left + right + err;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, budget, depth + 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, budget, depth + 1);
}

}  // namespace detail

template <class F>
double integrate(const F& f, double a, double b, QuadratureOptions opt = {}) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = detail::simpson_panel(a, fa, b, fb, fm);
  std::uint64_t budget = opt.max_panels;
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, opt.tol, budget, 0);
}

}  // namespace winding
