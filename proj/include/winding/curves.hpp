#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "winding/common.hpp"

namespace winding {

enum class CurveFamily { ExampleA, ExampleB, ExampleC, Custom };

inline const char* to_string(CurveFamily f) {
  switch (f) {
    case CurveFamily::ExampleA: return "example_a";
    case CurveFamily::ExampleB: return "example_b";
    case CurveFamily::ExampleC: return "example_c";
    case CurveFamily::Custom: return "custom";
  }
  return "?";
}

/// Parameters of the shipped curve families. Unused entries stay at 0.
struct CurveParams {
  double r_star = 1.0;
  double s = 1.0;
  double z1 = 2.0;
  double z2 = 1.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double om1 = 0.0;
  double om2 = 0.0;
};

/// One radius profile r(theta). Families come with analytic first and second
/// derivatives; custom curves fall back to central differences with step
/// h = 1e-6 * max(1, |theta|).
class RadialCurve {
 public:
  using Fn = std::function<double(double)>;

  RadialCurve() = default;

  static RadialCurve analytic(Fn f, Fn d1, Fn d2) {
    RadialCurve c;
    c.f_ = std::move(f);
    c.d1_ = std::move(d1);
    c.d2_ = std::move(d2);
    c.analytic_ = true;
    return c;
  }

  static RadialCurve sampled(Fn f) {
    RadialCurve c;
    c.f_ = std::move(f);
    c.analytic_ = false;
    return c;
  }

  double value(double theta) const { return f_(theta); }

  double deriv(double theta) const {
    if (analytic_) return d1_(theta);
    const double h = fd_step(theta);
    return (f_(theta + h) - f_(theta - h)) / (2.0 * h);
  }

  double deriv2(double theta) const {
    if (analytic_) return d2_(theta);
    const double h = fd_step(theta);
    return (f_(theta + h) - 2.0 * f_(theta) + f_(theta - h)) / (h * h);
  }

  bool has_analytic_derivatives() const { return analytic_; }

  static double fd_step(double theta) { return 1e-6 * std::max(1.0, std::abs(theta)); }

 private:
  Fn f_, d1_, d2_;
  bool analytic_ = false;
};

/// The pair (r1, r2) bounding the winding region, anchored at theta0.
struct CurvePair {
  CurveFamily family = CurveFamily::Custom;
  CurveParams params;
  double theta0 = 0.0;
  RadialCurve r1, r2;

  double r(int i, double theta) const { return i == 1 ? r1.value(theta) : r2.value(theta); }
};

namespace detail {

// r(theta) = r_star * (1 + p(theta)^{-s}) with p a phase function.
inline double radius_of_phase(double r_star, double s, double p) {
  return r_star * (1.0 + std::pow(p, -s));
}

inline RadialCurve family_a_curve(double r_star, double s, double z) {
  if (s == 1.0) {  // division beats pow in the walker-heavy paths
    auto f = [=](double t) { return r_star * (1.0 + 1.0 / (t + z)); };
    auto d1 = [=](double t) {
      const double p = t + z;
      return -r_star / (p * p);
    };
    auto d2 = [=](double t) {
      const double p = t + z;
      return 2.0 * r_star / (p * p * p);
    };
    return RadialCurve::analytic(f, d1, d2);
  }
  auto f = [=](double t) { return radius_of_phase(r_star, s, t + z); };
  auto d1 = [=](double t) { return -r_star * s * std::pow(t + z, -s - 1.0); };
  auto d2 = [=](double t) { return r_star * s * (s + 1.0) * std::pow(t + z, -s - 2.0); };
  return RadialCurve::analytic(f, d1, d2);
}

inline RadialCurve family_b_curve(double r_star, double s, double z, double eps, double om) {
  auto p = [=](double t) { return t + z + eps * std::cos(om * t); };
  auto dp = [=](double t) { return 1.0 - eps * om * std::sin(om * t); };
  auto d2p = [=](double t) { return -eps * om * om * std::cos(om * t); };
  auto f = [=](double t) { return radius_of_phase(r_star, s, p(t)); };
  auto d1 = [=](double t) { return -r_star * s * std::pow(p(t), -s - 1.0) * dp(t); };
  auto d2 = [=](double t) {
    const double pt = p(t), dpt = dp(t);
    return r_star * s *
           ((s + 1.0) * std::pow(pt, -s - 2.0) * dpt * dpt - std::pow(pt, -s - 1.0) * d2p(t));
  };
  return RadialCurve::analytic(f, d1, d2);
}

inline RadialCurve family_c_curve(double r_star, double s, double z, double eps, double om) {
  auto q = [=](double t) { return om * std::pow(t, s + 2.0); };
  auto dq = [=](double t) { return om * (s + 2.0) * std::pow(t, s + 1.0); };
  auto d2q = [=](double t) { return om * (s + 2.0) * (s + 1.0) * std::pow(t, s); };
  auto p = [=](double t) { return t + z + eps * std::cos(q(t)); };
  auto dp = [=](double t) { return 1.0 - eps * std::sin(q(t)) * dq(t); };
  auto d2p = [=](double t) {
    return -eps * (std::cos(q(t)) * dq(t) * dq(t) + std::sin(q(t)) * d2q(t));
  };
  auto f = [=](double t) { return radius_of_phase(r_star, s, p(t)); };
  auto d1 = [=](double t) { return -r_star * s * std::pow(p(t), -s - 1.0) * dp(t); };
  auto d2 = [=](double t) {
    const double pt = p(t), dpt = dp(t);
    return r_star * s *
           ((s + 1.0) * std::pow(pt, -s - 2.0) * dpt * dpt - std::pow(pt, -s - 1.0) * d2p(t));
  };
  return RadialCurve::analytic(f, d1, d2);
}

}  // namespace detail

inline CurvePair make_example_a(double r_star, double s, double z1, double z2, double theta0) {
  CurvePair cp;
  cp.family = CurveFamily::ExampleA;
  cp.params = {r_star, s, z1, z2, 0, 0, 0, 0};
  cp.theta0 = theta0;
  cp.r1 = detail::family_a_curve(r_star, s, z1);
  cp.r2 = detail::family_a_curve(r_star, s, z2);
  return cp;
}

inline CurvePair make_example_b(double r_star, double s, double z1, double z2, double eps1,
                                double eps2, double om1, double om2, double theta0) {
  CurvePair cp;
  cp.family = CurveFamily::ExampleB;
  cp.params = {r_star, s, z1, z2, eps1, eps2, om1, om2};
  cp.theta0 = theta0;
  cp.r1 = detail::family_b_curve(r_star, s, z1, eps1, om1);
  cp.r2 = detail::family_b_curve(r_star, s, z2, eps2, om2);
  return cp;
}

inline CurvePair make_example_c(double r_star, double s, double z1, double z2, double eps1,
                                double eps2, double om1, double om2, double theta0) {
  CurvePair cp;
  cp.family = CurveFamily::ExampleC;
  cp.params = {r_star, s, z1, z2, eps1, eps2, om1, om2};
  cp.theta0 = theta0;
  cp.r1 = detail::family_c_curve(r_star, s, z1, eps1, om1);
  cp.r2 = detail::family_c_curve(r_star, s, z2, eps2, om2);
  return cp;
}

inline CurvePair make_custom(RadialCurve r1, RadialCurve r2, double theta0) {
  CurvePair cp;
  cp.family = CurveFamily::Custom;
  cp.theta0 = theta0;
  cp.r1 = std::move(r1);
  cp.r2 = std::move(r2);
  return cp;
}

}  // namespace winding
