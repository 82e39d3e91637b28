#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "winding/common.hpp"
#include "winding/curves.hpp"
#include "winding/quadrature.hpp"

namespace winding {

/// A point of the closed winding region in its three equivalent charts.
/// theta is the unwrapped rotation angle (never reduced mod 2*pi); lambda
/// is the cross-section ratio in [0,1].
struct DomainPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
};

/// Validated description of the winding domain with all derived constants.
///
/// Immutable after construction; every member function is const and safe to
/// call concurrently.
struct DomainSpec {
  CurvePair curves;
  double theta_max = 0.0;

  double r_star = 0.0;            ///< radius of the limit circle
  double r_star_uncertainty = 0.0;///< nonzero only for sampled (custom) estimates
  double r_bar = 0.0;             ///< upper bound for r2 on [theta0, theta_max]
  double mu0 = 0.0;               ///< sup of |r1'|, |r2'| on [Theta, theta_max]
  double mu_star = 0.0;           ///< tail limit of the derivative sup
  double Theta = 0.0;             ///< angle from which the derivative bound is taken
  double L_star = 0.0;            ///< arc-length offset accumulated on [theta0, Theta]
  double k_star = 0.0;            ///< (r_bar + mu0) / r_star

  double theta0() const { return curves.theta0; }

  double radius(double lambda, double theta) const {
    return (1.0 - lambda) * curves.r1.value(theta) + lambda * curves.r2.value(theta);
  }
  double radius_deriv(double lambda, double theta) const {
    return (1.0 - lambda) * curves.r1.deriv(theta) + lambda * curves.r2.deriv(theta);
  }
  double gap(double theta) const { return curves.r2.value(theta) - curves.r1.value(theta); }

  /// Strip chart -> cartesian/polar charts.
  DomainPoint point(double lambda, double theta) const {
    DomainPoint p;
    p.lambda = lambda;
    p.theta = theta;
    p.r = radius(lambda, theta);
    p.x1 = p.r * std::cos(theta);
    p.x2 = p.r * std::sin(theta);
    return p;
  }

  /// Polar chart (unwrapped theta) -> full point.
  DomainPoint point_polar(double r, double theta) const {
    DomainPoint p;
    p.r = r;
    p.theta = theta;
    const double w = gap(theta);
    p.lambda = (r - curves.r1.value(theta)) / w;
    p.x1 = r * std::cos(theta);
    p.x2 = r * std::sin(theta);
    return p;
  }

  bool has_arc_data() const { return std::isfinite(mu0) && std::isfinite(L_star); }
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void check_family_parameters(const CurvePair& cp) {
  const CurveParams& q = cp.params;
  auto reject = [&](const std::string& why) { fail(ErrorCode::NonNested, why); };
  if (cp.family == CurveFamily::ExampleA) {
    if (!(q.z2 > -cp.theta0)) reject("family a requires z2 > -theta0");
    if (!(0.0 <= q.z2 && q.z2 < q.z1 && q.z1 < q.z2 + kTwoPi))
      reject("family a requires 0 <= z2 < z1 < z2 + 2*pi");
  } else if (cp.family == CurveFamily::ExampleB || cp.family == CurveFamily::ExampleC) {
    const double e1 = std::abs(q.eps1), e2 = std::abs(q.eps2);
    if (cp.family == CurveFamily::ExampleC && !(cp.theta0 >= 0.0))
      reject("family c requires theta0 >= 0");
    if (!(q.z1 >= 0.0 && q.z2 >= 0.0)) reject("family b/c requires z1, z2 >= 0");
    if (!(cp.theta0 + q.z1 - e1 > 0.0 && cp.theta0 + q.z2 - e2 > 0.0))
      reject("family b/c requires theta0 + z_i - |eps_i| > 0");
    if (!(e1 + e2 < q.z1 - q.z2 && q.z1 - q.z2 < kTwoPi - (e1 + e2)))
      reject("family b/c requires |eps1|+|eps2| < z1 - z2 < 2*pi - (|eps1|+|eps2|)");
  }
  if (cp.family != CurveFamily::Custom && !(q.r_star > 0.0))
    fail(ErrorCode::NonPositiveRadius, "family parameter r_star must be positive");
}

inline double integrate_abs_deriv(const RadialCurve& c, double a, double b, double tol) {
  if (b <= a) return 0.0;
  return integrate([&](double t) { return std::abs(c.deriv(t)); }, a, b, {tol});
}

}  // namespace detail

/// Checks the nesting condition and positivity on a sample grid and assembles
/// the derived constants. Families use their exact limit radius; custom pairs
/// get a sampled estimate with a reported uncertainty.
inline DomainSpec validate_domain(const CurvePair& curves, double theta_max,
                                  std::size_t n_samples = 2048) {
  require(n_samples >= 100, ErrorCode::InvalidArgument, "validate_domain needs n_samples >= 100");
  require(theta_max > curves.theta0 + 2.0 * kTwoPi, ErrorCode::InvalidArgument,
          "validate_domain needs theta_max > theta0 + 4*pi");
  detail::check_family_parameters(curves);

  const double t0 = curves.theta0;
  const double h = (theta_max - t0) / static_cast<double>(n_samples - 1);
  double r_bar = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double th = t0 + h * static_cast<double>(k);
    const double a1 = curves.r1.value(th);
    const double a2 = curves.r2.value(th);
    const double a2n = curves.r2.value(th + kTwoPi);
    if (!(a1 > 0.0) || !(a2 > 0.0)) {
      std::ostringstream os;
      os << "radius not positive at theta = " << th;
      fail(ErrorCode::NonPositiveRadius, os.str());
    }
    if (!(a2n < a1 && a1 < a2)) {
      std::ostringstream os;
      os << "nesting r2(theta+2pi) < r1(theta) < r2(theta) fails at theta = " << th << " ("
         << a2n << ", " << a1 << ", " << a2 << ")";
      fail(ErrorCode::NonNested, os.str());
    }
    r_bar = std::max(r_bar, a2);
  }

  DomainSpec spec;
  spec.curves = curves;
  spec.theta_max = theta_max;
  spec.r_bar = r_bar;

  if (curves.family == CurveFamily::Custom) {
    // the limit radius is a limit the code cannot take; estimate from the
    // last two windings of r1 and carry the observed drop as uncertainty
    const double lo = theta_max - 2.0 * kTwoPi;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (int k = 0; k <= 512; ++k) {
      const double th = lo + (theta_max - lo) * k / 512.0;
      const double v = curves.r1.value(th);
      rmin = std::min(rmin, v);
      rmax = std::max(rmax, v);
    }
    spec.r_star_uncertainty = rmax - rmin;
    spec.r_star = rmin - spec.r_star_uncertainty;
  } else {
    spec.r_star = curves.params.r_star;
    spec.r_star_uncertainty = 0.0;
  }

  // derivative bounds: families are Lipschitz from theta0 on, so Theta = theta0
  spec.Theta = t0;
  double mu0 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double th = t0 + h * static_cast<double>(k);
    mu0 = std::max({mu0, std::abs(curves.r1.deriv(th)), std::abs(curves.r2.deriv(th))});
  }
  spec.mu0 = mu0;

  // tail derivative sup over the last two windings; families a and b have
  // derivatives decaying to zero, which we use exactly
  if (curves.family == CurveFamily::ExampleA || curves.family == CurveFamily::ExampleB) {
    spec.mu_star = 0.0;
  } else {
    double tail = 0.0;
    const double lo = theta_max - 2.0 * kTwoPi;
    for (int k = 0; k <= 1024; ++k) {
      const double th = lo + (theta_max - lo) * k / 1024.0;
      tail = std::max({tail, std::abs(curves.r1.deriv(th)), std::abs(curves.r2.deriv(th))});
    }
    spec.mu_star = tail;
  }

  spec.L_star = std::max(detail::integrate_abs_deriv(curves.r1, t0, spec.Theta, 1e-10),
                         detail::integrate_abs_deriv(curves.r2, t0, spec.Theta, 1e-10));
  spec.k_star = (spec.r_bar + spec.mu0) / spec.r_star;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double th = t0 + h * static_cast<double>(k);
    require(spec.r_star < curves.r1.value(th), ErrorCode::NonNested,
            "limit radius not strictly below r1 at a sample");
  }
  return spec;
}

/// Wraps a curve pair without the nesting checks. For unit-test geometries
/// (e.g. a concentric annulus) that deliberately break the winding condition.
inline DomainSpec make_unchecked_domain(const CurvePair& curves, double theta_max) {
  DomainSpec spec;
  spec.curves = curves;
  spec.theta_max = theta_max;
  const double t0 = curves.theta0;
  double r_bar = 0.0, rmin = std::numeric_limits<double>::infinity(), mu0 = 0.0;
  for (int k = 0; k <= 1024; ++k) {
    const double th = t0 + (theta_max - t0) * k / 1024.0;
    r_bar = std::max(r_bar, curves.r2.value(th));
    rmin = std::min(rmin, curves.r1.value(th));
    mu0 = std::max({mu0, std::abs(curves.r1.deriv(th)), std::abs(curves.r2.deriv(th))});
  }
  spec.r_bar = r_bar;
  spec.r_star = rmin;
  spec.mu0 = mu0;
  spec.mu_star = mu0;
  spec.Theta = t0;
  spec.L_star = 0.0;
  spec.k_star = (r_bar + mu0) / rmin;
  return spec;
}

// ---------------------------------------------------------------------------
// Arc length / arc distance

/// Arc-length of the convex-combination curve from theta0 to theta at fixed
/// lambda, by adaptive quadrature of sqrt(R^2 + R'^2).
inline double arc_length(const DomainSpec& spec, double lambda, double theta, double tol = 1e-10) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::InvalidArgument, "lambda outside [0,1]");
  require(theta >= spec.theta0() - 1e-12, ErrorCode::InvalidArgument, "theta below theta0");
  if (theta <= spec.theta0()) return 0.0;
  auto speed = [&](double t) {
    const double R = spec.radius(lambda, t);
    const double Rp = spec.radius_deriv(lambda, t);
    return std::sqrt(R * R + Rp * Rp);
  };
  return integrate(speed, spec.theta0(), theta, {tol});
}

/// Arc-distance of a point: the arc-length at the point's strip chart.
inline double arc_distance(const DomainSpec& spec, const DomainPoint& p, double tol = 1e-10) {
  require(spec.has_arc_data(), ErrorCode::MissingArcData, "domain lacks arc-length metadata");
  return arc_length(spec, p.lambda, p.theta, tol);
}

// ---------------------------------------------------------------------------
// Cross-sections and membership

/// n equally spaced points of the cross-section at angle theta, endpoints on
/// the two bounding curves.
inline std::vector<DomainPoint> cross_section(const DomainSpec& spec, double theta,
                                              std::size_t n) {
  require(n >= 2, ErrorCode::InvalidArgument, "cross_section needs n >= 2");
  std::vector<DomainPoint> pts;
  pts.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = static_cast<double>(j) / static_cast<double>(n - 1);
    pts.push_back(spec.point(lambda, theta));
  }
  return pts;
}

enum class Location { Inside, OnGamma, Outside };

struct MembershipResult {
  Location location = Location::Outside;
  double theta = std::numeric_limits<double>::quiet_NaN();  ///< resolved unwrapped branch
  double lambda = std::numeric_limits<double>::quiet_NaN();
};

/// Resolves the unwrapped winding branch containing a cartesian point.
///
/// Branch candidates theta = atan2(x2,x1) + 2*pi*k are scanned upward from
/// theta0; the monotone radius sequence ends the scan once r2 falls below
/// |x|. Two containing branches violate the nesting condition and raise
/// AmbiguousBranch.
inline MembershipResult membership(const DomainSpec& spec, double x1, double x2,
                                   double boundary_tol = 1e-10) {
  MembershipResult out;
  const double r = std::hypot(x1, x2);
  if (r <= spec.r_star) return out;  // inside or on the limit circle

  const double t0 = spec.theta0();
  const double phi = std::atan2(x2, x1);
  double k = std::ceil((t0 - phi) / kTwoPi - 1e-12);
  int hits = 0;
  for (double theta = phi + kTwoPi * k; theta <= spec.theta_max + 1e-12; theta += kTwoPi) {
    if (theta < t0 - 1e-12) continue;
    const double a1 = spec.curves.r1.value(theta);
    const double a2 = spec.curves.r2.value(theta);
    if (a2 < r - boundary_tol) break;  // radii only shrink on later branches
    if (r < a1 - boundary_tol) continue;
    // containing or boundary branch; the cross-section ratio is conditioned
    // like 1/gap, so it is recovered through exact squares in extended
    // precision instead of the cancellation-prone (r - r1)/(r2 - r1)
    MembershipResult cand;
    cand.theta = theta;
    const long double rr = static_cast<long double>(x1) * x1 +
                           static_cast<long double>(x2) * x2;
    const long double num = rr - static_cast<long double>(a1) * a1;
    cand.lambda = static_cast<double>(
        num / ((std::sqrt(rr) + a1) * (static_cast<long double>(a2) - a1)));
    if (std::abs(r - a1) <= boundary_tol || std::abs(r - a2) <= boundary_tol) {
      cand.location = Location::OnGamma;
      cand.lambda = std::clamp(cand.lambda, 0.0, 1.0);
    } else {
      cand.location = Location::Inside;
    }
    ++hits;
    if (hits > 1)
      fail(ErrorCode::AmbiguousBranch, "two winding branches contain the point; nesting broken");
    out = cand;
  }
  return out;
}

}  // namespace winding
