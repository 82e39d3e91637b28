#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "winding/constants.hpp"
#include "winding/geometry.hpp"

namespace winding {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class OperatorPreset { Laplacian, RotatedAnisotropic, Custom };
enum class DriftPreset { Zero, ConstantVector, AngularGrowth, Custom };

/// Evaluatable coefficient set (A, b, f) of the non-divergence operator
///   L u = -sum_ij a_ij D_ij u + b . grad u.
/// Evaluators take a DomainPoint so that drifts depending on the unwrapped
/// angle see the resolved winding branch. Immutable; concurrently callable.
struct CoefficientField {
  std::function<Mat2(const DomainPoint&)> A;
  std::function<Vec2(const DomainPoint&)> b;
  std::function<double(const DomainPoint&)> f;

  OperatorPreset op_tag = OperatorPreset::Custom;
  DriftPreset drift_tag = DriftPreset::Custom;
  double c0 = 0.0;  ///< exact ellipticity constant for presets
  double M1 = 0.0;  ///< exact trace bound for presets
  double M2 = 0.0;  ///< exact drift bound for bounded presets
  double alpha = 0.0;         ///< AngularGrowth strength
  double drift_theta_bar = 0.0;  ///< AngularGrowth: angle from which m is active
};

inline DomainPoint principal_point(const Vec2& x) {
  DomainPoint p;
  p.x1 = x[0];
  p.x2 = x[1];
  p.r = x.norm();
  p.theta = std::atan2(x[1], x[0]);
  p.lambda = std::numeric_limits<double>::quiet_NaN();
  return p;
}

// ---------------------------------------------------------------------------
// Presets

inline CoefficientField laplacian_field() {
  CoefficientField cf;
  cf.A = [](const DomainPoint&) { return Mat2::Identity().eval(); };
  cf.b = [](const DomainPoint&) { return Vec2::Zero().eval(); };
  cf.f = [](const DomainPoint&) { return 0.0; };
  cf.op_tag = OperatorPreset::Laplacian;
  cf.drift_tag = DriftPreset::Zero;
  cf.c0 = 1.0;
  cf.M1 = 2.0;
  return cf;
}

/// A(x) = c0 * e_r e_r^T + (M1 - c0) * e_t e_t^T with e_r, e_t the radial and
/// tangential unit vectors at x: spatially varying coefficients with exactly
/// known ellipticity constants.
inline CoefficientField rotated_anisotropic_field(double c0, double M1) {
  require(c0 > 0.0 && M1 >= 2.0 * c0, ErrorCode::InvalidArgument,
          "rotated preset needs c0 > 0 and M1 >= 2*c0");
  CoefficientField cf;
  cf.A = [c0, M1](const DomainPoint& p) {
    const double phi = std::atan2(p.x2, p.x1);
    const Vec2 er(std::cos(phi), std::sin(phi));
    const Vec2 et(-std::sin(phi), std::cos(phi));
    return (c0 * er * er.transpose() + (M1 - c0) * et * et.transpose()).eval();
  };
  cf.b = [](const DomainPoint&) { return Vec2::Zero().eval(); };
  cf.f = [](const DomainPoint&) { return 0.0; };
  cf.op_tag = OperatorPreset::RotatedAnisotropic;
  cf.drift_tag = DriftPreset::Zero;
  cf.c0 = c0;
  cf.M1 = M1;
  return cf;
}

inline CoefficientField& with_constant_drift(CoefficientField& cf, const Vec2& b) {
  cf.b = [b](const DomainPoint&) { return b; };
  cf.drift_tag = DriftPreset::ConstantVector;
  cf.M2 = b.norm();
  return cf;
}

/// Tangential drift of magnitude alpha * ln(theta) on the resolved winding
/// branch; constant before drift_theta_bar so the field stays bounded there.
inline CoefficientField& with_angular_growth_drift(CoefficientField& cf, double alpha,
                                                   double theta0) {
  require(alpha >= 0.0, ErrorCode::InvalidArgument, "alpha must be nonnegative");
  const double theta_bar = std::max(theta0, 1.0);
  cf.b = [alpha, theta_bar](const DomainPoint& p) {
    const double mag = alpha * std::log(std::max(p.theta, theta_bar));
    const double phi = std::atan2(p.x2, p.x1);
    return (mag * Vec2(-std::sin(phi), std::cos(phi))).eval();
  };
  cf.drift_tag = DriftPreset::AngularGrowth;
  cf.alpha = alpha;
  cf.drift_theta_bar = theta_bar;
  return cf;
}

inline CoefficientField& with_forcing(CoefficientField& cf,
                                      std::function<double(const DomainPoint&)> f) {
  cf.f = std::move(f);
  return cf;
}

// ---------------------------------------------------------------------------
// Applying the operator

/// Twice-differentiable test function with analytic derivatives.
struct TestFunction {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
  std::function<Mat2(const Vec2&)> hess;
};

inline double apply_L(const CoefficientField& field, const TestFunction& u,
                      const DomainPoint& p) {
  const Vec2 x(p.x1, p.x2);
  // the second-order term carries a minus sign in this operator convention
  return -(field.A(p).cwiseProduct(u.hess(x))).sum() + field.b(p).dot(u.grad(x));
}

/// Finite-difference fallback: 5-point second differences and a 4-point mixed
/// stencil on the raw value function. Coefficients are frozen at p.
inline double apply_L_fd(const CoefficientField& field,
                         const std::function<double(const Vec2&)>& u, const DomainPoint& p,
                         double h) {
  const Vec2 x(p.x1, p.x2);
  const Vec2 e1(1, 0), e2(0, 1);
  const double u0 = u(x);
  const double uxx = (u(x + h * e1) - 2 * u0 + u(x - h * e1)) / (h * h);
  const double uyy = (u(x + h * e2) - 2 * u0 + u(x - h * e2)) / (h * h);
  const double uxy = (u(x + h * e1 + h * e2) - u(x + h * e1 - h * e2) -
                      u(x - h * e1 + h * e2) + u(x - h * e1 - h * e2)) /
                     (4 * h * h);
  const double ux = (u(x + h * e1) - u(x - h * e1)) / (2 * h);
  const double uy = (u(x + h * e2) - u(x - h * e2)) / (2 * h);
  const Mat2 A = field.A(p);
  const Vec2 b = field.b(p);
  return -(A(0, 0) * uxx + 2.0 * A(0, 1) * uxy + A(1, 1) * uyy) + b[0] * ux + b[1] * uy;
}

// ---------------------------------------------------------------------------
// Ellipticity validation

/// Samples eigenvalues of A and |b| over the strip; presets return their exact
/// constants, custom fields get certified sampled bounds with safety factors.
inline EllipticityData validate_ellipticity(const CoefficientField& field,
                                            const DomainSpec& spec, std::size_t n_samples = 4096,
                                            std::uint64_t seed = 12345) {
  require(n_samples >= 1000, ErrorCode::InvalidArgument, "need n_samples >= 1000");
  EllipticityData ed;

  double min_eig = std::numeric_limits<double>::infinity();
  double max_trace = 0.0;
  double max_drift = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double lam = uni(rng);
    const double th = spec.theta0() + (spec.theta_max - spec.theta0()) * uni(rng);
    const DomainPoint p = spec.point(lam, th);
    const Mat2 A = field.A(p);
    const double tr = A.trace();
    const double det = A.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lo = tr / 2.0 - disc;
    if (lo <= 0.0) {
      std::ostringstream os;
      os << "matrix not positive definite at (lambda,theta)=(" << lam << "," << th << ")";
      fail(ErrorCode::DegenerateEllipticity, os.str());
    }
    min_eig = std::min(min_eig, lo);
    max_trace = std::max(max_trace, tr);
    max_drift = std::max(max_drift, field.b(p).norm());
  }

  const bool preset_op = field.op_tag != OperatorPreset::Custom;
  ed.c0 = preset_op ? field.c0 : 0.99 * min_eig;
  ed.M1 = preset_op ? field.M1 : 1.01 * max_trace;

  if (field.drift_tag == DriftPreset::AngularGrowth) {
    UnboundedDrift ub;
    const double alpha = field.alpha;
    const double tb = field.drift_theta_bar;
    ub.m = [alpha, tb](double th) { return alpha * std::log(std::max(th, tb)); };
    ub.kind = DriftGrowthKind::AlphaLog;
    ub.param = alpha;
    ub.ThetaBar = tb;
    ub.kappa = std::exp(-1.0 / std::max(alpha, 1e-300));  // smallest kappa passing mt1
    ed.drift = ub;
  } else if (field.drift_tag == DriftPreset::Custom) {
    ed.drift = BoundedDrift{1.01 * max_drift};
  } else {
    ed.drift = BoundedDrift{field.M2};
  }
  return ed;
}

// ---------------------------------------------------------------------------
// Barriers

/// Inverse-power barrier V(x) = |x - x*|^{-s}.
struct BarrierSpec {
  Vec2 x_star = Vec2::Zero();
  double s = 1.0;
  double e0 = 2.0;
};

/// L applied to the inverse-power barrier, in the closed form
///   L V = -s r^{-s-2} ( a*(x)(s+2) - Tr A(x) + b(x).(x - x*) ),
/// with a* the radial Rayleigh quotient of A. Nonpositive whenever the
/// exponent condition s >= e0 - 2 holds.
inline double barrier_residual(const CoefficientField& field, const BarrierSpec& bs,
                               const DomainPoint& p) {
  const Vec2 x(p.x1, p.x2);
  const Vec2 d = x - bs.x_star;
  const double r = d.norm();
  require(r > 0.0, ErrorCode::InvalidArgument, "barrier evaluated at its pole");
  const Vec2 xi = d / r;
  const Mat2 A = field.A(p);
  const double a_star = xi.dot(A * xi);
  const double Q = A.trace() - field.b(p).dot(d);
  return -bs.s * std::pow(r, -bs.s - 2.0) * (a_star * (bs.s + 2.0) - Q);
}

/// L applied to w(x) = -(1 - eps * e^{K0 x1}):
///   L w = -eps K0 (a11 K0 - b1) e^{K0 x1}.
inline double exp_barrier_residual(const CoefficientField& field, double K0, double eps,
                                   const DomainPoint& p) {
  const Mat2 A = field.A(p);
  const double b1 = field.b(p)[0];
  return -eps * K0 * (A(0, 0) * K0 - b1) * std::exp(K0 * p.x1);
}

/// Bound e0 = (M1 + M2 * R*(x*, Omega)) / c0 with R* sampled over the closed
/// region (the norm attains its maximum on the bounding curves).
inline double barrier_exponent_bound(const DomainSpec& spec, const EllipticityData& ell,
                                     const Vec2& x_star, std::size_t n_samples = 4096) {
  double R = 0.0;
  for (std::size_t k = 0; k <= n_samples; ++k) {
    const double th =
        spec.theta0() + (spec.theta_max - spec.theta0()) * k / static_cast<double>(n_samples);
    for (int i = 0; i < 2; ++i) {
      const double rr = i == 0 ? spec.curves.r1.value(th) : spec.curves.r2.value(th);
      const Vec2 x(rr * std::cos(th), rr * std::sin(th));
      R = std::max(R, (x - x_star).norm());
    }
  }
  return (ell.M1 + ell.M2() * R) / ell.c0;
}

}  // namespace winding
