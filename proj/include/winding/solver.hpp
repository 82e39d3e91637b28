#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "winding/operator.hpp"

namespace winding {

/// Uniform tensor grid on the strip chart [0,1] x [theta0, theta_max].
struct StripGrid {
  int n_lambda = 0;
  int n_theta = 0;
  double theta0 = 0.0;
  double theta_max = 0.0;

  StripGrid() = default;
  StripGrid(int nl, int nt, double t0, double t1)
      : n_lambda(nl), n_theta(nt), theta0(t0), theta_max(t1) {
    require(nl >= 3 && nt >= 3, ErrorCode::InvalidArgument, "grid needs at least 3x3 nodes");
    require(t1 > t0, ErrorCode::InvalidArgument, "theta_max must exceed theta0");
  }

  double h_lambda() const { return 1.0 / (n_lambda - 1); }
  double h_theta() const { return (theta_max - theta0) / (n_theta - 1); }
  double lambda(int i) const { return i * h_lambda(); }
  double theta(int j) const { return theta0 + j * h_theta(); }
  int size() const { return n_lambda * n_theta; }
  int idx(int i, int j) const { return i + n_lambda * j; }
  bool on_gamma(int i) const { return i == 0 || i == n_lambda - 1; }
  bool on_theta_end(int j) const { return j == 0 || j == n_theta - 1; }
  bool interior(int i, int j) const { return !on_gamma(i) && !on_theta_end(j); }
};

/// Coefficients of the operator rewritten on the strip chart:
///   -(a11 u_ll + 2 a12 u_lt + a22 u_tt) + b1 u_l + b2 u_t.
struct StripCoeffs {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  double b1 = 0.0, b2 = 0.0;
};

/// Chain rule through cartesian -> polar -> strip. The principal part is a
/// congruence of A by the chart Jacobian (positive definite is preserved);
/// the first-order terms pick up the operator applied to each coordinate.
inline StripCoeffs transform_coefficients(const CoefficientField& field, const DomainSpec& spec,
                                          double lambda, double theta) {
  const double r1 = spec.curves.r1.value(theta);
  const double r2 = spec.curves.r2.value(theta);
  const double w = r2 - r1;
  require(w >= 1e-14, ErrorCode::SingularJacobian, "cross-section width collapsed");
  const double r1p = spec.curves.r1.deriv(theta);
  const double r2p = spec.curves.r2.deriv(theta);
  const double r1pp = spec.curves.r1.deriv2(theta);
  const double r2pp = spec.curves.r2.deriv2(theta);
  const double wp = r2p - r1p;
  const double wpp = r2pp - r1pp;

  const double R = (1.0 - lambda) * r1 + lambda * r2;
  const double Rp = (1.0 - lambda) * r1p + lambda * r2p;  // d/dtheta at fixed lambda

  const double c = std::cos(theta), s = std::sin(theta);
  const Vec2 grad_r(c, s);
  const Vec2 grad_t(-s / R, c / R);
  Mat2 hess_r, hess_t;
  hess_r << s * s / R, -c * s / R, -c * s / R, c * c / R;
  hess_t << 2 * c * s / (R * R), (s * s - c * c) / (R * R), (s * s - c * c) / (R * R),
      -2 * c * s / (R * R);

  // lambda(r,theta) = (r - r1(theta)) / w(theta)
  const double lam_r = 1.0 / w;
  const double lam_t = -Rp / w;
  const double lam_rt = -wp / (w * w);
  const double lam_tt = -(r1pp + lambda * wpp) / w + 2.0 * Rp * wp / (w * w);

  const Vec2 grad_l = lam_r * grad_r + lam_t * grad_t;
  const Mat2 hess_l = lam_r * hess_r + lam_t * hess_t +
                      lam_rt * (grad_r * grad_t.transpose() + grad_t * grad_r.transpose()) +
                      lam_tt * (grad_t * grad_t.transpose());

  const DomainPoint p = spec.point(lambda, theta);
  const Mat2 A = field.A(p);
  const Vec2 b = field.b(p);

  StripCoeffs out;
  out.a11 = grad_l.dot(A * grad_l);
  out.a12 = grad_l.dot(A * grad_t);
  out.a22 = grad_t.dot(A * grad_t);
  out.b1 = b.dot(grad_l) - (A.cwiseProduct(hess_l)).sum();
  out.b2 = b.dot(grad_t) - (A.cwiseProduct(hess_t)).sum();
  return out;
}

/// Dirichlet data on the four sides of the strip.
struct BoundaryData {
  std::function<double(double)> gamma1 = [](double) { return 0.0; };     ///< lambda = 0, arg theta
  std::function<double(double)> gamma2 = [](double) { return 0.0; };     ///< lambda = 1, arg theta
  std::function<double(double)> at_theta0 = [](double) { return 0.0; };  ///< arg lambda
  std::function<double(double)> at_theta_max = [](double) { return 0.0; };

  static BoundaryData constant(double c) {
    BoundaryData g;
    g.gamma1 = g.gamma2 = g.at_theta0 = g.at_theta_max = [c](double) { return c; };
    return g;
  }
};

struct LinearSystem {
  StripGrid grid;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
  int dominance_count = 0;  ///< nodes where the mixed term breaks the sign pattern
  std::vector<std::pair<int, int>> dominance_nodes;  ///< first few offenders
};

/// 9-point assembly. Second differences for the diagonal terms, a sign-adaptive
/// 7-point stencil for the mixed term, and drift terms that switch from
/// centered to upwind exactly when the centered form would break the row sign
/// pattern. Rows are equilibrated by their diagonal. Nodes where the mixed
/// term alone breaks the pattern are counted and reported, not fatal.
inline LinearSystem assemble(const CoefficientField& field, const DomainSpec& spec,
                             const StripGrid& grid, const BoundaryData& g,
                             const std::function<double(const DomainPoint&)>& f) {
  LinearSystem sys;
  sys.grid = grid;
  const int n = grid.size();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(10ull * static_cast<std::size_t>(n));
  const double hl = grid.h_lambda(), ht = grid.h_theta();

  for (int j = 0; j < grid.n_theta; ++j) {
    for (int i = 0; i < grid.n_lambda; ++i) {
      const int row = grid.idx(i, j);
      if (!grid.interior(i, j)) {
        trips.emplace_back(row, row, 1.0);
        // gamma sides take precedence at the corners
        if (i == 0)
          sys.rhs[row] = g.gamma1(grid.theta(j));
        else if (i == grid.n_lambda - 1)
          sys.rhs[row] = g.gamma2(grid.theta(j));
        else if (j == 0)
          sys.rhs[row] = g.at_theta0(grid.lambda(i));
        else
          sys.rhs[row] = g.at_theta_max(grid.lambda(i));
        continue;
      }

      const double lam = grid.lambda(i), th = grid.theta(j);
      const StripCoeffs sc = transform_coefficients(field, spec, lam, th);
      const double cl = sc.a11 / (hl * hl);
      const double ct = sc.a22 / (ht * ht);
      const double acm = std::abs(sc.a12) / (hl * ht);

      if (acm > std::min(cl, ct) * (1.0 + 1e-12)) {
        ++sys.dominance_count;
        if (sys.dominance_nodes.size() < 16) sys.dominance_nodes.emplace_back(i, j);
      }

      double center = 2.0 * cl + 2.0 * ct - 2.0 * acm;
      double west = -cl + acm, east = -cl + acm;    // lambda neighbors
      double south = -ct + acm, north = -ct + acm;  // theta neighbors
      const double corner = -acm;

      // drift in lambda: centered while the sign pattern allows it
      const double slack_l = cl - acm;
      if (std::abs(sc.b1) / (2.0 * hl) <= slack_l) {
        east += sc.b1 / (2.0 * hl);
        west -= sc.b1 / (2.0 * hl);
      } else if (sc.b1 >= 0.0) {
        center += sc.b1 / hl;
        west -= sc.b1 / hl;
      } else {
        center -= sc.b1 / hl;
        east += sc.b1 / hl;
      }
      const double slack_t = ct - acm;
      if (std::abs(sc.b2) / (2.0 * ht) <= slack_t) {
        north += sc.b2 / (2.0 * ht);
        south -= sc.b2 / (2.0 * ht);
      } else if (sc.b2 >= 0.0) {
        center += sc.b2 / ht;
        south -= sc.b2 / ht;
      } else {
        center -= sc.b2 / ht;
        north += sc.b2 / ht;
      }

      const double scale = 1.0 / center;
      trips.emplace_back(row, row, 1.0);
      trips.emplace_back(row, grid.idx(i - 1, j), scale * west);
      trips.emplace_back(row, grid.idx(i + 1, j), scale * east);
      trips.emplace_back(row, grid.idx(i, j - 1), scale * south);
      trips.emplace_back(row, grid.idx(i, j + 1), scale * north);
      if (sc.a12 >= 0.0) {
        trips.emplace_back(row, grid.idx(i + 1, j + 1), scale * corner);
        trips.emplace_back(row, grid.idx(i - 1, j - 1), scale * corner);
      } else {
        trips.emplace_back(row, grid.idx(i + 1, j - 1), scale * corner);
        trips.emplace_back(row, grid.idx(i - 1, j + 1), scale * corner);
      }
      sys.rhs[row] = scale * f(spec.point(lam, th));
    }
  }

  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  return sys;
}

struct GridSolution {
  StripGrid grid;
  Eigen::VectorXd values;
  std::vector<double> cross_max, cross_min, cross_osc;  ///< per theta_j over lambda
  double residual_norm = 0.0;
  int dominance_count = 0;

  double at(int i, int j) const { return values[grid.idx(i, j)]; }
};

namespace detail {

inline void fill_profiles(GridSolution& sol) {
  sol.cross_max.assign(sol.grid.n_theta, 0.0);
  sol.cross_min.assign(sol.grid.n_theta, 0.0);
  sol.cross_osc.assign(sol.grid.n_theta, 0.0);
  for (int j = 0; j < sol.grid.n_theta; ++j) {
    double lo = sol.at(0, j), hi = lo;
    for (int i = 1; i < sol.grid.n_lambda; ++i) {
      lo = std::min(lo, sol.at(i, j));
      hi = std::max(hi, sol.at(i, j));
    }
    sol.cross_max[j] = hi;
    sol.cross_min[j] = lo;
    sol.cross_osc[j] = hi - lo;
  }
}

}  // namespace detail

/// Direct factorization for moderate systems; ILUT-preconditioned BiCGSTAB
/// with iterative refinement above that (the equilibrated rows keep the
/// preconditioner well behaved). Residual above 1e-10 relative is a failure.
inline GridSolution solve(const LinearSystem& sys) {
  const int n = static_cast<int>(sys.A.rows());
  Eigen::VectorXd x;
  bool solved = false;

  if (n > 120000) {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
    it.preconditioner().setDroptol(1e-7);
    it.preconditioner().setFillfactor(12);
    it.setTolerance(1e-14);
    it.setMaxIterations(600);
    it.compute(sys.A);
    if (it.info() == Eigen::Success) {
      x = it.solve(sys.rhs);
      double res = (sys.A * x - sys.rhs).norm() / std::max(1e-300, sys.rhs.norm());
      for (int pass = 0; pass < 6 && res > 1e-12; ++pass) {
        const Eigen::VectorXd r = sys.rhs - sys.A * x;
        x += it.solve(r);
        res = (sys.A * x - sys.rhs).norm() / std::max(1e-300, sys.rhs.norm());
      }
      solved = res <= 1e-10;
    }
  }
  if (!solved) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.A);
    require(lu.info() == Eigen::Success, ErrorCode::SolveFailure, "sparse factorization failed");
    x = lu.solve(sys.rhs);
  }

  GridSolution sol;
  sol.grid = sys.grid;
  sol.values = std::move(x);
  sol.dominance_count = sys.dominance_count;
  const double rhs_norm = std::max(1e-300, sys.rhs.norm());
  sol.residual_norm = (sys.A * sol.values - sys.rhs).norm() / rhs_norm;
  require(sol.residual_norm <= 1e-10, ErrorCode::SolveFailure,
          "linear solve residual above tolerance");
  detail::fill_profiles(sol);
  return sol;
}

/// Per-theta cross-section statistics of the discrete solution.
struct CrossProfiles {
  std::vector<double> theta;
  std::vector<double> max_pos;  ///< max of u^+
  std::vector<double> max_neg;  ///< max of u^-
  std::vector<double> max_abs;
  std::vector<double> osc;
};

inline CrossProfiles cross_profiles(const GridSolution& sol) {
  CrossProfiles cp;
  const int nt = sol.grid.n_theta;
  cp.theta.resize(nt);
  cp.max_pos.resize(nt);
  cp.max_neg.resize(nt);
  cp.max_abs.resize(nt);
  cp.osc.resize(nt);
  for (int j = 0; j < nt; ++j) {
    cp.theta[j] = sol.grid.theta(j);
    cp.max_pos[j] = std::max(0.0, sol.cross_max[j]);
    cp.max_neg[j] = std::max(0.0, -sol.cross_min[j]);
    cp.max_abs[j] = std::max(cp.max_pos[j], cp.max_neg[j]);
    cp.osc[j] = sol.cross_osc[j];
  }
  return cp;
}

}  // namespace winding
