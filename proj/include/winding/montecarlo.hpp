#pragma once

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "winding/operator.hpp"
#include "winding/solver.hpp"

namespace winding {

/// Walker parameters. dt = 0 selects the default (min gap)^2 / (8 M1) step.
struct WalkerConfig {
  double dt = 0.0;
  std::size_t n_walkers = 100000;
  std::uint64_t seed = 1;
  std::size_t max_steps = 2000000;
  double snap_tol = 1e-12;
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n_exit_gamma = 0;
  std::size_t n_exit_inner = 0;  ///< exits through the theta0 cross-section
  std::size_t n_exit_far = 0;    ///< exits through the theta_max cross-section
  std::size_t n_capped = 0;
  double dt_used = 0.0;
};

namespace detail {

/// Symmetric square root of a 2x2 SPD matrix, closed form.
inline Mat2 sqrt_spd(const Mat2& A) {
  const double det = A.determinant();
  const double s = std::sqrt(std::max(0.0, det));
  const double t = std::sqrt(A.trace() + 2.0 * s);
  return (A + s * Mat2::Identity()) / t;
}

struct ChunkResult {
  double sum = 0.0, sumsq = 0.0;
  std::size_t n_gamma = 0, n_inner = 0, n_far = 0, n_capped = 0;
};

}  // namespace detail

/// Monte Carlo estimate of the Dirichlet solution of L u = 0 at x0.
///
/// The operator convention L u = -sum a_ij D_ij u + b . grad u means the
/// associated diffusion has drift -b and covariance 2A; the Euler step is
///   X <- X - b(X) dt + sqrt(2 dt) * sqrt(A(X)) * xi.
/// Walkers carry the unwrapped angle incrementally, so crossing the thin gap
/// into an adjacent winding registers as a gamma exit.
inline McEstimate estimate(const CoefficientField& field, const DomainSpec& spec,
                           const BoundaryData& g, const DomainPoint& x0, WalkerConfig cfg) {
  require(cfg.n_walkers >= 1000, ErrorCode::InvalidArgument,
          "walker count below the 10^3 floor");
  const double t0 = spec.theta0(), t1 = spec.theta_max;

  // sampled bounds used for the default step and the step-size guard
  double gap_min = std::numeric_limits<double>::infinity();
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k <= 1024; ++k) {
    const double th = t0 + (t1 - t0) * k / 1024.0;
    gap_min = std::min(gap_min, spec.gap(th));
    const DomainPoint p = spec.point(0.5, th);
    m1 = std::max(m1, field.A(p).trace());
    m2 = std::max(m2, field.b(p).norm());
  }
  double dt = cfg.dt > 0.0 ? cfg.dt : gap_min * gap_min / (8.0 * m1);
  require(dt * m2 <= gap_min / 4.0, ErrorCode::StepTooLarge,
          "drift step exceeds a quarter of the domain thickness");

  auto run_walker = [&](std::uint64_t widx) -> std::pair<double, int> {
    std::uint64_t state = cfg.seed ^ (0x9e3779b97f4a7c15ull * (widx + 1));
    const std::uint64_t s1 = splitmix64(state), s2 = splitmix64(state);
    std::mt19937_64 rng((s1 << 1) ^ s2);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double x1 = x0.x1, x2 = x0.x2, theta = x0.theta;
    const double sq = std::sqrt(2.0 * dt);
    for (std::size_t step = 0; step < cfg.max_steps; ++step) {
      DomainPoint p;
      p.x1 = x1;
      p.x2 = x2;
      p.r = std::hypot(x1, x2);
      p.theta = theta;
      p.lambda = (p.r - spec.curves.r1.value(theta)) / spec.gap(theta);

      const Vec2 b = field.b(p);
      const Mat2 B = detail::sqrt_spd(field.A(p));
      const Vec2 xi(gauss(rng), gauss(rng));
      const Vec2 dx = -b * dt + sq * (B * xi);
      x1 += dx[0];
      x2 += dx[1];
      const double r = std::hypot(x1, x2);
      const double phi = std::atan2(x2, x1);
      theta = phi + kTwoPi * std::round((theta - phi) / kTwoPi);

      // gamma crossings take priority; for small dt a jump across the thin
      // gap must pass a bounding curve first
      const double a1 = spec.curves.r1.value(theta);
      const double a2 = spec.curves.r2.value(theta);
      if (r <= a1) return {g.gamma1(theta), 0};
      if (r >= a2) return {g.gamma2(theta), 0};
      if (theta <= t0) {
        const double lam =
            std::clamp((r - spec.curves.r1.value(t0)) / spec.gap(t0), 0.0, 1.0);
        return {g.at_theta0(lam), 1};
      }
      if (theta >= t1) {
        const double lam =
            std::clamp((r - spec.curves.r1.value(t1)) / spec.gap(t1), 0.0, 1.0);
        return {g.at_theta_max(lam), 2};
      }
    }
    return {0.0, 3};  // capped
  };

  // fixed-size chunks combined in index order keep the result independent of
  // the thread schedule
  const std::size_t chunk = 1024;
  const std::size_t n_chunks = (cfg.n_walkers + chunk - 1) / chunk;
  std::vector<detail::ChunkResult> parts(n_chunks);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(hw, n_chunks));

  auto work = [&](unsigned tid) {
    for (std::size_t c = tid; c < n_chunks; c += n_threads) {
      detail::ChunkResult part;
      const std::size_t lo = c * chunk;
      const std::size_t hi = std::min(cfg.n_walkers, lo + chunk);
      for (std::size_t wdx = lo; wdx < hi; ++wdx) {
        auto [val, kind] = run_walker(wdx);
        switch (kind) {
          case 0: ++part.n_gamma; break;
          case 1: ++part.n_inner; break;
          case 2: ++part.n_far; break;
          default: ++part.n_capped; continue;
        }
        part.sum += val;
        part.sumsq += val * val;
      }
      parts[c] = part;
    }
  };
  if (n_threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned tdx = 0; tdx < n_threads; ++tdx) pool.emplace_back(work, tdx);
    for (auto& t : pool) t.join();
  }

  McEstimate est;
  est.dt_used = dt;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& part : parts) {
    sum += part.sum;
    sumsq += part.sumsq;
    est.n_exit_gamma += part.n_gamma;
    est.n_exit_inner += part.n_inner;
    est.n_exit_far += part.n_far;
    est.n_capped += part.n_capped;
  }
  const std::size_t n = est.n_exit_gamma + est.n_exit_inner + est.n_exit_far;
  if (n == 0) {
    est.mean = std::numeric_limits<double>::quiet_NaN();
    est.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (sumsq - static_cast<double>(n) * est.mean * est.mean) /
                          static_cast<double>(n - 1));
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

inline std::vector<McEstimate> batch_estimate(const CoefficientField& field,
                                              const DomainSpec& spec, const BoundaryData& g,
                                              const std::vector<DomainPoint>& points,
                                              const WalkerConfig& cfg) {
  std::vector<McEstimate> out;
  out.reserve(points.size());
  for (const DomainPoint& p : points) out.push_back(estimate(field, spec, g, p, cfg));
  return out;
}

}  // namespace winding
