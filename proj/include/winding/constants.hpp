#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "winding/geometry.hpp"
#include "winding/quadrature.hpp"

namespace winding {

// ---------------------------------------------------------------------------
// Ellipticity / drift metadata

enum class DriftGrowthKind { Constant, AlphaLog, Power, Unknown };

struct BoundedDrift {
  double M2 = 0.0;
};

/// Unbounded drift envelope |b| <= m(theta) for theta >= ThetaBar, together
/// with the kappa used in the divergence condition and a symbolic tag for the
/// shipped presets (the divergence of the kappa^m integral cannot be decided
/// numerically).
struct UnboundedDrift {
  std::function<double(double)> m;
  DriftGrowthKind kind = DriftGrowthKind::Unknown;
  double param = 0.0;  ///< alpha for AlphaLog, exponent for Power, value for Constant
  double kappa = 0.5;
  double ThetaBar = 0.0;
};

struct EllipticityData {
  double c0 = 1.0;
  double M1 = 2.0;
  std::variant<BoundedDrift, UnboundedDrift> drift = BoundedDrift{0.0};

  bool bounded() const { return std::holds_alternative<BoundedDrift>(drift); }
  double M2() const {
    require(bounded(), ErrorCode::InvalidArgument, "drift is not of the bounded kind");
    return std::get<BoundedDrift>(drift).M2;
  }
  const UnboundedDrift& unbounded() const {
    require(!bounded(), ErrorCode::InvalidArgument, "drift is not of the unbounded kind");
    return std::get<UnboundedDrift>(drift);
  }
};

enum class Mt1Verdict { Pass, Fail, Unknown };

inline const char* to_string(Mt1Verdict v) {
  switch (v) {
    case Mt1Verdict::Pass: return "PASS";
    case Mt1Verdict::Fail: return "FAIL";
    case Mt1Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

/// Divergence of the integral of kappa^m over the tail, decided symbolically
/// for the shipped presets.
inline Mt1Verdict mt1_check(DriftGrowthKind kind, double param, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) return Mt1Verdict::Fail;
  switch (kind) {
    case DriftGrowthKind::Constant:
      return Mt1Verdict::Pass;  // constant integrand
    case DriftGrowthKind::AlphaLog:
      // kappa^(alpha ln t) = t^(-alpha ln(1/kappa))
      return param * std::log(1.0 / kappa) <= 1.0 ? Mt1Verdict::Pass : Mt1Verdict::Fail;
    case DriftGrowthKind::Power:
      return Mt1Verdict::Fail;  // super-logarithmic growth
    case DriftGrowthKind::Unknown:
      return Mt1Verdict::Unknown;
  }
  return Mt1Verdict::Unknown;
}

// ---------------------------------------------------------------------------
// Growth-lemma constants

/// Contraction factor of the general growth lemma,
///   eta = 1 - ((d*/D_S)^s - (d*/d_Gamma)^s),
/// guaranteed in (0,1) under 0 < d* <= D_S < d_Gamma and s > 0.
inline double general_eta(double d_star, double D_S, double d_gamma, double s) {
  require(d_star > 0.0, ErrorCode::InvalidArgument, "d_star must be positive");
  require(s > 0.0, ErrorCode::InvalidArgument, "exponent s must be positive");
  require(d_star <= D_S, ErrorCode::OrderingViolation, "requires d_star <= D_S");
  require(D_S < d_gamma, ErrorCode::OrderingViolation, "requires D_S < d_Gamma");
  return 1.0 - (std::pow(d_star / D_S, s) - std::pow(d_star / d_gamma, s));
}

/// Lower admissibility bound for the barrier offset d*: the larger of the
/// tangent-line condition and the thickness condition.
inline double decond_lower_bound(double r_star, double d0, double theta_star) {
  const double c = std::cos(theta_star);
  const double b1 = (r_star + d0) * (1.0 / c - 1.0);
  const double denom = (r_star + d0) * (1.0 - c) - d0;
  require(denom > 0.0, ErrorCode::NoAdmissibleTheta,
          "cos(theta*) < r*/(r*+d0) must hold for the thickness bound");
  const double b2 = d0 * d0 / (2.0 * denom);
  return std::max(b1, b2);
}

inline double hat_d(double d_star, double d0, double r_star, double theta_star) {
  return std::sqrt(d_star * d_star +
                   2.0 * d_star * (r_star + d0) * (1.0 - std::cos(theta_star)));
}

/// Interior maximizer of a^s - b^s over s > 0, for 0 < b < a < 1.
inline double optimal_exponent(double a, double b) {
  require(0.0 < b && b < a && a < 1.0, ErrorCode::InvalidArgument,
          "optimal_exponent needs 0 < b < a < 1");
  return std::log(std::log(b) / std::log(a)) / std::log(a / b);
}

/// One coherent bundle of decay constants for the bounded-drift case.
struct GrowthConstants {
  double d0 = 0.0;
  double theta_star = 0.0;
  double d_star = 0.0;
  double d_hat = 0.0;
  double s = 0.0;
  double eta_star = 0.0;
  double nu = 0.0;            ///< decay rate per radian
  double C_star = 0.0;        ///< leading constant, 1/eta_star
  double nu_prime = 0.0;      ///< decay rate per unit arc-distance
  double C_star_prime = 0.0;  ///< leading constant in arc-distance form
};

struct AnnulusOptions {
  std::optional<double> theta_star;   ///< fixed half-step; golden-section search if absent
  std::optional<double> d0;           ///< annulus thickness; defaults to r_bar - r_star
  bool optimize_d_star = false;       ///< sweep d* instead of taking the admissibility bound
};

namespace detail {

struct EtaEval {
  double d_star = 0.0, d_hat = 0.0, s = 0.0, eta = 1.0, nu = 0.0;
  bool valid = false;
};

inline EtaEval eval_eta(double r_star, double d0, double theta_star, double d_star, double c0,
                        double M1, double M2) {
  EtaEval ev;
  ev.d_star = d_star;
  ev.d_hat = hat_d(d_star, d0, r_star, theta_star);
  const double a = d_star / (d_star + d0);
  const double b = d_star / ev.d_hat;
  if (!(b < a && a < 1.0 && b > 0.0)) return ev;  // degenerate: no contraction
  const double s_floor = (M1 + M2 * (r_star + d0 + d_star)) / c0 - 2.0;
  ev.s = std::max(optimal_exponent(a, b), std::max(s_floor, 1e-12));
  ev.eta = 1.0 - (std::pow(a, ev.s) - std::pow(b, ev.s));
  if (!(ev.eta > 0.0 && ev.eta < 1.0)) return ev;
  ev.nu = std::log(1.0 / ev.eta) / theta_star;
  ev.valid = true;
  return ev;
}

template <class F>
double golden_max(F score, double lo, double hi, int iters = 64) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = score(x1), f2 = score(x2);
  for (int k = 0; k < iters; ++k) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = score(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = score(x1);
    }
  }
  return f1 < f2 ? x2 : x1;
}

inline EtaEval pick_d_star(double r_star, double d0, double theta_star, double c0, double M1,
                           double M2, bool optimize) {
  const double lb = decond_lower_bound(r_star, d0, theta_star);
  EtaEval at_lb = eval_eta(r_star, d0, theta_star, lb, c0, M1, M2);
  if (!optimize && at_lb.valid && at_lb.eta <= 1.0 - 1e-9) return at_lb;
  // The admissibility bound can sit exactly on the degenerate edge where the
  // comparison spheres touch and the contraction disappears; sweep d* there.
  auto score = [&](double logd) {
    EtaEval ev = eval_eta(r_star, d0, theta_star, std::exp(logd), c0, M1, M2);
    return ev.valid ? ev.nu : -1.0;
  };
  const double lo = std::log(lb * (1.0 + 1e-9));
  const double hi = std::log(lb * 1e4 + 10.0 * (r_star + d0));
  const double best = golden_max(score, lo, hi);
  EtaEval ev = eval_eta(r_star, d0, theta_star, std::exp(best), c0, M1, M2);
  return ev.valid && (!at_lb.valid || ev.nu >= at_lb.nu) ? ev : at_lb;
}

}  // namespace detail

/// Growth/decay constants for the planar annulus lemma applied to the whole
/// domain. theta* is chosen to maximize the decay rate per radian when not
/// pinned by the caller.
inline GrowthConstants annulus_constants(const DomainSpec& spec, const EllipticityData& ell,
                                         AnnulusOptions opt = {}) {
  require(ell.bounded(), ErrorCode::InvalidArgument,
          "annulus_constants needs the bounded-drift variant");
  const double r_star = spec.r_star;
  const double d0 = opt.d0.value_or(spec.r_bar - spec.r_star);
  require(d0 > 0.0, ErrorCode::InvalidArgument, "annulus thickness d0 must be positive");
  const double c0 = ell.c0, M1 = ell.M1, M2 = ell.M2();

  const double theta_lo = std::acos(r_star / (r_star + d0));
  require(theta_lo < kPi / 2.0, ErrorCode::NoAdmissibleTheta, "no admissible theta* window");

  double theta_star;
  if (opt.theta_star) {
    theta_star = *opt.theta_star;
    require(theta_star > 0.0 && theta_star < kPi / 2.0 &&
                std::cos(theta_star) < r_star / (r_star + d0),
            ErrorCode::NoAdmissibleTheta, "theta* violates the cosine condition");
  } else {
    // stay clear of both window edges: the left edge degenerates the thickness
    // bound, the right edge sends d* (and the barrier exponent) to infinity
    const double width = kPi / 2.0 - theta_lo;
    const double lo = theta_lo + 0.02 * width;
    const double hi = kPi / 2.0 - 0.02 * width;
    auto score = [&](double ts) {
      detail::EtaEval ev = detail::pick_d_star(r_star, d0, ts, c0, M1, M2, opt.optimize_d_star);
      return ev.valid ? ev.nu : -1.0;
    };
    theta_star = detail::golden_max(score, lo, hi);
  }

  detail::EtaEval ev =
      detail::pick_d_star(r_star, d0, theta_star, c0, M1, M2, opt.optimize_d_star);
  require(ev.valid, ErrorCode::NoAdmissibleTheta, "no admissible (theta*, d*) pair found");

  GrowthConstants gc;
  gc.d0 = d0;
  gc.theta_star = theta_star;
  gc.d_star = ev.d_star;
  gc.d_hat = ev.d_hat;
  gc.s = ev.s;
  gc.eta_star = ev.eta;
  gc.nu = ev.nu;
  gc.C_star = 1.0 / ev.eta;
  const double denom = spec.r_bar + spec.mu0;
  gc.nu_prime = gc.nu / denom;
  gc.C_star_prime = gc.C_star * std::exp(gc.nu * spec.L_star / denom);
  return gc;
}

// ---------------------------------------------------------------------------
// Envelopes

/// Pointwise minimum of the flat bound and the exponential decay bound.
struct DecayEnvelope {
  double M0 = 0.0;
  double C_star = 1.0;
  double nu = 0.0;
  double theta0 = 0.0;
  double operator()(double theta) const {
    return std::min(M0, C_star * M0 * std::exp(-nu * (theta - theta0)));
  }
};

inline DecayEnvelope decay_envelope(const GrowthConstants& gc, double M0, double theta0) {
  require(M0 >= 0.0, ErrorCode::InvalidArgument, "M0 must be nonnegative");
  return DecayEnvelope{M0, gc.C_star, gc.nu, theta0};
}

/// Decay bound indexed by arc-distance. The tightened variant substitutes the
/// small-epsilon tail constants (valid from angle theta_eps on) and reports
/// the reduced spread factor k_eps.
struct ArcEnvelope {
  double M0 = 0.0;
  double C_prime = 1.0;
  double nu_prime = 0.0;
  double k_star = 1.0;
  bool tightened = false;
  double k_eps = 0.0;
  double theta_eps = 0.0;
  double L_eps = 0.0;
  double operator()(double ell) const { return C_prime * M0 * std::exp(-nu_prime * ell); }
};

inline ArcEnvelope arc_envelope(const DomainSpec& spec, const GrowthConstants& gc, double M0,
                                std::optional<double> tighten = std::nullopt) {
  require(spec.has_arc_data(), ErrorCode::MissingArcData, "domain lacks arc-length metadata");
  require(M0 >= 0.0, ErrorCode::InvalidArgument, "M0 must be nonnegative");
  ArcEnvelope env;
  env.M0 = M0;
  env.C_prime = gc.C_star_prime;
  env.nu_prime = gc.nu_prime;
  env.k_star = spec.k_star;
  if (!tighten) return env;

  const double eps = *tighten;
  require(eps > 0.0, ErrorCode::InvalidArgument, "tighten must be positive");
  // first angle from which both radii sit within eps/2 of the limit circle
  // and the derivatives within eps/2 of their tail bound
  const int n = 4096;
  const double t0 = spec.theta0(), t1 = spec.theta_max;
  int first_ok = -1;
  for (int k = n; k >= 0; --k) {
    const double th = t0 + (t1 - t0) * k / n;
    const bool ok =
        spec.curves.r1.value(th) <= spec.r_star + eps / 2.0 &&
        spec.curves.r2.value(th) <= spec.r_star + eps / 2.0 &&
        std::abs(spec.curves.r1.deriv(th)) <= spec.mu_star + eps / 2.0 &&
        std::abs(spec.curves.r2.deriv(th)) <= spec.mu_star + eps / 2.0;
    if (!ok) break;
    first_ok = k;
  }
  require(first_ok >= 0, ErrorCode::InvalidArgument,
          "no tail window satisfies the epsilon conditions inside [theta0, theta_max]");
  env.theta_eps = t0 + (t1 - t0) * first_ok / n;
  env.L_eps =
      spec.r_bar * (env.theta_eps - t0) +
      std::max(detail::integrate_abs_deriv(spec.curves.r1, t0, env.theta_eps, 1e-10),
               detail::integrate_abs_deriv(spec.curves.r2, t0, env.theta_eps, 1e-10));
  const double denom = spec.r_star + spec.mu_star + eps;
  env.tightened = true;
  env.nu_prime = gc.nu / denom;
  env.C_prime = gc.C_star * std::exp(gc.nu * env.L_eps / denom);
  env.k_star = denom / spec.r_star;
  env.k_eps = denom / spec.r_star + eps;
  return env;
}

/// Oscillation bound: the mixed boundary/initial envelope clamped to [0, osc0].
struct OscillationEnvelope {
  double osc_gamma = 0.0;
  double osc0 = 0.0;
  double C_star = 1.0;
  double nu = 0.0;
  double theta0 = 0.0;
  double operator()(double theta) const {
    const double E = std::exp(-nu * (theta - theta0));
    const double raw = osc_gamma * (1.0 - C_star * E) + C_star * osc0 * E;
    return std::min(osc0, std::max(0.0, raw));
  }
};

inline OscillationEnvelope oscillation_envelope(const GrowthConstants& gc, double osc_gamma,
                                                double osc0, double theta0) {
  require(osc_gamma >= 0.0 && osc0 >= 0.0, ErrorCode::InvalidArgument,
          "oscillations must be nonnegative");
  return OscillationEnvelope{osc_gamma, osc0, gc.C_star, gc.nu, theta0};
}

// ---------------------------------------------------------------------------
// Unbounded drift constants

struct UnboundedConstants {
  double Theta0 = 0.0;      ///< angle from which the integral envelope starts
  double nu_bar = 0.0;      ///< rate multiplying the kappa^m integral
  double kappa_bar = 0.0;
  double d_bar0 = 0.0;
  double d_bar_star = 0.0;
  double theta_bar_star = 0.0;
  double lambda0 = 0.0;
  int N = 0;
  double kappa = 0.0;
  double ThetaBar = 0.0;
  std::function<double(double)> m;
};

/// Implements the unbounded-drift construction: halved step, a thin collar of
/// thickness eps*, and a barrier offset chosen so the contraction base kappa_bar
/// raised to the sampled-drift exponent stays above kappa.
inline UnboundedConstants unbounded_constants(const DomainSpec& spec, const EllipticityData& ell,
                                              double theta_star) {
  require(!ell.bounded(), ErrorCode::InvalidArgument,
          "unbounded_constants needs the unbounded-drift variant");
  const UnboundedDrift& ub = ell.unbounded();
  const double kappa = ub.kappa;
  require(kappa > 0.0 && kappa < 1.0, ErrorCode::InvalidArgument, "kappa must lie in (0,1)");
  require(theta_star > 0.0 && theta_star < kPi / 2.0, ErrorCode::InvalidArgument,
          "theta* must lie in (0, pi/2)");
  const double r_star = spec.r_star;
  const double d0 = spec.r_bar - spec.r_star;
  const double c0 = ell.c0, M1 = ell.M1;
  const double tbs = theta_star / 2.0;

  const double cap = std::min({d0, c0 * std::log(1.0 / kappa),
                               r_star * (1.0 / std::cos(tbs) - 1.0)});
  require(cap > 0.0, ErrorCode::NoAdmissibleEpsilon, "no admissible eps* exists");
  const double eps_star = 0.5 * cap;

  // smallest sampled angle from which r2 stays within the eps* collar
  const int n = 8192;
  const double t0 = spec.theta0(), t1 = spec.theta_max;
  int first_ok = -1;
  for (int k = n; k >= 0; --k) {
    const double th = t0 + (t1 - t0) * k / n;
    if (spec.curves.r2.value(th) > r_star + eps_star) break;
    first_ok = k;
  }
  require(first_ok >= 0, ErrorCode::NoAdmissibleEpsilon,
          "r2 never enters the eps* collar inside [theta0, theta_max]");
  const double collar_angle = t0 + (t1 - t0) * first_ok / n;
  const double start = std::max(collar_angle, ub.ThetaBar);
  const int N = std::max(0, static_cast<int>(std::ceil((start - t0) / theta_star - 1e-12)));
  const double tbar0 = t0 + N * theta_star;

  // barrier offset: admissibility bound, the kappa_bar >= kappa bound, and the
  // minimizer of zbar (equality in the admissibility bound kills the
  // contraction, so we sit at the zbar-optimal point instead of the infimum)
  const double cbar = (r_star + eps_star) * (1.0 - std::cos(tbs));
  require(cbar > eps_star, ErrorCode::NoAdmissibleEpsilon, "collar cosine condition failed");
  const double lb = decond_lower_bound(r_star, eps_star, tbs);
  const double kappa_lb = kappa * eps_star / (1.0 - kappa);
  const double z_opt = eps_star * cbar / (cbar - eps_star);
  double d_bar = std::max({lb * (1.0 + 1e-12), kappa_lb, z_opt});

  auto kk2 = [&](double d) {
    return std::pow(d / (d + eps_star), (r_star + eps_star + d) / c0);
  };
  if (kk2(d_bar) < kappa) {
    double lo = d_bar, hi = d_bar;
    bool found = false;
    for (int k = 0; k < 64; ++k) {
      hi *= 2.0;
      if (kk2(hi) >= kappa) {
        found = true;
        break;
      }
      lo = hi;
    }
    require(found, ErrorCode::KappaBarUnreachable,
            "kappa_bar condition unreachable for any tested d_bar*");
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (kk2(mid) >= kappa ? hi : lo) = mid;
    }
    d_bar = hi;
  }

  UnboundedConstants uc;
  uc.theta_bar_star = tbs;
  uc.d_bar0 = eps_star;
  uc.d_bar_star = d_bar;
  uc.kappa_bar = d_bar / (d_bar + eps_star);
  require(uc.kappa_bar >= kappa && uc.kappa_bar < 1.0, ErrorCode::KappaBarUnreachable,
          "kappa_bar left [kappa, 1)");
  const double dhat = hat_d(d_bar, eps_star, r_star, tbs);
  const double zbar = (d_bar + eps_star) / dhat;
  require(zbar < 1.0, ErrorCode::KappaBarUnreachable, "zbar >= 1: degenerate configuration");
  const double B1 = ub.m(tbar0 + 2.0 * tbs);
  const double s1 = (M1 + B1 * (r_star + eps_star + d_bar)) / c0;
  uc.lambda0 = 1.0 - std::pow(zbar, s1);
  uc.nu_bar = (uc.lambda0 / tbs) * std::pow(kappa, M1 / c0);
  uc.N = N;
  uc.Theta0 = t0 + (N + 1) * theta_star;
  uc.kappa = kappa;
  uc.ThetaBar = ub.ThetaBar;
  uc.m = ub.m;
  return uc;
}

/// theta -> M0 * min(1, exp(-nu_bar * integral of kappa^m from Theta0)).
struct UnboundedEnvelope {
  double M0 = 0.0;
  UnboundedConstants uc;
  double operator()(double theta) const {
    if (M0 == 0.0) return 0.0;
    if (theta <= uc.Theta0) return M0;
    const double integral = integrate(
        [&](double z) { return std::pow(uc.kappa, uc.m(std::max(z, uc.ThetaBar))); },
        uc.Theta0, theta);
    return M0 * std::min(1.0, std::exp(-uc.nu_bar * integral));
  }
};

inline UnboundedEnvelope unbounded_envelope(const UnboundedConstants& uc, double M0) {
  require(M0 >= 0.0, ErrorCode::InvalidArgument, "M0 must be nonnegative");
  return UnboundedEnvelope{M0, uc};
}

// ---------------------------------------------------------------------------
// Sequence dichotomy

/// Classification of a finite sequence against the two-sided contraction
/// inequality a_i <= lambda_i * max(a_{i-1}, a_{i+1}).
struct DichotomyBranch {
  enum class Tag { Decay, Growth, Violation } tag = Tag::Violation;
  std::vector<double> products;      ///< Decay: partial products lambda_1..lambda_i
  int i_star = -1;                   ///< Growth: first index of the increasing tail
  std::vector<double> lower_bounds;  ///< Growth: a_{i*} / prod(lambda) from i*+1 on
  int violation_index = -1;
};

/// Checks the contraction inequality at every interior index, then matches the
/// sequence to the decaying or the growing branch. Interior index i pairs with
/// lambda[i-1], so a has exactly two more entries than lambda.
inline DichotomyBranch classify_sequence(const std::vector<double>& a,
                                         const std::vector<double>& lambda) {
  require(a.size() == lambda.size() + 2 && a.size() >= 3, ErrorCode::LengthMismatch,
          "need len(a) = len(lambda) + 2 >= 3");
  const int n = static_cast<int>(a.size()) - 1;  // a_0 .. a_n
  auto lam = [&](int i) { return lambda[static_cast<std::size_t>(i - 1)]; };
  for (int i = 0; i <= n; ++i)
    require(a[static_cast<std::size_t>(i)] >= 0.0, ErrorCode::InvalidArgument,
            "sequence entries must be nonnegative");
  for (int i = 1; i <= n - 1; ++i)
    require(lam(i) > 0.0 && lam(i) < 1.0, ErrorCode::InvalidArgument,
            "lambda entries must lie in (0,1)");

  const double rel = 1e-12;
  DichotomyBranch out;
  for (int i = 1; i <= n - 1; ++i) {
    const double bound = lam(i) * std::max(a[i - 1], a[i + 1]);
    if (!leq_rel(a[i], bound, rel)) {
      out.tag = DichotomyBranch::Tag::Violation;
      out.violation_index = i;
      return out;
    }
  }

  bool decay = true;
  for (int i = 1; i <= n - 1; ++i)
    if (!leq_rel(a[i], lam(i) * a[i - 1], rel)) {
      decay = false;
      break;
    }
  if (decay) {
    out.tag = DichotomyBranch::Tag::Decay;
    double prod = 1.0;
    for (int i = 1; i <= n - 1; ++i) {
      prod *= lam(i);
      out.products.push_back(prod);
    }
    return out;
  }

  for (int istar = 1; istar <= n - 1; ++istar) {
    if (!(a[istar] > 0.0)) continue;
    bool ok = true;
    for (int i = istar + 1; i <= n && ok; ++i)
      ok = leq_rel(a[i - 1] / lam(i - 1), a[i], rel);
    if (ok) {
      out.tag = DichotomyBranch::Tag::Growth;
      out.i_star = istar;
      double denom = 1.0;
      for (int i = istar + 1; i <= n; ++i) {
        denom *= lam(i - 1);
        out.lower_bounds.push_back(a[istar] / denom);
      }
      return out;
    }
  }
  // the two-sided inequality admits exactly the two branches; reaching this
  // point means the tolerance split a borderline case — report it as such
  out.tag = DichotomyBranch::Tag::Violation;
  out.violation_index = n - 1;
  return out;
}

// ---------------------------------------------------------------------------
// Inhomogeneous constants

struct InhomogeneousConstants {
  double K0 = 0.0;
  double eps = 0.0;
  double K1 = 0.0;
  double d1 = 0.0;  ///< sampled sup of |x1| over the closed region
};

inline InhomogeneousConstants inhomogeneous_constants_from(double d1,
                                                           const EllipticityData& ell) {
  require(ell.bounded(), ErrorCode::InvalidArgument,
          "inhomogeneous_constants needs the bounded-drift variant");
  InhomogeneousConstants ic;
  ic.d1 = d1;
  ic.K0 = (1.0 + ell.M2()) / ell.c0;
  ic.eps = std::exp(-ic.K0 * d1);
  ic.K1 = std::exp(2.0 * ic.K0 * d1) / ic.K0;
  return ic;
}

inline InhomogeneousConstants inhomogeneous_constants(const DomainSpec& spec,
                                                      const EllipticityData& ell) {
  double d1 = 0.0;
  const int n = 8192;
  for (int k = 0; k <= n; ++k) {
    const double th = spec.theta0() + (spec.theta_max - spec.theta0()) * k / n;
    const double c = std::abs(std::cos(th));
    d1 = std::max(d1, spec.curves.r2.value(th) * c);
  }
  return inhomogeneous_constants_from(d1, ell);
}

// ---------------------------------------------------------------------------
// Verbatim re-checks (used by tests and the acceptance suite)

inline bool verify_growth_constants(const DomainSpec& spec, const EllipticityData& ell,
                                    const GrowthConstants& gc, std::string* why = nullptr) {
  std::ostringstream os;
  bool ok = true;
  const double r_star = spec.r_star;
  auto check = [&](bool c, const char* name) {
    if (!c) {
      ok = false;
      os << name << " ";
    }
  };
  check(std::cos(gc.theta_star) < r_star / (r_star + gc.d0), "coscond");
  const double lb = decond_lower_bound(r_star, gc.d0, gc.theta_star);
  check(gc.d_star >= lb * (1.0 - 1e-12), "decond");
  const double ns3 = (ell.M1 + ell.M2() * (r_star + gc.d0 + gc.d_star)) / ell.c0 - 2.0;
  check(gc.s > 0.0 && gc.s >= ns3 - 1e-12 * std::abs(ns3), "ns3");
  const double dh = hat_d(gc.d_star, gc.d0, r_star, gc.theta_star);
  check(std::abs(dh - gc.d_hat) <= 1e-12 * dh, "hatd");
  const double eta = general_eta(gc.d_star, gc.d_star + gc.d0, gc.d_hat, gc.s);
  check(std::abs(eta - gc.eta_star) <= 1e-12, "estar");
  check(gc.eta_star > 0.0 && gc.eta_star < 1.0, "eta_range");
  if (why) *why = os.str();
  return ok;
}

}  // namespace winding
