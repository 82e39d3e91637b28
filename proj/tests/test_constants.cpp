#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "winding/constants.hpp"
#include "winding/operator.hpp"
#include "winding/presets.hpp"

using namespace winding;

namespace {

DomainSpec synthetic_spec(double r_star, double r_bar, double mu0, double L_star) {
  DomainSpec spec;
  spec.r_star = r_star;
  spec.r_bar = r_bar;
  spec.mu0 = mu0;
  spec.mu_star = 0.0;
  spec.L_star = L_star;
  spec.k_star = (r_bar + mu0) / r_star;
  return spec;
}

EllipticityData laplacian_ell() {
  EllipticityData ell;
  ell.c0 = 1.0;
  ell.M1 = 2.0;
  ell.drift = BoundedDrift{0.0};
  return ell;
}

}  // namespace

TEST_CASE("general eta formula") {
  // d*/D_S = 1 and a huge outer distance push the factor to zero
  CHECK(general_eta(1.0, 1.0, 1e12, 1.0) <= 1e-11);
  CHECK(general_eta(1.0, 2.0, 4.0, 2.0) == Catch::Approx(13.0 / 16.0).epsilon(1e-15));
  CHECK_THROWS_MATCHES(general_eta(1.0, 4.0, 2.0, 1.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::OrderingViolation;
                       }));
  CHECK_THROWS_AS(general_eta(3.0, 2.0, 4.0, 1.0), Error);
}

TEST_CASE("barrier offset admissibility bound") {
  // r*=1, d0=0.2, theta*=0.6: the thickness branch dominates
  CHECK(std::cos(0.6) < 1.0 / 1.2);
  CHECK(decond_lower_bound(1.0, 0.2, 0.6) ==
        Catch::Approx(2.0839276633409952).epsilon(1e-12));
  // left of the cosine condition the thickness branch blows up
  CHECK_THROWS_MATCHES(decond_lower_bound(1.0, 0.2, 0.3), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NoAdmissibleTheta;
                       }));
}

TEST_CASE("annulus constants for the pure Laplacian") {
  const DomainSpec spec = presets::example_a_spec();
  const EllipticityData ell = laplacian_ell();
  const GrowthConstants gc = annulus_constants(spec, ell);
  // trace bound 2 and ellipticity 1 make the exponent floor vanish
  CHECK(gc.s > 0.0);
  CHECK(gc.eta_star > 0.0);
  CHECK(gc.eta_star < 1.0);
  CHECK(gc.nu > 0.0);
  CHECK(gc.C_star == Catch::Approx(1.0 / gc.eta_star));
  CHECK(gc.nu == Catch::Approx(std::log(1.0 / gc.eta_star) / gc.theta_star));
  CHECK(gc.nu_prime == Catch::Approx(gc.nu / (spec.r_bar + spec.mu0)));
  // L* = 0 for this family, so the arc constant equals C*
  CHECK(gc.C_star_prime == Catch::Approx(gc.C_star));
  std::string why;
  CHECK(verify_growth_constants(spec, ell, gc, &why));
  // the bundle's eta is exactly the general formula at D_S = d*+d0, d_G = d_hat
  CHECK(gc.eta_star == general_eta(gc.d_star, gc.d_star + gc.d0, gc.d_hat, gc.s));
}

TEST_CASE("annulus constants stay in range on random admissible inputs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double r_star = 0.2 + 2.8 * u01(rng);
    const double d0 = 0.05 + 2.0 * u01(rng);
    const DomainSpec spec = synthetic_spec(r_star, r_star + d0, 2.0 * u01(rng), u01(rng));
    EllipticityData ell;
    ell.c0 = 0.2 + 2.0 * u01(rng);
    ell.M1 = 2.0 * ell.c0 * (1.0 + 2.0 * u01(rng));
    ell.drift = BoundedDrift{2.0 * u01(rng)};
    const double lo = std::acos(r_star / (r_star + d0));
    AnnulusOptions opt;
    opt.theta_star = lo + (kPi / 2.0 - lo) * (0.05 + 0.9 * u01(rng));
    const GrowthConstants gc = annulus_constants(spec, ell, opt);
    REQUIRE(gc.eta_star > 0.0);
    REQUIRE(gc.eta_star < 1.0);
    std::string why;
    REQUIRE(verify_growth_constants(spec, ell, gc, &why));
  }
}

TEST_CASE("theta* outside the cosine window is rejected") {
  const DomainSpec spec = presets::example_a_spec();
  AnnulusOptions opt;
  opt.theta_star = 0.5;  // below acos(r*/r_bar) = pi/3
  CHECK_THROWS_MATCHES(annulus_constants(spec, laplacian_ell(), opt), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NoAdmissibleTheta;
                       }));
}

TEST_CASE("decay envelope") {
  GrowthConstants gc;
  gc.eta_star = 0.5;
  gc.C_star = 2.0;
  gc.theta_star = kPi / 4.0;
  gc.nu = std::log(2.0) / gc.theta_star;

  CHECK(decay_envelope(gc, 0.0, 0.0)(3.0) == 0.0);
  CHECK(decay_envelope(gc, 0.7, 1.0)(1.0) == Catch::Approx(0.7));  // flat bound at theta0
  CHECK(decay_envelope(gc, 1.0, 0.0)(kPi) == Catch::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("arc envelope and the tightened tail constants") {
  const DomainSpec spec = presets::example_a_spec();
  const GrowthConstants gc = annulus_constants(spec, laplacian_ell());

  CHECK(arc_envelope(spec, gc, 0.0)(5.0) == 0.0);
  const ArcEnvelope env = arc_envelope(spec, gc, 1.0);
  CHECK(env(0.0) >= 1.0);  // C*' >= C* > 1
  CHECK(env.k_star == Catch::Approx(spec.k_star));

  const ArcEnvelope tight = arc_envelope(spec, gc, 1.0, 0.1);
  CHECK(tight.tightened);
  CHECK(tight.k_eps == Catch::Approx((spec.r_star + 0.1) / spec.r_star + 0.1));
  CHECK(tight.k_eps < spec.k_star);
  CHECK(tight.nu_prime > env.nu_prime);  // steeper decay per unit length in the tail
  CHECK(tight.theta_eps > spec.theta0());
  // tail points: the tightened envelope must still dominate the plain bound
  // derived from the angle envelope (valid from theta_eps on)
  for (double th = tight.theta_eps; th < spec.theta_max; th += 1.0) {
    const double ell = arc_length(spec, 1.0, th);
    const double angle_bound = gc.C_star * std::exp(-gc.nu * (th - spec.theta0()));
    CHECK(tight(ell) >= angle_bound - 1e-12);
  }

  const DomainSpec pod = synthetic_spec(1.0, 2.0, 0.5, 0.0);
  CHECK(arc_envelope(pod, gc, 1.0).k_star == Catch::Approx(2.5));
}

TEST_CASE("arc data is required for arc envelopes") {
  DomainSpec spec = synthetic_spec(1.0, 2.0, 0.5, 0.0);
  spec.mu0 = std::numeric_limits<double>::quiet_NaN();  // no derivative metadata
  GrowthConstants gc;
  gc.C_star = 2.0;
  gc.nu = 0.5;
  CHECK_THROWS_MATCHES(arc_envelope(spec, gc, 1.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::MissingArcData;
                       }));
}

TEST_CASE("oscillation envelope") {
  GrowthConstants gc;
  gc.C_star = 2.0;
  gc.nu = 1.0;
  CHECK(oscillation_envelope(gc, 0.0, 0.0, 0.0)(2.0) == 0.0);
  const OscillationEnvelope env = oscillation_envelope(gc, 1.0, 3.0, 0.0);
  CHECK(env(std::log(4.0)) == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(env(50.0) == Catch::Approx(1.0).epsilon(1e-12));  // tends to the gamma oscillation
  CHECK(env(0.0) <= 3.0);                                 // never above the flat bound
}

TEST_CASE("divergence check of the drift growth presets") {
  CHECK(mt1_check(DriftGrowthKind::Constant, 1.0, 0.5) == Mt1Verdict::Pass);
  CHECK(mt1_check(DriftGrowthKind::AlphaLog, 0.5, 0.2) == Mt1Verdict::Pass);   // 0.5 ln 5 < 1
  CHECK(mt1_check(DriftGrowthKind::AlphaLog, 2.0, 0.2) == Mt1Verdict::Fail);   // 2 ln 5 > 1
  CHECK(mt1_check(DriftGrowthKind::Power, 1.0, 0.5) == Mt1Verdict::Fail);      // m = theta
  CHECK(mt1_check(DriftGrowthKind::Unknown, 0.0, 0.5) == Mt1Verdict::Unknown);
}

TEST_CASE("unbounded constants and envelope") {
  const DomainSpec spec = presets::example_a_spec();
  EllipticityData ell;
  ell.c0 = 1.0;
  ell.M1 = 2.0;
  UnboundedDrift ub;
  ub.kind = DriftGrowthKind::AlphaLog;
  ub.param = 0.5;
  ub.kappa = 0.2;
  ub.ThetaBar = 1.0;
  ub.m = [](double th) { return 0.5 * std::log(std::max(th, 1.0)); };
  ell.drift = ub;

  const UnboundedConstants uc = unbounded_constants(spec, ell, 1.2);
  CHECK(uc.nu_bar > 0.0);
  CHECK(uc.lambda0 > 0.0);
  CHECK(uc.lambda0 < 1.0);
  CHECK(uc.kappa_bar >= 0.2);
  CHECK(uc.kappa_bar < 1.0);
  CHECK(std::pow(uc.kappa_bar, (spec.r_star + uc.d_bar0 + uc.d_bar_star) / ell.c0) >=
        0.2 * (1.0 - 1e-12));
  CHECK(uc.theta_bar_star == Catch::Approx(0.6));
  CHECK(uc.Theta0 > spec.theta0());
  CHECK(uc.Theta0 < spec.theta_max);
  // the collar really contains r2 beyond the selected start
  const double tbar0 = spec.theta0() + uc.N * 1.2;
  for (double th = tbar0; th < spec.theta_max; th += 0.1)
    CHECK(spec.curves.r2.value(th) <= spec.r_star + uc.d_bar0 + 1e-12);

  const UnboundedEnvelope env = unbounded_envelope(uc, 2.0);
  CHECK(env(spec.theta0()) == 2.0);  // flat before Theta0
  CHECK(env(uc.Theta0 + 5.0) < 2.0);
  CHECK(unbounded_envelope(uc, 0.0)(uc.Theta0 + 5.0) == 0.0);
}

TEST_CASE("constant drift growth reduces to a pure exponential envelope") {
  const DomainSpec spec = presets::example_a_spec();
  EllipticityData ell;
  ell.c0 = 1.0;
  ell.M1 = 2.0;
  UnboundedDrift ub;
  ub.kind = DriftGrowthKind::Constant;
  ub.param = 0.5;
  ub.kappa = 0.5;
  ub.ThetaBar = spec.theta0();
  ub.m = [](double) { return 0.5; };
  ell.drift = ub;

  const UnboundedConstants uc = unbounded_constants(spec, ell, 1.2);
  const UnboundedEnvelope env = unbounded_envelope(uc, 1.0);
  const double rate = uc.nu_bar * std::pow(0.5, 0.5);
  // both code paths produce min(M0, M0 e^{-rate (theta - Theta0)})
  DecayEnvelope reference{1.0, 1.0, rate, uc.Theta0};
  for (double th = spec.theta0(); th < spec.theta_max; th += 0.7)
    CHECK(env(th) == Catch::Approx(reference(th)).margin(1e-10));
}

TEST_CASE("collar out of reach raises NoAdmissibleEpsilon") {
  // kappa near 1 shrinks eps* so far that r2 never enters the collar before
  // theta_max
  const DomainSpec spec = presets::example_a_spec(4.5 * kPi);
  EllipticityData ell;
  ell.c0 = 1.0;
  ell.M1 = 2.0;
  UnboundedDrift ub;
  ub.kind = DriftGrowthKind::Constant;
  ub.param = 0.0;
  ub.kappa = 0.999;
  ub.ThetaBar = spec.theta0();
  ub.m = [](double) { return 0.0; };
  ell.drift = ub;
  CHECK_THROWS_MATCHES(unbounded_constants(spec, ell, 1.2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NoAdmissibleEpsilon;
                       }));
}

TEST_CASE("closed-form exponential envelope value") {
  UnboundedConstants uc;
  uc.Theta0 = 3.0;
  uc.nu_bar = 1.0;
  uc.kappa = 0.5;
  uc.ThetaBar = 0.0;
  uc.m = [](double) { return 0.0; };
  CHECK(unbounded_envelope(uc, 1.0)(5.0) == Catch::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("inhomogeneous constants") {
  const DomainSpec spec = presets::example_a_spec();
  const InhomogeneousConstants ic = inhomogeneous_constants(spec, laplacian_ell());
  // the widest |x1| of this domain is r2(0) = 2
  CHECK(ic.d1 == Catch::Approx(2.0).epsilon(1e-9));
  CHECK(ic.K0 == Catch::Approx(1.0));
  CHECK(ic.eps == Catch::Approx(std::exp(-2.0)).epsilon(1e-9));
  CHECK(ic.K1 == Catch::Approx(54.598150033144236).epsilon(1e-8));

  const InhomogeneousConstants degenerate = inhomogeneous_constants_from(0.0, laplacian_ell());
  CHECK(degenerate.K0 == 1.0);
  CHECK(degenerate.eps == 1.0);
  CHECK(degenerate.K1 == 1.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.1, 3.0);
  for (int k = 0; k < 100; ++k) {
    EllipticityData ell;
    ell.c0 = u01(rng);
    ell.M1 = 2.0 * ell.c0;
    ell.drift = BoundedDrift{u01(rng)};
    const double d1 = u01(rng);
    const InhomogeneousConstants r = inhomogeneous_constants_from(d1, ell);
    // algebraic identity baked into the definition of K1
    CHECK(r.K1 * r.eps * std::exp(-r.K0 * d1) * r.K0 == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exponent optimizer beats a grid scan") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double b = 0.05 + 0.88 * u01(rng);
    const double a = b + 0.01 + (0.99 - b - 0.01) * u01(rng);
    const double s_min = 3.0 * u01(rng);
    const double s = std::max(optimal_exponent(a, b), std::max(s_min, 1e-12));
    const double ours = std::pow(a, s) - std::pow(b, s);
    for (int i = 1; i <= 100; ++i) {
      const double sg = s_min + 50.0 * i / 100.0;
      CHECK(ours >= std::pow(a, sg) - std::pow(b, sg) - 1e-12);
    }
  }
}
