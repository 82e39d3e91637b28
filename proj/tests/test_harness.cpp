#include <catch2/catch_amalgamated.hpp>

#include "winding/harness.hpp"
#include "winding/presets.hpp"

using namespace winding;

namespace {

ExperimentConfig small_config(double theta_max = 6.0 * kPi, int n_theta = 1601) {
  ExperimentConfig cfg;
  cfg.spec = presets::example_a_spec(theta_max);
  cfg.field = laplacian_field();
  cfg.ell = validate_ellipticity(cfg.field, cfg.spec);
  cfg.n_lambda = 33;
  cfg.n_theta = n_theta;
  return cfg;
}

}  // namespace

TEST_CASE("log-slope fitting recovers an exponential rate") {
  std::vector<double> t, v;
  for (int k = 0; k <= 200; ++k) {
    t.push_back(0.05 * k);
    v.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  const auto slope = fit_log_slope(t, v, 1.0, 9.0);
  REQUIRE(slope.has_value());
  CHECK(*slope == Catch::Approx(-0.7).epsilon(1e-10));
  // entries at the noise floor are ignored
  v[100] = 1e-20;
  CHECK(fit_log_slope(t, v, 1.0, 9.0).has_value());
  CHECK(!fit_log_slope(t, v, 4.0, 4.01).has_value());
}

TEST_CASE("below-exponential verdicts") {
  std::vector<double> t, flat, growing;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.1 * k);
    flat.push_back(1.0);
    growing.push_back(std::exp(0.5 * t.back()));
  }
  CHECK(check_below_exponential(t, flat, {0.1, 1.0}).verdict == SubexVerdict::Pass);
  const SubexReport bad = check_below_exponential(t, growing, {0.1});
  CHECK(bad.verdict == SubexVerdict::Fail);
  CHECK(bad.witness_eps == 0.1);
  CHECK(check_below_exponential(t, growing, {1.0}).verdict == SubexVerdict::Pass);
}

TEST_CASE("allowance calibration bounds the manufactured error") {
  const DomainSpec spec = presets::example_a_spec();
  const CoefficientField lap = laplacian_field();
  const double window = spec.theta0() + kTwoPi;
  const double C = calibrate_allowance(lap, spec, window);
  CHECK(C > 0.0);
  StripGrid probe(49, 769, spec.theta0(), window);
  const double err = manufactured_error(lap, spec, probe);
  CHECK(err <= C * (probe.h_lambda() + probe.h_theta()));
}

TEST_CASE("zero data solves to zero and passes trivially") {
  ExperimentConfig cfg = small_config();
  cfg.data_amplitude = 0.0;
  const DichotomyReport rep = run_dichotomy(cfg);
  CHECK(rep.pass());
  CHECK(rep.branch == "decay");
  for (double v : rep.profiles.max_abs) CHECK(v <= 1e-12);
}

TEST_CASE("out-of-range fit windows are rejected") {
  ExperimentConfig cfg = small_config();
  cfg.fit_hi = cfg.spec.theta_max;  // inside the truncation boundary layer
  CHECK_THROWS_AS(run_dichotomy(cfg), Error);
}

TEST_CASE("dichotomy experiment decays under the envelope") {
  ExperimentConfig cfg = small_config();
  const DichotomyReport rep = run_dichotomy(cfg);
  CHECK(rep.envelope.checked);
  CHECK(rep.envelope.pass);
  CHECK(rep.flat.pass);
  CHECK(rep.branch == "decay");
  CHECK(rep.nu_emp >= rep.nu_theory);
  CHECK(rep.subex.verdict == SubexVerdict::Pass);
  CHECK(rep.pass());
  CHECK(rep.dominance_count == 0);
  // deterministic reruns
  const DichotomyReport rep2 = run_dichotomy(cfg);
  CHECK(rep.nu_emp == rep2.nu_emp);
  CHECK(rep.envelope.violations.size() == rep2.envelope.violations.size());
}

TEST_CASE("manufactured growth branch is classified as growth") {
  // a winding gap shrinks so fast that far-end data dies within one step of
  // the classifier grid; the constant-gap annulus keeps the rising tail
  // visible across many cross-sections, and the growth lemma applies to it
  // unchanged
  ExperimentConfig cfg;
  cfg.spec = presets::annulus_spec(1.0, 2.0, 0.0, 6.0 * kPi);
  cfg.field = laplacian_field();
  cfg.ell = validate_ellipticity(cfg.field, cfg.spec);
  cfg.n_lambda = 33;
  cfg.n_theta = 1601;
  const GrowthConstants gc = annulus_constants(cfg.spec, cfg.ell);
  cfg.far_value = std::exp(gc.nu * (cfg.spec.theta_max - cfg.spec.theta0()));
  const DichotomyReport rep = run_dichotomy(cfg);
  CHECK(rep.branch == "growth");
  CHECK(!rep.envelope.checked);  // the decay envelope applies to the homogeneous setup only
}

TEST_CASE("dichotomy also holds on the oscillating family-b geometry") {
  ExperimentConfig cfg;
  cfg.spec = presets::example_b_spec(6.0 * kPi);
  cfg.field = laplacian_field();
  cfg.ell = validate_ellipticity(cfg.field, cfg.spec);
  cfg.n_lambda = 25;
  cfg.n_theta = 1901;
  const DichotomyReport rep = run_dichotomy(cfg);
  CHECK(rep.pass());
  CHECK(rep.branch == "decay");
  CHECK(rep.dominance_count == 0);
  CHECK(rep.nu_emp >= rep.nu_theory);
}

TEST_CASE("inhomogeneous scenarios pass with rotating anisotropic coefficients") {
  ExperimentConfig cfg;
  cfg.spec = presets::example_a_spec(8.0 * kPi);
  cfg.field = rotated_anisotropic_field(1.0, 3.0);
  with_constant_drift(cfg.field, Vec2(0.5, -0.2));
  cfg.ell = validate_ellipticity(cfg.field, cfg.spec);
  cfg.n_lambda = 41;
  cfg.n_theta = 2201;
  const InhomogeneousReport rep = run_inhomogeneous(cfg);
  CHECK(rep.pass());
}

TEST_CASE("arc-distance experiment") {
  // the 0.1-tightened tail needs the curves within 0.05 of the circle, which
  // this family reaches just past theta = 19
  ExperimentConfig cfg = small_config(8.0 * kPi, 1601);
  const DichotomyReport rep = run_arc_dichotomy(cfg);
  CHECK(rep.envelope.checked);
  CHECK(rep.envelope.pass);
  CHECK(rep.branch == "decay");
  CHECK(rep.k_eps < rep.k_star);
  CHECK(rep.nu_prime > 0.0);
  CHECK(rep.C_star_prime >= rep.C_star);
}

TEST_CASE("unbounded-drift experiment") {
  ExperimentConfig cfg = small_config(8.0 * kPi, 1601);
  with_angular_growth_drift(cfg.field, 0.5, cfg.spec.theta0());
  cfg.ell = validate_ellipticity(cfg.field, cfg.spec);
  std::get<UnboundedDrift>(cfg.ell.drift).kappa = 0.2;
  const DichotomyReport rep = run_unbounded(cfg);
  CHECK(rep.envelope.checked);
  CHECK(rep.envelope.pass);
  CHECK(rep.flat.pass);
  CHECK(rep.nu_bar > 0.0);
  CHECK(rep.Theta0 > cfg.spec.theta0());

  // the wrong kappa fails the divergence precondition
  std::get<UnboundedDrift>(cfg.ell.drift).kappa = 0.05;  // 0.5 ln 20 > 1
  CHECK_THROWS_AS(run_unbounded(cfg), Error);
}

TEST_CASE("inhomogeneous scenarios") {
  ExperimentConfig cfg = small_config();
  const InhomogeneousReport rep = run_inhomogeneous(cfg);
  REQUIRE(rep.scenarios.size() == 3);
  for (const auto& sc : rep.scenarios) {
    INFO(sc.name);
    CHECK(sc.extremum_ok);
    CHECK(sc.osc_ok);
    CHECK(sc.forcing_ok);
  }
  CHECK(rep.pass());
  CHECK(rep.K1 > 1.0);
  // constant data: the sup bound is attained exactly
  CHECK(rep.scenarios[0].max_violation == 0.0);
  // sine data: late oscillation stays under the gamma oscillation
  CHECK(rep.scenarios[1].asymptotic_osc <= 2.0 + rep.tolerance);
}

TEST_CASE("split gamma data drives the oscillation envelope to near-equality") {
  // +1/2 on the outer curve, -1/2 on the inner one: deep inside the strip the
  // cross-section oscillation tends to the full gamma oscillation, so the
  // envelope is asymptotically attained rather than slack
  ExperimentConfig cfg = small_config();
  InhomogeneousScenario sc;
  sc.name = "split-gamma";
  sc.g.gamma1 = [](double) { return -0.5; };
  sc.g.gamma2 = [](double) { return 0.5; };
  sc.g.at_theta0 = [](double lam) { return lam - 0.5; };
  sc.g.at_theta_max = [](double lam) { return lam - 0.5; };
  sc.M_B = 0.5;
  sc.osc_gamma = 1.0;
  sc.sup_all = 0.5;
  sc.inf_all = -0.5;
  sc.M0_abs = 0.5;
  const InhomogeneousReport rep = run_inhomogeneous(cfg, {sc});
  REQUIRE(rep.scenarios.size() == 1);
  CHECK(rep.scenarios[0].extremum_ok);
  CHECK(rep.scenarios[0].osc_ok);
  CHECK(rep.scenarios[0].forcing_ok);
  // the bound is tight in the tail: oscillation within 2% of osc_gamma
  CHECK(rep.scenarios[0].asymptotic_osc >= 0.98);
}

TEST_CASE("dependence experiments") {
  ExperimentConfig cfg = small_config();
  const DependenceReport rep = run_dependence(cfg);
  REQUIRE(rep.cases.size() == 3);
  CHECK(rep.cases[0].max_diff == 0.0);
  for (const auto& c : rep.cases) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(rep.pass());
}

TEST_CASE("far boundary influence decays into the interior") {
  // solve with far data 0 and 1; the difference on an interior window is
  // bounded by the decayed envelope constant
  ExperimentConfig cfg = small_config();
  const BoundaryData g0 = BoundaryData::constant(0.0);
  BoundaryData g1 = g0;
  g1.at_theta_max = [](double lam) { return std::sin(kPi * lam); };
  StripGrid grid(cfg.n_lambda, cfg.n_theta, cfg.spec.theta0(), cfg.spec.theta_max);
  GridSolution u0 = solve(assemble(cfg.field, cfg.spec, grid, g0,
                                   [](const DomainPoint&) { return 0.0; }));
  GridSolution u1 = solve(assemble(cfg.field, cfg.spec, grid, g1,
                                   [](const DomainPoint&) { return 0.0; }));
  const GrowthConstants gc = annulus_constants(cfg.spec, cfg.ell);
  const double window_hi = cfg.spec.theta_max - 4.0 * kPi;
  double interior_diff = 0.0;
  for (int j = 0; j < grid.n_theta && grid.theta(j) <= window_hi; ++j)
    for (int i = 0; i < grid.n_lambda; ++i)
      interior_diff = std::max(interior_diff, std::abs(u0.at(i, j) - u1.at(i, j)));
  const double bound = gc.C_star * std::exp(-gc.nu * 4.0 * kPi);
  CHECK(interior_diff <= bound + 1e-9);
}
