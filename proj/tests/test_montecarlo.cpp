#include <catch2/catch_amalgamated.hpp>

#include "winding/montecarlo.hpp"
#include "winding/presets.hpp"

using namespace winding;

TEST_CASE("constant data is reproduced exactly") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  WalkerConfig cfg;
  cfg.n_walkers = 2000;
  cfg.seed = 9;
  const McEstimate est = estimate(laplacian_field(), ring, BoundaryData::constant(3.25),
                                  ring.point_polar(1.5, 1.0), cfg);
  CHECK(est.mean == 3.25);
  CHECK(est.stderr_ == 0.0);
  CHECK(est.n_capped == 0);
  CHECK(est.n_exit_gamma + est.n_exit_inner + est.n_exit_far == 2000);
}

TEST_CASE("fixed seed gives bit-identical estimates") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  BoundaryData g;
  g.gamma1 = [](double th) { return std::sin(th); };
  g.gamma2 = [](double th) { return std::cos(th); };
  WalkerConfig cfg;
  cfg.n_walkers = 3000;
  cfg.seed = 1234;
  const DomainPoint p = ring.point_polar(1.4, 2.0);
  const McEstimate a = estimate(laplacian_field(), ring, g, p, cfg);
  const McEstimate b = estimate(laplacian_field(), ring, g, p, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.n_exit_gamma == b.n_exit_gamma);

  const auto batch = batch_estimate(laplacian_field(), ring, g, {p, p}, cfg);
  CHECK(batch.size() == 2);
  CHECK(batch[0].mean == batch[1].mean);
  CHECK(batch_estimate(laplacian_field(), ring, g, {}, cfg).empty());
}

TEST_CASE("harmonic boundary data on the annulus is recovered") {
  // u(x) = ln|x| solves the Dirichlet problem with g = ln r on every side
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  BoundaryData g;
  g.gamma1 = [](double) { return 0.0; };            // ln 1
  g.gamma2 = [](double) { return std::log(2.0); };  // ln 2
  g.at_theta0 = [](double lam) { return std::log(1.0 + lam); };
  g.at_theta_max = [](double lam) { return std::log(1.0 + lam); };
  WalkerConfig cfg;
  cfg.n_walkers = 20000;
  cfg.seed = 77;
  cfg.dt = 2.5e-5;
  const DomainPoint p = ring.point_polar(1.5, 1.0);
  const McEstimate est = estimate(laplacian_field(), ring, g, p, cfg);
  CHECK(est.n_capped == 0);
  CHECK(std::abs(est.mean - std::log(1.5)) <= 3.0 * est.stderr_);
}

TEST_CASE("standard error scales like the square root of the walker count") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  BoundaryData g;
  g.gamma1 = [](double) { return 0.0; };
  g.gamma2 = [](double) { return 1.0; };
  const DomainPoint p = ring.point_polar(1.5, 2.5);
  WalkerConfig cfg;
  cfg.seed = 31;
  cfg.dt = 4e-4;
  std::vector<double> errs;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    cfg.n_walkers = n;
    errs.push_back(estimate(laplacian_field(), ring, g, p, cfg).stderr_);
  }
  const double root10 = std::sqrt(10.0);
  CHECK(errs[0] / errs[1] == Catch::Approx(root10).epsilon(0.2));
  CHECK(errs[1] / errs[2] == Catch::Approx(root10).epsilon(0.2));
}

TEST_CASE("walker agrees with the finite-difference solution on the spiral") {
  const DomainSpec spec = presets::example_a_spec(4.5 * kPi);
  const CoefficientField lap = laplacian_field();
  BoundaryData g;
  g.at_theta0 = [](double lam) { return std::sin(kPi * lam); };

  StripGrid grid(41, 1126, spec.theta0(), spec.theta_max);
  GridSolution sol = solve(assemble(lap, spec, grid, g,
                                    [](const DomainPoint&) { return 0.0; }));

  WalkerConfig cfg;
  cfg.n_walkers = 20000;
  cfg.seed = 5150;
  cfg.dt = 4e-5;
  for (const auto& [lam, th] : std::vector<std::pair<double, double>>{
           {0.5, 0.15}, {0.35, 0.3}, {0.65, 0.5}}) {
    const DomainPoint p = spec.point(lam, th);
    const McEstimate est = estimate(lap, spec, g, p, cfg);
    const double fi = lam / grid.h_lambda();
    const double fj = (th - grid.theta0) / grid.h_theta();
    const int i0 = std::min(static_cast<int>(fi), grid.n_lambda - 2);
    const int j0 = std::min(static_cast<int>(fj), grid.n_theta - 2);
    const double wi = fi - i0, wj = fj - j0;
    const double fd = (1 - wi) * (1 - wj) * sol.at(i0, j0) +
                      wi * (1 - wj) * sol.at(i0 + 1, j0) +
                      (1 - wi) * wj * sol.at(i0, j0 + 1) + wi * wj * sol.at(i0 + 1, j0 + 1);
    INFO("probe " << lam << " " << th << " fd " << fd << " mc " << est.mean << " +- "
                  << est.stderr_);
    REQUIRE(std::abs(est.mean - fd) <= 3.0 * est.stderr_ + 2e-2);
  }
}

TEST_CASE("oversized drift step is rejected") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  CoefficientField drift = laplacian_field();
  with_constant_drift(drift, Vec2(3.0, 0.0));
  WalkerConfig cfg;
  cfg.n_walkers = 1000;
  cfg.dt = 0.2;  // dt * |b| = 0.6 > gap/4
  CHECK_THROWS_MATCHES(
      estimate(drift, ring, BoundaryData::constant(0.0), ring.point_polar(1.5, 1.0), cfg),
      Error, Catch::Matchers::Predicate<Error>(
                 [](const Error& e) { return e.code() == ErrorCode::StepTooLarge; }));
}

TEST_CASE("step cap reports capped walkers") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  WalkerConfig cfg;
  cfg.n_walkers = 1000;
  cfg.dt = 1e-6;
  cfg.max_steps = 10;  // nobody exits in ten tiny steps
  const McEstimate est = estimate(laplacian_field(), ring, BoundaryData::constant(1.0),
                                  ring.point_polar(1.5, 3.0), cfg);
  CHECK(est.n_capped == 1000);
  CHECK(std::isnan(est.mean));

  WalkerConfig tiny;
  tiny.n_walkers = 10;
  CHECK_THROWS_AS(estimate(laplacian_field(), ring, BoundaryData::constant(1.0),
                           ring.point_polar(1.5, 3.0), tiny),
                  Error);
}
