#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "winding/io.hpp"
#include "winding/presets.hpp"

using namespace winding;

TEST_CASE("config parsing") {
  std::istringstream in(R"(# preset
family = example_a
r_star = 1.0
s = 1
z1 = 2.0   # inner curve shift
z2 = 1.0
theta0 = 0
theta_max = 50.265482457436689
operator = rotated(1.0, 3.0)
drift = const(0.5, -0.25)
kappa = 0.2
)");
  const ConfigMap m = parse_config(in);
  CHECK(m.at("family") == "example_a");
  CHECK(m.at("z1") == "2.0");
  const ProblemSetup ps = load_problem(m);
  CHECK(ps.spec.curves.family == CurveFamily::ExampleA);
  CHECK(ps.spec.r_star == 1.0);
  CHECK(ps.field.op_tag == OperatorPreset::RotatedAnisotropic);
  CHECK(ps.field.drift_tag == DriftPreset::ConstantVector);
  CHECK(ps.ell.c0 == 1.0);
  CHECK(ps.ell.M1 == 3.0);
  CHECK(ps.ell.M2() == Catch::Approx(std::hypot(0.5, 0.25)));
  CHECK(ps.kappa == 0.2);
}

TEST_CASE("logangular drift config produces unbounded ellipticity data") {
  std::istringstream in(R"(family = example_a
theta_max = 50.265482457436689
operator = laplacian
drift = logangular(0.5)
kappa = 0.2
)");
  const ProblemSetup ps = load_problem(parse_config(in));
  REQUIRE(!ps.ell.bounded());
  CHECK(ps.ell.unbounded().kappa == 0.2);
  CHECK(ps.ell.unbounded().param == 0.5);
}

TEST_CASE("malformed configs are rejected") {
  std::istringstream missing("family = example_a\n");
  CHECK_THROWS_AS(load_problem(parse_config(missing)), Error);  // no theta_max
  std::istringstream bad_op("theta_max = 51\noperator = cubic\n");
  CHECK_THROWS_AS(load_problem(parse_config(bad_op)), Error);
}

TEST_CASE("shipped preset files load") {
  for (const char* name : {"example_a.cfg", "example_b.cfg", "example_c.cfg",
                           "unbounded.cfg"}) {
    const std::string path = std::string(CONFIG_DIR) + "/" + name;
    INFO(path);
    const ProblemSetup ps = load_problem_file(path);
    CHECK(ps.spec.r_star > 0.0);
  }
}

TEST_CASE("csv writers emit the documented headers") {
  const DomainSpec ring = presets::annulus_spec(1.0, 2.0, 0.0, kTwoPi);
  StripGrid grid(5, 9, 0.0, kTwoPi);
  GridSolution sol = solve(assemble(laplacian_field(), ring, grid,
                                    BoundaryData::constant(1.0),
                                    [](const DomainPoint&) { return 0.0; }));
  const auto dir = std::filesystem::temp_directory_path();
  const std::string nodes = (dir / "winding_nodes_test.csv").string();
  const std::string prof = (dir / "winding_prof_test.csv").string();
  write_nodes_csv(nodes, sol, ring);
  write_profiles_csv(prof, cross_profiles(sol));

  std::string line;
  std::ifstream fn(nodes);
  std::getline(fn, line);
  CHECK(line == "lambda,theta,x1,x2,u");
  int rows = 0;
  while (std::getline(fn, line)) ++rows;
  CHECK(rows == grid.size());

  std::ifstream fp(prof);
  std::getline(fp, line);
  CHECK(line == "theta,maxpos,maxneg,maxabs,osc");

  const std::string mc = (dir / "winding_mc_test.csv").string();
  write_mc_csv(mc, {ring.point_polar(1.5, 1.0)}, {McEstimate{}});
  std::ifstream fm(mc);
  std::getline(fm, line);
  CHECK(line == "x1,x2,mean,stderr,n_exit_gamma,n_exit_inner,n_exit_far,n_capped");

  std::filesystem::remove(nodes);
  std::filesystem::remove(prof);
  std::filesystem::remove(mc);
}

TEST_CASE("reports serialize to json") {
  GrowthConstants gc;
  gc.eta_star = 0.5;
  gc.nu = 0.3;
  const json j = to_json(gc);
  CHECK(j["eta_star"] == 0.5);
  DichotomyReport rep;
  rep.branch = "decay";
  rep.nu_emp = 2.0;
  const json jr = to_json(rep);
  CHECK(jr["branch"] == "decay");
  CHECK(jr["pass"] == true);
}
