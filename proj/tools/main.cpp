// Command-line front end: domain inspection, constants report, solves,
// Monte Carlo estimates, and the per-theorem experiments.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "winding/acceptance.hpp"
#include "winding/winding.hpp"

namespace {

using namespace winding;

struct CommonArgs {
  std::string config;
  std::string out;
  int n_lambda = 41;
  int n_theta = 2049;
  double theta_max_override = 0.0;
  double far_data = 0.0;
};

ProblemSetup load(const CommonArgs& args) {
  ConfigMap m = parse_config_file(args.config);
  if (args.theta_max_override > 0.0) {
    std::ostringstream os;
    os << std::setprecision(17) << args.theta_max_override;
    m["theta_max"] = os.str();
  }
  return load_problem(m);
}

ExperimentConfig experiment_config(const CommonArgs& args) {
  ProblemSetup ps = load(args);
  ExperimentConfig cfg;
  cfg.spec = std::move(ps.spec);
  cfg.field = std::move(ps.field);
  cfg.ell = std::move(ps.ell);
  cfg.n_lambda = args.n_lambda;
  cfg.n_theta = args.n_theta;
  cfg.out_dir = args.out;
  cfg.far_value = args.far_data;
  return cfg;
}

void print_kv(const char* key, double value) {
  std::printf("%s=%.12g\n", key, value);
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  out << j.dump(2) << "\n";
}

void write_experiment_csv(const std::string& dir, const std::string& name,
                          const DichotomyReport& rep) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  winding::write_experiment_csv(dir + "/" + name, rep);
}

int report_status(const char* name, bool pass) {
  std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name);
  return pass ? 0 : 1;
}

int cmd_geometry(const CommonArgs& args, int n_samples) {
  ProblemSetup ps = load({args.config, args.out, args.n_lambda, args.n_theta,
                          args.theta_max_override, args.far_data});
  (void)n_samples;
  const DomainSpec& spec = ps.spec;
  std::printf("family=%s\n", to_string(spec.curves.family));
  print_kv("theta0", spec.theta0());
  print_kv("theta_max", spec.theta_max);
  print_kv("r_star", spec.r_star);
  print_kv("r_star_uncertainty", spec.r_star_uncertainty);
  print_kv("r_bar", spec.r_bar);
  print_kv("mu0", spec.mu0);
  print_kv("mu_star", spec.mu_star);
  print_kv("L_star", spec.L_star);
  print_kv("k_star", spec.k_star);
  print_kv("min_gap", spec.gap(spec.theta_max));
  std::printf("[PASS] geometry validated\n");
  return 0;
}

int cmd_constants(const CommonArgs& args, double theta_star_arg) {
  ProblemSetup ps = load(args);
  json record;
  record["domain"] = {{"r_star", ps.spec.r_star}, {"r_bar", ps.spec.r_bar},
                      {"mu0", ps.spec.mu0},       {"L_star", ps.spec.L_star},
                      {"k_star", ps.spec.k_star}};
  print_kv("k_star", ps.spec.k_star);

  if (ps.ell.bounded()) {
    AnnulusOptions opt;
    if (theta_star_arg > 0.0) opt.theta_star = theta_star_arg;
    const GrowthConstants gc = annulus_constants(ps.spec, ps.ell, opt);
    print_kv("theta_star", gc.theta_star);
    print_kv("d_star", gc.d_star);
    print_kv("d_hat", gc.d_hat);
    print_kv("s", gc.s);
    print_kv("eta_star", gc.eta_star);
    print_kv("nu", gc.nu);
    print_kv("C_star", gc.C_star);
    print_kv("nu_prime", gc.nu_prime);
    print_kv("C_star_prime", gc.C_star_prime);
    const InhomogeneousConstants ic = inhomogeneous_constants(ps.spec, ps.ell);
    print_kv("K0", ic.K0);
    print_kv("K1", ic.K1);
    record["growth"] = to_json(gc);
    record["inhomogeneous"] = {{"K0", ic.K0}, {"eps", ic.eps}, {"K1", ic.K1}, {"d1", ic.d1}};
  } else {
    const UnboundedDrift& ub = ps.ell.unbounded();
    std::printf("mt1=%s\n", to_string(mt1_check(ub.kind, ub.param, ub.kappa)));
    const double d0 = ps.spec.r_bar - ps.spec.r_star;
    const double lo = std::acos(ps.spec.r_star / (ps.spec.r_star + d0));
    const double ts = theta_star_arg > 0.0 ? theta_star_arg : 0.5 * (lo + kPi / 2.0);
    const UnboundedConstants uc = unbounded_constants(ps.spec, ps.ell, ts);
    print_kv("theta_star", ts);
    print_kv("nu_bar", uc.nu_bar);
    print_kv("Theta0", uc.Theta0);
    print_kv("kappa_bar", uc.kappa_bar);
    print_kv("lambda0", uc.lambda0);
    record["unbounded"] = {{"nu_bar", uc.nu_bar},
                           {"Theta0", uc.Theta0},
                           {"kappa_bar", uc.kappa_bar},
                           {"d_bar_star", uc.d_bar_star},
                           {"lambda0", uc.lambda0}};
  }
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    out << record.dump(2) << "\n";
  }
  return 0;
}

int cmd_solve(const CommonArgs& args) {
  ProblemSetup ps = load(args);
  StripGrid grid(args.n_lambda, args.n_theta, ps.spec.theta0(), ps.spec.theta_max);
  BoundaryData g;
  const double far = args.far_data;
  g.at_theta0 = [](double lam) { return std::sin(kPi * lam); };
  g.at_theta_max = [far](double lam) { return far * std::sin(kPi * lam); };
  LinearSystem sys = assemble(ps.field, ps.spec, grid, g,
                              [&](const DomainPoint& p) { return ps.field.f(p); });
  GridSolution sol = solve(sys);
  if (sys.dominance_count > 0)
    std::fprintf(stderr, "warning: mixed-derivative dominance at %d nodes\n",
                 sys.dominance_count);
  const std::string nodes_path = args.out.empty() ? "solution.csv" : args.out;
  write_nodes_csv(nodes_path, sol, ps.spec);
  const std::string prof_path = nodes_path + ".profiles.csv";
  write_profiles_csv(prof_path, cross_profiles(sol));
  std::printf("residual=%.3e\nnodes=%s\nprofiles=%s\n", sol.residual_norm, nodes_path.c_str(),
              prof_path.c_str());
  return 0;
}

int cmd_montecarlo(const CommonArgs& args, const std::string& x0_str, std::size_t n, double dt,
                   std::uint64_t seed) {
  ProblemSetup ps = load(args);
  const auto comma = x0_str.find(',');
  require(comma != std::string::npos, ErrorCode::InvalidArgument, "--x0 expects x1,x2");
  const double x1 = std::stod(x0_str.substr(0, comma));
  const double x2 = std::stod(x0_str.substr(comma + 1));
  const MembershipResult mem = membership(ps.spec, x1, x2);
  require(mem.location == Location::Inside, ErrorCode::InvalidArgument,
          "--x0 must be strictly inside the domain");
  DomainPoint p;
  p.x1 = x1;
  p.x2 = x2;
  p.r = std::hypot(x1, x2);
  p.theta = mem.theta;
  p.lambda = mem.lambda;

  BoundaryData g;
  g.at_theta0 = [](double lam) { return std::sin(kPi * lam); };
  WalkerConfig cfg;
  cfg.n_walkers = n;
  cfg.dt = dt;
  cfg.seed = seed;
  const McEstimate est = estimate(ps.field, ps.spec, g, p, cfg);
  std::printf("x1,x2,mean,stderr,n_exit_gamma,n_exit_inner,n_exit_far,n_capped\n");
  std::printf("%.17g,%.17g,%.17g,%.17g,%zu,%zu,%zu,%zu\n", x1, x2, est.mean, est.stderr_,
              est.n_exit_gamma, est.n_exit_inner, est.n_exit_far, est.n_capped);
  if (!args.out.empty()) write_mc_csv(args.out, {p}, {est});
  return 0;
}

int cmd_dichotomy(const CommonArgs& args) {
  ExperimentConfig cfg = experiment_config(args);
  const DichotomyReport rep = run_dichotomy(cfg);
  write_json(args.out, "dichotomy.json", to_json(rep));
  write_experiment_csv(args.out, "dichotomy.csv", rep);
  std::printf("branch=%s nu_emp=%.4g nu_theory=%.4g violations=%zu\n", rep.branch.c_str(),
              rep.nu_emp, rep.nu_theory, rep.envelope.violations.size());
  return report_status("dichotomy", rep.pass());
}

int cmd_arc(const CommonArgs& args) {
  ExperimentConfig cfg = experiment_config(args);
  const DichotomyReport rep = run_arc_dichotomy(cfg);
  write_json(args.out, "arc_dichotomy.json", to_json(rep));
  write_experiment_csv(args.out, "arc_dichotomy.csv", rep);
  std::printf("branch=%s nu_prime=%.4g C_star_prime=%.4g k_star=%.4g k_eps=%.4g\n",
              rep.branch.c_str(), rep.nu_prime, rep.C_star_prime, rep.k_star, rep.k_eps);
  return report_status("arc-dichotomy", rep.pass());
}

int cmd_unbounded(const CommonArgs& args) {
  ExperimentConfig cfg = experiment_config(args);
  require(!cfg.ell.bounded(), ErrorCode::InvalidArgument,
          "unbounded experiment needs drift = logangular(alpha) in the config");
  const DichotomyReport rep = run_unbounded(cfg);
  write_json(args.out, "unbounded.json", to_json(rep));
  write_experiment_csv(args.out, "unbounded.csv", rep);
  std::printf("nu_bar=%.4g Theta0=%.4g violations=%zu\n", rep.nu_bar, rep.Theta0,
              rep.envelope.violations.size());
  return report_status("unbounded", rep.pass());
}

int cmd_inhomogeneous(const CommonArgs& args) {
  ExperimentConfig cfg = experiment_config(args);
  const InhomogeneousReport rep = run_inhomogeneous(cfg);
  write_json(args.out, "inhomogeneous.json", to_json(rep));
  for (const auto& sc : rep.scenarios)
    std::printf("scenario=%s extremum=%d osc=%d forcing=%d\n", sc.name.c_str(),
                sc.extremum_ok ? 1 : 0, sc.osc_ok ? 1 : 0, sc.forcing_ok ? 1 : 0);
  return report_status("inhomogeneous", rep.pass());
}

int cmd_dependence(const CommonArgs& args) {
  ExperimentConfig cfg = experiment_config(args);
  const DependenceReport rep = run_dependence(cfg);
  write_json(args.out, "dependence.json", to_json(rep));
  for (const auto& c : rep.cases)
    std::printf("case=%s pass=%d max_diff=%.3e\n", c.name.c_str(), c.pass ? 1 : 0, c.max_diff);
  return report_status("dependence", rep.pass());
}

int cmd_suite(const CommonArgs& args) {
  return winding::acceptance::run_acceptance_suite(args.out) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"winding-domain elliptic estimates: geometry, constants, solver, experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  double theta_star_arg = 0.0;
  int n_samples = 2048;
  std::string x0_str = "1.7,0.0";
  std::size_t mc_n = 100000;
  double mc_dt = 0.0;
  std::uint64_t mc_seed = 1;

  auto add_common = [&](CLI::App* sub, bool grid_flags) {
    sub->add_option("--config", args.config, "problem config file")->required();
    sub->add_option("--out", args.out, "output path (file or directory)");
    if (grid_flags) {
      sub->add_option("--nlambda", args.n_lambda, "grid nodes across the cross-section");
      sub->add_option("--ntheta", args.n_theta, "grid nodes along the winding angle");
      sub->add_option("--theta-max", args.theta_max_override, "override the config theta_max");
      sub->add_option("--far-data", args.far_data, "Dirichlet value scale at theta_max");
    }
  };

  auto* geo = app.add_subcommand("geometry", "validate a domain and print its constants");
  add_common(geo, false);
  geo->add_option("--samples", n_samples, "validation sample count");

  auto* cns = app.add_subcommand("constants", "print all constant bundles");
  add_common(cns, false);
  cns->add_option("--theta-star", theta_star_arg, "pin theta* instead of auto-search");

  auto* slv = app.add_subcommand("solve", "finite-difference solve with CSV output");
  add_common(slv, true);

  auto* mc = app.add_subcommand("montecarlo", "Feynman-Kac estimate at a point");
  add_common(mc, false);
  mc->add_option("--x0", x0_str, "start point x1,x2");
  mc->add_option("--n", mc_n, "walker count");
  mc->add_option("--dt", mc_dt, "time step (0 = automatic)");
  mc->add_option("--seed", mc_seed, "RNG seed");

  auto* dic = app.add_subcommand("dichotomy", "angle-indexed decay/growth experiment");
  add_common(dic, true);
  auto* arc = app.add_subcommand("arc-dichotomy", "arc-distance-indexed experiment");
  add_common(arc, true);
  auto* unb = app.add_subcommand("unbounded", "unbounded-drift envelope experiment");
  add_common(unb, true);
  auto* inh = app.add_subcommand("inhomogeneous", "boundary data and forcing estimates");
  add_common(inh, true);
  auto* dep = app.add_subcommand("dependence", "continuous-dependence experiments");
  add_common(dep, true);
  auto* ste = app.add_subcommand("suite", "run every acceptance experiment");
  ste->add_option("--out", args.out, "output directory for summary and CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (geo->parsed()) return cmd_geometry(args, n_samples);
    if (cns->parsed()) return cmd_constants(args, theta_star_arg);
    if (slv->parsed()) return cmd_solve(args);
    if (mc->parsed()) return cmd_montecarlo(args, x0_str, mc_n, mc_dt, mc_seed);
    if (dic->parsed()) return cmd_dichotomy(args);
    if (arc->parsed()) return cmd_arc(args);
    if (unb->parsed()) return cmd_unbounded(args);
    if (inh->parsed()) return cmd_inhomogeneous(args);
    if (dep->parsed()) return cmd_dependence(args);
    if (ste->parsed()) return cmd_suite(args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
