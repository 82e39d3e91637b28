#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "winding/harness.hpp"

namespace winding {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Config files: plain "key = value" lines, '#' comments.

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = val;
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidArgument, "cannot open config file: " + path);
  return parse_config(in);
}

namespace detail {

inline double num(const ConfigMap& m, const std::string& key, std::optional<double> fallback = {}) {
  const auto it = m.find(key);
  if (it == m.end()) {
    require(fallback.has_value(), ErrorCode::InvalidArgument, "missing config key: " + key);
    return *fallback;
  }
  return std::stod(it->second);
}

inline std::string str(const ConfigMap& m, const std::string& key, const std::string& fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

/// Parses "name" or "name(a,b,...)" into the name and its numeric arguments.
inline std::pair<std::string, std::vector<double>> call_form(const std::string& v) {
  const auto open = v.find('(');
  if (open == std::string::npos) return {trim(v), {}};
  const auto close = v.rfind(')');
  require(close != std::string::npos && close > open, ErrorCode::InvalidArgument,
          "malformed value: " + v);
  std::vector<double> args;
  std::string inner = v.substr(open + 1, close - open - 1);
  std::stringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) args.push_back(std::stod(trim(tok)));
  return {trim(v.substr(0, open)), args};
}

}  // namespace detail

/// Everything a CLI run needs, assembled from one config file.
struct ProblemSetup {
  DomainSpec spec;
  CoefficientField field;
  EllipticityData ell;
  double kappa = 0.0;  ///< set when the config provides one
};

inline CurvePair curves_from_config(const ConfigMap& m) {
  const std::string family = detail::str(m, "family", "example_a");
  const double r_star = detail::num(m, "r_star", 1.0);
  const double s = detail::num(m, "s", 1.0);
  const double z1 = detail::num(m, "z1", 2.0);
  const double z2 = detail::num(m, "z2", 1.0);
  const double theta0 = detail::num(m, "theta0", 0.0);
  if (family == "example_a") return make_example_a(r_star, s, z1, z2, theta0);
  const double eps1 = detail::num(m, "eps1", 0.0);
  const double eps2 = detail::num(m, "eps2", 0.0);
  const double om1 = detail::num(m, "om1", 1.0);
  const double om2 = detail::num(m, "om2", 1.0);
  if (family == "example_b")
    return make_example_b(r_star, s, z1, z2, eps1, eps2, om1, om2, theta0);
  if (family == "example_c")
    return make_example_c(r_star, s, z1, z2, eps1, eps2, om1, om2, theta0);
  fail(ErrorCode::InvalidArgument, "unknown curve family: " + family);
}

inline ProblemSetup load_problem(const ConfigMap& m, std::size_t n_samples = 2048) {
  ProblemSetup ps;
  const double theta_max = detail::num(m, "theta_max");
  ps.spec = validate_domain(curves_from_config(m), theta_max, n_samples);

  const auto [op_name, op_args] = detail::call_form(detail::str(m, "operator", "laplacian"));
  if (op_name == "laplacian") {
    ps.field = laplacian_field();
  } else if (op_name == "rotated") {
    require(op_args.size() == 2, ErrorCode::InvalidArgument, "rotated needs (c0, M1)");
    ps.field = rotated_anisotropic_field(op_args[0], op_args[1]);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown operator preset: " + op_name);
  }

  const auto [dr_name, dr_args] = detail::call_form(detail::str(m, "drift", "zero"));
  if (dr_name == "zero") {
    // presets start with zero drift
  } else if (dr_name == "const") {
    require(dr_args.size() == 2, ErrorCode::InvalidArgument, "const drift needs (bx, by)");
    with_constant_drift(ps.field, Vec2(dr_args[0], dr_args[1]));
  } else if (dr_name == "logangular") {
    require(dr_args.size() == 1, ErrorCode::InvalidArgument, "logangular needs (alpha)");
    with_angular_growth_drift(ps.field, dr_args[0], ps.spec.theta0());
  } else {
    fail(ErrorCode::InvalidArgument, "unknown drift preset: " + dr_name);
  }

  ps.ell = validate_ellipticity(ps.field, ps.spec);
  if (m.count("kappa")) {
    ps.kappa = detail::num(m, "kappa");
    if (!ps.ell.bounded()) std::get<UnboundedDrift>(ps.ell.drift).kappa = ps.kappa;
  }
  return ps;
}

inline ProblemSetup load_problem_file(const std::string& path, std::size_t n_samples = 2048) {
  return load_problem(parse_config_file(path), n_samples);
}

// ---------------------------------------------------------------------------
// CSV output

inline void write_nodes_csv(const std::string& path, const GridSolution& sol,
                            const DomainSpec& spec) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot open output file: " + path);
  out << "lambda,theta,x1,x2,u\n" << std::setprecision(17);
  for (int j = 0; j < sol.grid.n_theta; ++j)
    for (int i = 0; i < sol.grid.n_lambda; ++i) {
      const DomainPoint p = spec.point(sol.grid.lambda(i), sol.grid.theta(j));
      out << p.lambda << ',' << p.theta << ',' << p.x1 << ',' << p.x2 << ',' << sol.at(i, j)
          << '\n';
    }
}

inline void write_profiles_csv(const std::string& path, const CrossProfiles& cp) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot open output file: " + path);
  out << "theta,maxpos,maxneg,maxabs,osc\n" << std::setprecision(17);
  for (std::size_t j = 0; j < cp.theta.size(); ++j)
    out << cp.theta[j] << ',' << cp.max_pos[j] << ',' << cp.max_neg[j] << ',' << cp.max_abs[j]
        << ',' << cp.osc[j] << '\n';
}

inline void write_mc_csv(const std::string& path, const std::vector<DomainPoint>& points,
                         const std::vector<McEstimate>& estimates) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot open output file: " + path);
  out << "x1,x2,mean,stderr,n_exit_gamma,n_exit_inner,n_exit_far,n_capped\n"
      << std::setprecision(17);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& e = estimates[k];
    out << points[k].x1 << ',' << points[k].x2 << ',' << e.mean << ',' << e.stderr_ << ','
        << e.n_exit_gamma << ',' << e.n_exit_inner << ',' << e.n_exit_far << ',' << e.n_capped
        << '\n';
  }
}

inline void write_experiment_csv(const std::string& path, const DichotomyReport& rep) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::InvalidArgument, "cannot open output file: " + path);
  out << "theta,maxpos,maxneg,maxabs,osc,envelope\n" << std::setprecision(17);
  for (std::size_t j = 0; j < rep.profiles.theta.size(); ++j) {
    const double env = j < rep.envelope_values.size() ? rep.envelope_values[j] : 0.0;
    out << rep.profiles.theta[j] << ',' << rep.profiles.max_pos[j] << ','
        << rep.profiles.max_neg[j] << ',' << rep.profiles.max_abs[j] << ','
        << rep.profiles.osc[j] << ',' << env << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON report records

inline json to_json(const GrowthConstants& gc) {
  return json{{"d0", gc.d0},           {"theta_star", gc.theta_star},
              {"d_star", gc.d_star},   {"d_hat", gc.d_hat},
              {"s", gc.s},             {"eta_star", gc.eta_star},
              {"nu", gc.nu},           {"C_star", gc.C_star},
              {"nu_prime", gc.nu_prime}, {"C_star_prime", gc.C_star_prime}};
}

inline json to_json(const DichotomyReport& rep) {
  json j{{"branch", rep.branch},
         {"nu_emp", rep.nu_emp},
         {"nu_theory", rep.nu_theory},
         {"C_star", rep.C_star},
         {"eta_star", rep.eta_star},
         {"theta_star", rep.theta_star},
         {"M0", rep.M0},
         {"allowance", rep.allowance},
         {"tolerance", rep.tolerance},
         {"residual", rep.residual},
         {"dominance_count", rep.dominance_count},
         {"envelope_checked", rep.envelope.checked},
         {"envelope_pass", rep.envelope.pass},
         {"flat_pass", rep.flat.pass},
         {"nu_emp_ge_theory", rep.nu_emp_ge_theory},
         {"subex", rep.subex.verdict == SubexVerdict::Pass ? "PASS" : "FAIL"},
         {"pass", rep.pass()}};
  if (rep.nu_prime > 0.0) {
    j["nu_prime"] = rep.nu_prime;
    j["C_star_prime"] = rep.C_star_prime;
    j["k_star"] = rep.k_star;
    j["k_eps"] = rep.k_eps;
  }
  if (rep.nu_bar > 0.0) {
    j["nu_bar"] = rep.nu_bar;
    j["Theta0"] = rep.Theta0;
  }
  json viol = json::array();
  for (const auto& v : rep.envelope.violations)
    viol.push_back({{"where", v.where}, {"value", v.value}, {"bound", v.bound}});
  j["violations"] = viol;
  return j;
}

inline json to_json(const InhomogeneousReport& rep) {
  json scenarios = json::array();
  for (const auto& sc : rep.scenarios)
    scenarios.push_back({{"name", sc.name},
                         {"extremum_ok", sc.extremum_ok},
                         {"osc_ok", sc.osc_ok},
                         {"forcing_ok", sc.forcing_ok},
                         {"asymptotic_osc", sc.asymptotic_osc}});
  return json{{"K0", rep.K0},
              {"K1", rep.K1},
              {"tolerance", rep.tolerance},
              {"scenarios", scenarios},
              {"pass", rep.pass()}};
}

inline json to_json(const DependenceReport& rep) {
  json cases = json::array();
  for (const auto& c : rep.cases)
    cases.push_back({{"name", c.name}, {"pass", c.pass}, {"max_diff", c.max_diff}});
  return json{{"tolerance", rep.tolerance}, {"cases", cases}, {"pass", rep.pass()}};
}

}  // namespace winding
