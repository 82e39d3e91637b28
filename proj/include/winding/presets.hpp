#pragma once

#include "winding/geometry.hpp"
#include "winding/operator.hpp"

namespace winding::presets {

/// The three shipped curve-family presets, matching the files under configs/.

inline CurvePair example_a_pair() { return make_example_a(1.0, 1.0, 2.0, 1.0, 0.0); }

inline CurvePair example_b_pair() {
  return make_example_b(1.0, 1.0, 4.0, 1.0, 0.3, 0.3, 3.0, 2.0, 0.0);
}

inline CurvePair example_c_pair() {
  return make_example_c(1.0, 1.0, 3.0, 1.0, 0.3, 0.3, 0.02, 0.03, 0.0);
}

inline DomainSpec example_a_spec(double theta_max = 16.0 * kPi) {
  return validate_domain(example_a_pair(), theta_max);
}

inline DomainSpec example_b_spec(double theta_max = 16.0 * kPi) {
  return validate_domain(example_b_pair(), theta_max);
}

inline DomainSpec example_c_spec(double theta_max = 8.0 * kPi) {
  return validate_domain(example_c_pair(), theta_max);
}

/// Concentric annulus r1 = a, r2 = b: deliberately violates the winding
/// nesting condition, used as an exactly solvable cross-check geometry.
inline DomainSpec annulus_spec(double a, double b, double theta0, double theta_max) {
  auto c1 = RadialCurve::analytic([a](double) { return a; }, [](double) { return 0.0; },
                                  [](double) { return 0.0; });
  auto c2 = RadialCurve::analytic([b](double) { return b; }, [](double) { return 0.0; },
                                  [](double) { return 0.0; });
  return make_unchecked_domain(make_custom(c1, c2, theta0), theta_max);
}

/// Bounded-drift coefficient presets paired with their exact ellipticity data.
inline std::vector<std::pair<std::string, CoefficientField>> bounded_fields() {
  std::vector<std::pair<std::string, CoefficientField>> out;
  out.emplace_back("laplacian", laplacian_field());
  {
    CoefficientField cf = laplacian_field();
    with_constant_drift(cf, Vec2(0.5, -0.2));
    out.emplace_back("laplacian+const", cf);
  }
  out.emplace_back("rotated(1,3)", rotated_anisotropic_field(1.0, 3.0));
  {
    CoefficientField cf = rotated_anisotropic_field(1.0, 3.0);
    with_constant_drift(cf, Vec2(0.5, -0.2));
    out.emplace_back("rotated(1,3)+const", cf);
  }
  return out;
}

}  // namespace winding::presets
