#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "winding/constants.hpp"

using namespace winding;

namespace {

// Exhaustive re-derivation of the two branches, kept dumb on purpose.
struct OracleResult {
  DichotomyBranch::Tag tag;
  int i_star = -1;
  int violation = -1;
};

bool le_tol(double x, double y) {
  return x <= y + 1e-12 * std::max(std::abs(x), std::abs(y));
}

OracleResult oracle(const std::vector<double>& a, const std::vector<double>& lam) {
  const int n = static_cast<int>(a.size()) - 1;
  for (int i = 1; i <= n - 1; ++i)
    if (!le_tol(a[i], lam[i - 1] * std::max(a[i - 1], a[i + 1])))
      return {DichotomyBranch::Tag::Violation, -1, i};
  bool decay = true;
  for (int i = 1; i <= n - 1; ++i)
    if (!le_tol(a[i], lam[i - 1] * a[i - 1])) decay = false;
  if (decay) return {DichotomyBranch::Tag::Decay, -1, -1};
  for (int istar = 1; istar <= n - 1; ++istar) {
    if (!(a[istar] > 0.0)) continue;
    bool grow = true;
    for (int i = istar + 1; i <= n; ++i)
      if (!le_tol(a[i - 1] / lam[i - 2], a[i])) grow = false;
    if (grow) return {DichotomyBranch::Tag::Growth, istar, -1};
  }
  return {DichotomyBranch::Tag::Violation, -1, n - 1};
}

}  // namespace

TEST_CASE("classifier on the canonical sequences") {
  {
    const DichotomyBranch br = classify_sequence({1.0, 0.5, 0.25, 0.125}, {0.5, 0.5});
    CHECK(br.tag == DichotomyBranch::Tag::Decay);
    REQUIRE(br.products.size() == 2);
    CHECK(br.products[0] == 0.5);
    CHECK(br.products[1] == 0.25);
    CHECK(br.products[0] > br.products[1]);  // partial products strictly decrease
  }
  {
    const DichotomyBranch br = classify_sequence({1.0, 2.0, 4.0, 8.0}, {0.5, 0.5});
    CHECK(br.tag == DichotomyBranch::Tag::Growth);
    CHECK(br.i_star == 1);
    REQUIRE(br.lower_bounds.size() == 2);
    CHECK(br.lower_bounds[0] == 4.0);
    CHECK(br.lower_bounds[1] == 8.0);
    CHECK(br.lower_bounds[0] < br.lower_bounds[1]);  // lower bounds strictly increase
  }
  {
    const DichotomyBranch br = classify_sequence({1.0, 1.0, 1.0}, {0.5});
    CHECK(br.tag == DichotomyBranch::Tag::Violation);
    CHECK(br.violation_index == 1);
  }
}

TEST_CASE("classifier rejects malformed input") {
  CHECK_THROWS_MATCHES(classify_sequence({1.0, 0.5}, {0.5}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::LengthMismatch;
                       }));
  CHECK_THROWS_AS(classify_sequence({1.0, 0.5, 0.25}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(classify_sequence({1.0, -0.5, 0.25}, {0.5}), Error);
  CHECK_THROWS_AS(classify_sequence({1.0, 0.5, 0.25}, {1.5}), Error);
}

TEST_CASE("classifier agrees with the exhaustive oracle") {
  const double values[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  const double lams[] = {0.3, 0.5, 0.9};

  // exhaustive short sequences
  for (int len = 3; len <= 6; ++len) {
    std::vector<int> digits(static_cast<std::size_t>(len), 0);
    std::vector<double> a(static_cast<std::size_t>(len));
    while (true) {
      for (int i = 0; i < len; ++i) a[static_cast<std::size_t>(i)] = values[digits[i]];
      for (double l : lams) {
        const std::vector<double> lam(a.size() - 2, l);
        const DichotomyBranch got = classify_sequence(a, lam);
        const OracleResult want = oracle(a, lam);
        REQUIRE(got.tag == want.tag);
        if (want.tag == DichotomyBranch::Tag::Growth) REQUIRE(got.i_star == want.i_star);
        if (want.tag == DichotomyBranch::Tag::Violation)
          REQUIRE(got.violation_index == want.violation);
        // branch consequences
        if (got.tag == DichotomyBranch::Tag::Decay)
          for (std::size_t i = 0; i < got.products.size(); ++i)
            REQUIRE(a[i + 1] <= got.products[i] * a[0] + 1e-12 * (a[0] + 1.0));
        if (got.tag == DichotomyBranch::Tag::Growth)
          for (std::size_t i = 0; i < got.lower_bounds.size(); ++i)
            REQUIRE(a[static_cast<std::size_t>(got.i_star) + 1 + i] >=
                    got.lower_bounds[i] * (1.0 - 1e-12));
      }
      int pos = len - 1;
      while (pos >= 0 && digits[pos] == 5) digits[pos--] = 0;
      if (pos < 0) break;
      ++digits[pos];
    }
  }

  // sampled longer sequences
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> lpick(0, 2);
  for (int k = 0; k < 20000; ++k) {
    const int len = 7 + static_cast<int>(k % 4);
    std::vector<double> a(static_cast<std::size_t>(len));
    for (auto& v : a) v = values[pick(rng)];
    const double l = lams[lpick(rng)];
    const std::vector<double> lam(a.size() - 2, l);
    REQUIRE(classify_sequence(a, lam).tag == oracle(a, lam).tag);
  }
}
