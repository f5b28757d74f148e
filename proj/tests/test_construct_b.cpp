#include "doctest.h"
#include "support.hpp"
#include "wmopt/construct_a.hpp"
#include "wmopt/construct_b.hpp"
#include "wmopt/errors.hpp"
#include "wmopt/metrics.hpp"

using namespace wmopt;
using namespace wmopt::test;

namespace {

std::vector<bool> hot(const std::string& bits) {
  std::vector<bool> v;
  for (char c : bits) v.push_back(c == '1');
  return v;
}

THotDecomposition walkthrough_terms() {
  return {4, 2, {{hot("0110"), q("0.2")}, {hot("0011"), q("0.2")}, {hot("1100"), q("0.1")}}};
}

void check_golden(const TableSet& tables, const KeySet& ks, const std::vector<GoldenCell>& golden) {
  const auto got = cells_of(tables, ks);
  const auto want = cells_of(golden);
  INFO("extra:\n" << describe(difference(got, want)) << "missing:\n" << describe(difference(want, got)));
  CHECK(got == want);
}

}  // namespace

TEST_CASE("extension with a forced pseudo token") {
  const auto e = extend_px(qv("0.1,0.3,0.6"), q("0.8"), 2, true);
  CHECK(e.n == 1);
  CHECK(e.px_prime == qv("0.1,0.3,0.4,0.2"));
  CHECK(e.r == qv("0,0,0.2"));
  CHECK(e.r_total == q("0.2"));
}

TEST_CASE("extension at the representability boundary") {
  const auto e = extend_px(qv("0.1,0.3,0.6"), q("0.8"), 2, false);
  CHECK(e.n == 0);
  CHECK(e.px_prime == qv("0.1,0.3,0.4"));
}

TEST_CASE("extension without residual") {
  const auto e = extend_px(qv("0.25,0.35,0.4"), q("0.8"), 2, false);
  CHECK(e.n == 0);
  CHECK(e.px_prime == qv("0.25,0.35,0.4"));
  CHECK(e.r_total == Rational(0));
}

TEST_CASE("extension of the running example") {
  const auto e = extend_px(qv("0.05,0.1,0.25,0.6"), q("0.9"), 3, false);
  CHECK(e.n == 1);
  CHECK(e.px_prime == qv("0.05,0.1,0.25,0.3,0.3"));
  CHECK(sum(e.px_prime) == Rational(1));
  CHECK(is_t_hot_representable(e.px_prime, 3));
}

TEST_CASE("alpha zero cannot be extended") {
  CHECK_THROWS_AS(extend_px(qv("0.5,0.5"), Rational(0), 2, true), UnsupportedParameterError);
}

TEST_CASE("walkthrough tables with the displayed decomposition") {
  ConstructionBOptions opt;
  opt.force_pseudo = true;
  opt.decomposition = walkthrough_terms();
  const auto parts = construction_b_parts(qv("0.1,0.3,0.6"), q("0.8"), 2, opt);
  check_golden(parts.extended, parts.keyset, kTable8);
  check_golden(parts.folded, parts.keyset, kTable9);

  const auto s = construct_b(TokenDistribution(qv("0.1,0.3,0.6")), q("0.8"), 2, opt);
  check_golden(s.tables(), s.keyset(), kTable9);
  CHECK(check_scheme(s).all_passed());
  CHECK(miss_detection(s, 1) == q("0.2"));
  CHECK(miss_detection(s, 2) == q("0.2"));
}

TEST_CASE("greedy walkthrough still passes every property") {
  const auto s = construct_b(TokenDistribution(qv("0.1,0.3,0.6")), q("0.8"), 2, true);
  CHECK(check_scheme(s).all_passed());
  CHECK(miss_detection(s, 1) == q("0.2"));
  CHECK(s.keyset().length() == 4);
  const auto plain = construct_b(TokenDistribution(qv("0.1,0.3,0.6")), q("0.8"), 2, false);
  CHECK(plain.keyset().length() == 3);
  CHECK(check_scheme(plain).all_passed());
}

TEST_CASE("bad supplied decompositions are rejected") {
  ConstructionBOptions opt;
  opt.force_pseudo = true;
  opt.decomposition = THotDecomposition{4, 2, {{hot("0110"), q("0.5")}}};
  CHECK_THROWS_AS(construct_b(TokenDistribution(qv("0.1,0.3,0.6")), q("0.8"), 2, opt), PreconditionError);
}

TEST_CASE("without residual the layer equals the first-layer build") {
  const auto px = qv("0.25,0.35,0.4");
  const auto parts = construction_b_parts(px, q("0.8"), 2);
  REQUIRE(parts.extension.n == 0);
  CHECK(parts.folded == build_pm1(decompose_t_hot(px, 2), KeySet::reduced(3, 2)));
}

TEST_CASE("running example via the pseudo-token route") {
  const TokenDistribution px(qv("0.05,0.1,0.25,0.6"));
  const auto a = construct_a(px, q("0.9"), 3);
  const auto b = construct_b(px, q("0.9"), 3);
  CHECK(cells_of(a.tables(), a.keyset()) != cells_of(b.tables(), b.keyset()));
  const auto ra = error_report(a);
  const auto rb = error_report(b);
  CHECK(ra.beta == rb.beta);
  CHECK(ra.optimal_value == rb.optimal_value);
  CHECK(rb.worst_false_alarm <= q("0.9"));
}

TEST_CASE("fold-back conserves rows and key set sizes are exact") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    std::uniform_int_distribution<int> n_d(1, 5);
    const int n = n_d(rng);
    std::uniform_int_distribution<int> t_d(1, std::min(n, 4));
    const int t = t_d(rng);
    const auto px = sorted_copy(random_simplex(rng, static_cast<std::size_t>(n)));
    const auto alpha = random_alpha(rng);
    const bool force = (iter % 3) == 0;
    CAPTURE(iter);
    const auto parts = construction_b_parts(px, alpha, t, {force, std::nullopt});
    const std::size_t len = static_cast<std::size_t>(n) + parts.extension.n;
    if (len <= 7) {
      REQUIRE(parts.keyset.size() == brute_force_keys(static_cast<int>(len), t).size());
    } else {
      const int l = static_cast<int>(len);
      REQUIRE(Rational(static_cast<long>(parts.keyset.size())) == factorial(l) / factorial(l - t) + Rational(1));
    }
    for (int m = 1; m <= t; ++m) {
      const auto& before = parts.extended[static_cast<std::size_t>(m - 1)];
      const auto& after = parts.folded[static_cast<std::size_t>(m - 1)];
      std::set<KeyIndex> keys;
      for (const auto& [k, row] : before.rows()) keys.insert(k);
      for (const auto& [k, row] : after.rows()) keys.insert(k);
      if (parts.extension.n > 0) {
        for (auto k : keys) REQUIRE(before.row_sum(k) == after.row_sum(k));
      } else {
        // without pseudo tokens the residual sits on the all-zero key
        const auto zero = *parts.keyset.zero_key();
        for (auto k : keys) {
          const Rational extra = k == zero ? parts.extension.r_total : Rational(0);
          REQUIRE(before.row_sum(k) + extra == after.row_sum(k));
        }
      }
      for (const auto& [k, row] : after.rows()) {
        for (const auto& [x, v] : row) REQUIRE(x < static_cast<std::size_t>(n));
      }
    }
    const auto s = construct_b(TokenDistribution(px), alpha, t, force);
    REQUIRE(check_scheme(s).all_passed());
  }
}
