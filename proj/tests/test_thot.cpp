#include "doctest.h"
#include "support.hpp"
#include "wmopt/errors.hpp"
#include "wmopt/thot.hpp"

using namespace wmopt;
using namespace wmopt::test;

namespace {

std::vector<bool> hot(const std::string& bits) {
  std::vector<bool> v;
  for (char c : bits) v.push_back(c == '1');
  return v;
}

Rational weight_of(const THotDecomposition& d, const std::vector<bool>& omega) {
  Rational w;
  for (const auto& term : d.terms) {
    if (term.omega == omega) w += term.lambda;
  }
  return w;
}

// Independent audit of one greedy run.
void audit(const RationalVector& a, int t) {
  std::vector<DecompositionStep> trace;
  const auto d = decompose_t_hot(a, t, &trace);
  REQUIRE(d.reconstruct() == a);
  REQUIRE(d.terms.size() <= a.size());
  REQUIRE(trace.size() == d.terms.size());
  std::size_t last_settled = 0;
  for (std::size_t s = 0; s < trace.size(); ++s) {
    const auto& nu = trace[s].residual;
    Rational total;
    Rational top;
    std::size_t settled = 0;
    for (const auto& v : nu) {
      REQUIRE(v.sign() >= 0);
      total += v;
      top = max(top, v);
    }
    REQUIRE(top * Rational(t) <= total);
    for (const auto& v : nu) settled += v.is_zero() || v * Rational(t) == total;
    REQUIRE(settled == trace[s].settled);
    if (!total.is_zero()) REQUIRE(settled > last_settled);
    last_settled = settled;
  }
  for (const auto& term : d.terms) {
    REQUIRE(term.lambda.sign() > 0);
    REQUIRE(std::count(term.omega.begin(), term.omega.end(), true) == t);
  }
}

}  // namespace

TEST_CASE("representability test") {
  CHECK(is_t_hot_representable(qv("0.05,0.1,0.15,0.15"), 3));
  CHECK(is_t_hot_representable(qv("0,0,0,0"), 2));
  CHECK_FALSE(is_t_hot_representable(qv("0.05,0.1,0.25,0.3"), 3));
  CHECK(is_t_hot_representable(qv("0.1,0.3,0.4"), 2));
  CHECK_THROWS_AS(is_t_hot_representable(qv("0.5,0.5"), 3), ParameterError);
  CHECK_THROWS_AS(is_t_hot_representable(qv("0.5,0.5"), 0), ParameterError);
}

TEST_CASE("greedy decomposition of the first layer example") {
  const auto d = decompose_t_hot(qv("0.05,0.1,0.15,0.15"), 3);
  REQUIRE(d.terms.size() == 2);
  CHECK(weight_of(d, hot("0111")) == q("0.1"));
  CHECK(weight_of(d, hot("1011")) == q("0.05"));
}

TEST_CASE("single support decomposition") {
  const auto d = decompose_t_hot(qv("0,0.5,0.5"), 2);
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].omega == hot("011"));
  CHECK(d.terms[0].lambda == q("0.5"));
}

TEST_CASE("extended vector decomposes and reconstructs") {
  const auto a = qv("0.1,0.3,0.4,0.2");
  const auto d = decompose_t_hot(a, 2);
  CHECK(d.reconstruct() == a);
  audit(a, 2);
}

TEST_CASE("zero vector has no terms") {
  const auto d = decompose_t_hot(qv("0,0,0"), 2);
  CHECK(d.terms.empty());
  CHECK(d.reconstruct() == qv("0,0,0"));
}

TEST_CASE("ties go to the lower index") {
  const auto d = decompose_t_hot(qv("0.25,0.25,0.25,0.25"), 2);
  REQUIRE_FALSE(d.terms.empty());
  CHECK(d.terms[0].omega == hot("1100"));
  CHECK(d.reconstruct() == qv("0.25,0.25,0.25,0.25"));
}

TEST_CASE("non-representable input is rejected") {
  CHECK_THROWS_AS(decompose_t_hot(qv("0.05,0.1,0.25,0.3"), 3), PreconditionError);
}

TEST_CASE("supplied decompositions are validated") {
  THotDecomposition d{4, 2, {{hot("0110"), q("0.2")}, {hot("0011"), q("0.2")}, {hot("1100"), q("0.1")}}};
  CHECK_NOTHROW(validate_decomposition(d, qv("0.1,0.3,0.4,0.2")));
  CHECK_THROWS_AS(validate_decomposition(d, qv("0.1,0.3,0.3,0.3")), PreconditionError);
  THotDecomposition wrong_weight{3, 2, {{hot("011"), Rational(0)}}};
  CHECK_THROWS_AS(validate_decomposition(wrong_weight, qv("0,0,0")), PreconditionError);
  THotDecomposition not_hot{3, 2, {{hot("111"), q("0.1")}}};
  CHECK_THROWS_AS(validate_decomposition(not_hot, qv("0.1,0.1,0.1")), PreconditionError);
}

TEST_CASE("random representable vectors decompose exactly") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 1000; ++iter) {
    std::uniform_int_distribution<int> len_d(1, 8);
    const int len = len_d(rng);
    std::uniform_int_distribution<int> t_d(1, len);
    const int t = t_d(rng);
    auto a = random_simplex(rng, static_cast<std::size_t>(len));
    Rational total = sum(a);
    Rational top;
    for (const auto& v : a) top = max(top, v);
    if (top * Rational(t) > total) {
      // lift the smaller entries until T * max = sum
      const Rational need = top * Rational(t) - total;
      std::size_t below = 0;
      for (const auto& v : a) below += v < top;
      if (below == 0) continue;
      for (auto& v : a) {
        if (v < top) v += need / Rational(static_cast<long>(below));
      }
      // lifting can overshoot the max; scale back when needed
      top = Rational();
      for (const auto& v : a) top = max(top, v);
      if (top * Rational(t) > sum(a)) continue;
    }
    CAPTURE(iter);
    REQUIRE(is_t_hot_representable(a, t));
    audit(a, t);
  }
}

TEST_CASE("equality boundary keeps representability after the first step") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 1000; ++iter) {
    std::uniform_int_distribution<int> len_d(2, 8);
    const int len = len_d(rng);
    std::uniform_int_distribution<int> t_d(2, len);
    const int t = t_d(rng);
    // T-1 weights w_i plus the rest; force T * max = sum by construction
    auto w = random_simplex(rng, static_cast<std::size_t>(len - 1), 20, false);
    Rational rest = sum(w);
    Rational top = rest / Rational(t - 1);
    bool ok = true;
    for (const auto& v : w) ok = ok && v <= top;
    if (!ok) continue;
    w.push_back(top);
    REQUIRE(Rational(t) * top == sum(w));
    std::vector<DecompositionStep> trace;
    const auto d = decompose_t_hot(w, t, &trace);
    REQUIRE_FALSE(trace.empty());
    const auto& nu = trace.front().residual;
    Rational m;
    for (const auto& v : nu) m = max(m, v);
    CHECK(m * Rational(t) <= sum(nu));
    CHECK(d.reconstruct() == w);
  }
}
