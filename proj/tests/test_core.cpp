#include <cstdlib>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "wmopt/construct_a.hpp"
#include "wmopt/errors.hpp"
#include "wmopt/scheme_io.hpp"

using namespace wmopt;
using namespace wmopt::test;

TEST_CASE("rational parsing is exact") {
  CHECK(Rational::parse("0.05") == Rational(1, 20));
  CHECK(Rational::parse(".5") == Rational(1, 2));
  CHECK(Rational::parse("3/9") == Rational(1, 3));
  CHECK(Rational::parse("1") == Rational(1));
  CHECK(Rational::parse("0.1") + Rational::parse("0.2") == Rational::parse("0.3"));
  CHECK_THROWS_AS(Rational::parse("1e-3"), ParseError);
  CHECK_THROWS_AS(Rational::parse(""), ParseError);
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), ParameterError);
}

TEST_CASE("rational formatting") {
  CHECK(Rational(6, 8).str() == "3/4");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(3, 4).decimal() == "0.75");
  CHECK(Rational(1, 3).decimal() == "1/3");
  CHECK(Rational(91, 200).to_double() == doctest::Approx(0.455));
  CHECK(Rational(6, 8).denominator() == 4);
  CHECK(factorial(5) == Rational(120));
}

TEST_CASE("token distribution validation and sort permutation") {
  const TokenDistribution px(qv("0.6,0.05,0.25,0.1"));
  CHECK(px.size() == 4);
  REQUIRE(px.sorted() == qv("0.05,0.1,0.25,0.6"));
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(px.sorted()[i] == px.probs()[px.sort_perm()[i]]);
  CHECK_THROWS_AS(TokenDistribution(qv("0.5,0.4")), ValidationError);
  CHECK_THROWS_AS(TokenDistribution(qv("1.2,-0.2")), ValidationError);
  CHECK_THROWS_AS(TokenDistribution(RationalVector{}), ValidationError);

  const TokenDistribution ties(qv("0.25,0.25,0.5"));
  CHECK(ties.sort_perm() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("decode reads one coordinate") {
  CHECK(decode(1, key("0,1,2")) == 1);
  CHECK(decode(0, key("0,0,0")) == 0);
  CHECK(decode(3, key("3,0,2,1")) == 1);
  CHECK_THROWS_AS(decode(4, key("3,0,2,1")), IndexError);
}

TEST_CASE("reduced key set sizes") {
  CHECK(KeySet::reduced(4, 3).size() == 25);
  CHECK(KeySet::reduced(3, 2).size() == 7);
  const auto one = KeySet::reduced(1, 1);
  REQUIRE(one.size() == 2);
  CHECK(one.key_at(0) == key("1"));
  CHECK(one.key_at(1) == key("0"));
  CHECK_THROWS_AS(KeySet::reduced(2, 3), ParameterError);
  CHECK_THROWS_AS(reduced_keyset_size(40, 30), CapacityError);
  CHECK_THROWS_AS(enumerate_reduced_keyset(9, 8, 1000), CapacityError);
}

TEST_CASE("key set cardinality and order match brute force for L <= 7") {
  for (int length = 1; length <= 7; ++length) {
    for (int t = 1; t <= length; ++t) {
      const auto ks = KeySet::reduced(length, t);
      const auto brute = brute_force_keys(length, t);
      CAPTURE(length);
      CAPTURE(t);
      REQUIRE(ks.size() == brute.size());
      Rational expect = factorial(length) / factorial(length - t) + Rational(1);
      CHECK(Rational(static_cast<long>(ks.size())) == expect);
      for (KeyIndex i = 0; i < ks.size(); ++i) {
        const auto k = ks.key_at(i);
        REQUIRE(k.entries() == brute[i]);
        REQUIRE(ks.index_of(k) == i);
      }
      CHECK(ks.zero_key() == ks.size() - 1);
      CHECK_THROWS_AS(ks.key_at(ks.size()), IndexError);
    }
  }
}

TEST_CASE("every permutation key decodes each message at exactly one token") {
  const auto ks = KeySet::reduced(5, 3);
  for (const auto& k : ks.keys()) {
    if (k.is_zero()) continue;
    for (int m = 1; m <= 3; ++m) {
      int hits = 0;
      for (std::size_t x = 0; x < 5; ++x) hits += decode(x, k) == m;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("preimage slices") {
  const auto ks = KeySet::reduced(4, 3);
  const auto slice = preimage_slice(ks, 2, 1);
  CHECK(slice.size() == 6);
  CHECK(std::count(slice.begin(), slice.end(), ks.index_of(key("3,2,1,0"))) == 1);
  CHECK(std::count(slice.begin(), slice.end(), ks.index_of(key("2,3,1,0"))) == 1);

  for (int length = 2; length <= 6; ++length) {
    for (int t = 1; t < length; ++t) {
      const auto ks2 = KeySet::reduced(length, t);
      const auto brute = brute_force_keys(length, t);
      for (std::size_t x = 0; x < static_cast<std::size_t>(length); ++x) {
        for (int m = 0; m <= t; ++m) {
          std::vector<KeyIndex> expect;
          for (KeyIndex i = 0; i < brute.size(); ++i) {
            if (brute[i][x] == m) expect.push_back(i);
          }
          REQUIRE(preimage_slice(ks2, x, m) == expect);
        }
      }
    }
  }

  const auto listed = KeySet::from_keys(KeySetKind::explicit_list, 2, 1, {key("1,0"), key("0,1"), key("0,0")});
  const auto s = preimage_slice(listed, 0, 1);
  REQUIRE(s.size() == 1);
  CHECK(listed.key_at(s[0]) == key("1,0"));
  CHECK_THROWS_AS(preimage_slice(ks, 4, 1), IndexError);
  CHECK_THROWS_AS(preimage_slice(ks, 0, 4), ParameterError);
}

TEST_CASE("pattern matching agrees with filtering") {
  const auto ks = KeySet::reduced(5, 3);
  const auto all = ks.keys();
  KeyPattern p = unrestricted_pattern(5, 3);
  p[4] = 0b1110;
  p[3] = 0b1110;
  p[0] = 0b0011;
  std::vector<KeyIndex> expect;
  for (KeyIndex i = 0; i < all.size(); ++i) {
    const auto& e = all[i].entries();
    if (e[4] != 0 && e[3] != 0 && e[0] <= 1) expect.push_back(i);
  }
  CHECK(ks.matching(p) == expect);
  CHECK(ks.matching(unrestricted_pattern(5, 3)).size() == ks.size());
}

TEST_CASE("explicit key lists are validated") {
  CHECK_THROWS_AS(KeySet::from_keys(KeySetKind::explicit_list, 2, 1, {key("1,1")}), ValidationError);
  CHECK_THROWS_AS(KeySet::from_keys(KeySetKind::explicit_list, 2, 1, {key("1,0"), key("1,0")}), ValidationError);
  CHECK_THROWS_AS(KeySet::from_keys(KeySetKind::explicit_list, 2, 1, {key("1,0,0")}), ValidationError);
  CHECK(keyset_kind_from_string(to_string(KeySetKind::explicit_list)) == KeySetKind::explicit_list);
  CHECK_THROWS_AS(keyset_kind_from_string("dense"), ParseError);
}

TEST_CASE("enumeration cap from the environment") {
  ::unsetenv(kEnumerationCapEnv);
  CHECK(enumeration_cap_from_env() == kDefaultEnumerationCap);
  ::setenv(kEnumerationCapEnv, "42", 1);
  CHECK(enumeration_cap_from_env() == 42);
  ::setenv(kEnumerationCapEnv, "lots", 1);
  CHECK_THROWS_AS(enumeration_cap_from_env(), ParameterError);
  ::unsetenv(kEnumerationCapEnv);
}

namespace {

WatermarkScheme tiny_scheme() {
  // N=2, T=1: P_1 puts 1/2 on ((1,0), x=1) and 1/2 on ((0,0), x=2).
  const auto ks = KeySet::reduced(2, 1);
  TableSet tables = empty_tables(1);
  tables[0].add(ks.index_of(key("1,0")), 0, Rational(1, 2));
  tables[0].add(ks.index_of(key("0,0")), 1, Rational(1, 2));
  return WatermarkScheme(TokenDistribution(qv("0.5,0.5")), q("0.5"), 1, ks, tables, {"external", {}});
}

}  // namespace

TEST_CASE("joint tables are sparse") {
  JointTable t(2);
  t.add(3, 1, Rational(1, 4));
  t.add(3, 1, Rational(-1, 4));
  CHECK(t.empty());
  t.add(3, 0, Rational(1, 4));
  t.add(5, 0, Rational(1, 8));
  t.add(3, 2, Rational(1, 8));
  CHECK(t.nonzero_count() == 3);
  CHECK(t.row_sum(3) == Rational(3, 8));
  CHECK(t.total() == Rational(1, 2));
  CHECK(t.at(9, 0) == Rational(0));
}

TEST_CASE("scheme validation") {
  const auto s = tiny_scheme();
  CHECK(s.pz().size() == 2);
  CHECK(s.key_support() == 2);
  CHECK_THROWS_AS(s.table(2), ParameterError);

  const auto ks = KeySet::reduced(2, 1);
  TableSet half = empty_tables(1);
  half[0].add(0, 0, Rational(1, 2));
  CHECK_THROWS_AS(WatermarkScheme(TokenDistribution(qv("0.5,0.5")), q("0.5"), 1, ks, half, {}), ValidationError);
  TableSet bad_token = empty_tables(1);
  bad_token[0].add(0, 5, Rational(1));
  CHECK_THROWS_AS(WatermarkScheme(TokenDistribution(qv("0.5,0.5")), q("0.5"), 1, ks, bad_token, {}), ValidationError);
  CHECK_THROWS_AS(check_alpha(Rational(1)), ParameterError);
  CHECK_THROWS_AS(check_alpha(Rational(-1, 2)), ParameterError);
  CHECK_THROWS_AS(check_t(3, 2), ParameterError);
  CHECK_NOTHROW(check_alpha(Rational(0)));
}

TEST_CASE("scheme documents round trip") {
  const auto s = construct_a(TokenDistribution(qv("0.05,0.1,0.25,0.6")), q("0.9"), 3);
  const auto text = serialize_scheme(s);
  const auto back = deserialize_scheme(text);
  CHECK(back.tables() == s.tables());
  CHECK(back.keyset() == s.keyset());
  CHECK(back.alpha() == s.alpha());
  CHECK(back.px().probs() == s.px().probs());
  CHECK(back.provenance() == s.provenance());
  CHECK(serialize_scheme(back) == text);

  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["version"] == 1);
  CHECK(doc["alpha"] == "0.9");
  CHECK(doc["keyset"]["kind"] == "reduced");
}

TEST_CASE("malformed and invalid documents") {
  const auto doc = scheme_to_json(tiny_scheme());

  CHECK_THROWS_AS(deserialize_scheme("{\"version\": 1,"), ParseError);

  auto missing = doc;
  missing.erase("alpha");
  try {
    scheme_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/alpha") != std::string::npos);
  }

  auto negative = doc;
  negative["tables"]["1"][0][2] = "-1/2";
  CHECK_THROWS_AS(scheme_from_json(negative), ValidationError);

  auto wrong_sum = doc;
  wrong_sum["px"] = {"0.5", "0.6"};
  CHECK_THROWS_AS(scheme_from_json(wrong_sum), ValidationError);

  auto bad_token = doc;
  bad_token["tables"]["1"][0][1] = 3;
  CHECK_THROWS_AS(scheme_from_json(bad_token), ValidationError);
}

TEST_CASE("csv export") {
  const auto csv = export_csv(tiny_scheme());
  CHECK(csv.find("# N=2") != std::string::npos);
  CHECK(csv.find("m,key_index,key,token,mass") != std::string::npos);
  CHECK(csv.find("1,0,\"(1,0)\",1,1/2") != std::string::npos);
}

TEST_CASE("token order is restored on every key") {
  const auto ks = KeySet::reduced(3, 2);
  TableSet sorted = empty_tables(2);
  sorted[0].add(ks.index_of(key("1,2,0")), 0, Rational(1, 2));
  sorted[1].add(ks.index_of(key("1,2,0")), 1, Rational(1, 2));
  const auto back = restore_token_order(sorted, ks, {2, 0, 1});
  // sorted position 0 is token 3, position 1 is token 1
  CHECK(back[0].at(ks.index_of(key("2,0,1")), 2) == Rational(1, 2));
  CHECK(back[1].at(ks.index_of(key("2,0,1")), 0) == Rational(1, 2));
}
