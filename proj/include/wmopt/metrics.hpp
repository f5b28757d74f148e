#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wmopt/scheme.hpp"

namespace wmopt {

struct Counterexample {
  int m = 0;                      // 0 when not message specific
  std::optional<KeyIndex> key;
  std::optional<std::size_t> token;  // 0-based
  Rational expected;
  Rational actual;
};

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::optional<Counterexample> counterexample;
};

struct PropertyReport {
  std::vector<PropertyResult> results;

  bool all_passed() const;
  const PropertyResult& get(const std::string& name) const;
};

inline constexpr const char* kColumnSum = "column-sum";
inline constexpr const char* kRowSum = "row-sum";
inline constexpr const char* kCappedColumnSum = "capped-column-sum";
inline constexpr const char* kAlphaBoundedTotal = "alpha-bounded-total-sum";
inline constexpr const char* kMassAndSign = "non-negative-unit-mass";

PropertyReport check_scheme(const WatermarkScheme& scheme);

// beta_m: probability the decoder misses message m (m in [1:T]).
Rational miss_detection(const WatermarkScheme& scheme, int m);

// sum_{m, zeta: zeta_x = m} P_Z(zeta) for each token x.
RationalVector nonzero_decode_mass(const WatermarkScheme& scheme);

// beta_0 under an arbitrary unwatermarked token law Q_X (independent of the key).
Rational false_alarm(const WatermarkScheme& scheme, const RationalVector& qx);

// Supremum of false_alarm over Q_X, attained at a point mass.
Rational worst_false_alarm(const WatermarkScheme& scheme);
std::size_t worst_false_alarm_token(const WatermarkScheme& scheme);

// 1 - sum_x min(alpha/T, P_X(x)).
Rational optimal_value(const TokenDistribution& px, const Rational& alpha, int t);

struct ErrorReport {
  std::vector<Rational> beta;
  Rational worst_false_alarm;
  Rational optimal_value;
  Rational gap;
};

ErrorReport error_report(const WatermarkScheme& scheme);

nlohmann::json to_json(const PropertyReport& report);
nlohmann::json to_json(const ErrorReport& report);

}  // namespace wmopt
