#include "wmopt/metrics.hpp"

#include <map>

#include "wmopt/errors.hpp"

namespace wmopt {

namespace {

using KeyCache = std::map<KeyIndex, KeyVector>;

KeyCache decode_support(const WatermarkScheme& scheme) {
  KeyCache cache;
  for (const auto& table : scheme.tables()) {
    for (const auto& [key, row] : table.rows()) {
      if (!cache.count(key)) cache.emplace(key, scheme.keyset().key_at(key));
    }
  }
  return cache;
}

void fail(PropertyResult& r, Counterexample c) {
  if (r.passed) {
    r.passed = false;
    r.counterexample = std::move(c);
  }
}

}  // namespace

bool PropertyReport::all_passed() const {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

const PropertyResult& PropertyReport::get(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw ParameterError("no property named " + name);
}

PropertyReport check_scheme(const WatermarkScheme& scheme) {
  const std::size_t n = scheme.n();
  const int t = scheme.t();
  const Rational cap = scheme.alpha() / Rational(t);
  const KeyCache keys = decode_support(scheme);

  PropertyResult column{kColumnSum, true, {}};
  PropertyResult row{kRowSum, true, {}};
  PropertyResult capped{kCappedColumnSum, true, {}};
  PropertyResult bounded{kAlphaBoundedTotal, true, {}};
  PropertyResult mass{kMassAndSign, true, {}};

  for (int m = 1; m <= t; ++m) {
    const JointTable& table = scheme.table(m);
    RationalVector col(n), hit(n);
    Rational total;
    for (const auto& [key, r] : table.rows()) {
      const KeyVector& zeta = keys.at(key);
      for (const auto& [x, v] : r) {
        if (v.sign() < 0) fail(mass, {m, key, x, Rational(), v});
        col[x] += v;
        if (decode(x, zeta) == m) hit[x] += v;
        total += v;
      }
    }
    if (total != Rational(1)) fail(mass, {m, std::nullopt, std::nullopt, Rational(1), total});
    for (std::size_t x = 0; x < n; ++x) {
      if (col[x] != scheme.px()[x]) fail(column, {m, std::nullopt, x, scheme.px()[x], col[x]});
      const Rational need = min(cap, scheme.px()[x]);
      if (hit[x] < need) fail(capped, {m, std::nullopt, x, need, hit[x]});
    }
  }

  for (const auto& [key, zeta] : keys) {
    const Rational first = scheme.table(1).row_sum(key);
    for (int m = 2; m <= t; ++m) {
      const Rational s = scheme.table(m).row_sum(key);
      if (s != first) fail(row, {m, key, std::nullopt, first, s});
    }
  }

  const RationalVector decoded = nonzero_decode_mass(scheme);
  for (std::size_t x = 0; x < n; ++x) {
    if (decoded[x] > scheme.alpha()) fail(bounded, {0, std::nullopt, x, scheme.alpha(), decoded[x]});
  }

  PropertyReport report;
  report.results = {column, row, capped, bounded, mass};
  return report;
}

Rational miss_detection(const WatermarkScheme& scheme, int m) {
  if (m == 0) throw ParameterError("m = 0 is a false alarm; use false_alarm or worst_false_alarm");
  const JointTable& table = scheme.table(m);
  Rational beta;
  for (const auto& [key, row] : table.rows()) {
    const KeyVector zeta = scheme.keyset().key_at(key);
    for (const auto& [x, v] : row) {
      if (decode(x, zeta) != m) beta += v;
    }
  }
  return beta;
}

RationalVector nonzero_decode_mass(const WatermarkScheme& scheme) {
  RationalVector out(scheme.n());
  for (const auto& [key, p] : scheme.pz()) {
    const KeyVector zeta = scheme.keyset().key_at(key);
    for (std::size_t x = 0; x < scheme.n(); ++x) {
      if (decode(x, zeta) != 0) out[x] += p;
    }
  }
  return out;
}

Rational false_alarm(const WatermarkScheme& scheme, const RationalVector& qx) {
  if (qx.size() != scheme.n()) throw ParameterError("Q_X has the wrong length");
  const RationalVector decoded = nonzero_decode_mass(scheme);
  Rational out;
  for (std::size_t x = 0; x < qx.size(); ++x) out += qx[x] * decoded[x];
  return out;
}

std::size_t worst_false_alarm_token(const WatermarkScheme& scheme) {
  const RationalVector decoded = nonzero_decode_mass(scheme);
  std::size_t best = 0;
  for (std::size_t x = 1; x < decoded.size(); ++x) {
    if (decoded[x] > decoded[best]) best = x;
  }
  return best;
}

Rational worst_false_alarm(const WatermarkScheme& scheme) {
  return nonzero_decode_mass(scheme)[worst_false_alarm_token(scheme)];
}

Rational optimal_value(const TokenDistribution& px, const Rational& alpha, int t) {
  check_alpha(alpha);
  check_t(t, px.size());
  const Rational cap = alpha / Rational(t);
  Rational s;
  for (const auto& p : px.probs()) s += min(cap, p);
  return Rational(1) - s;
}

ErrorReport error_report(const WatermarkScheme& scheme) {
  ErrorReport r;
  Rational worst;
  for (int m = 1; m <= scheme.t(); ++m) {
    r.beta.push_back(miss_detection(scheme, m));
    worst = max(worst, r.beta.back());
  }
  r.worst_false_alarm = worst_false_alarm(scheme);
  r.optimal_value = optimal_value(scheme.px(), scheme.alpha(), scheme.t());
  r.gap = worst - r.optimal_value;
  return r;
}

nlohmann::json to_json(const PropertyReport& report) {
  nlohmann::json out = nlohmann::json::object();
  out["all_passed"] = report.all_passed();
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json item = {{"name", r.name}, {"passed", r.passed}};
    if (r.counterexample) {
      const auto& c = *r.counterexample;
      nlohmann::json ce = {{"expected", c.expected.str()}, {"actual", c.actual.str()}};
      if (c.m) ce["m"] = c.m;
      if (c.key) ce["key_index"] = *c.key;
      if (c.token) ce["token"] = *c.token + 1;
      item["counterexample"] = ce;
    }
    items.push_back(item);
  }
  out["properties"] = items;
  return out;
}

nlohmann::json to_json(const ErrorReport& report) {
  nlohmann::json beta = nlohmann::json::array();
  for (const auto& b : report.beta) beta.push_back(b.str());
  return {{"beta", beta},
          {"worst_false_alarm", report.worst_false_alarm.str()},
          {"optimal_value", report.optimal_value.str()},
          {"gap", report.gap.str()}};
}

}  // namespace wmopt
