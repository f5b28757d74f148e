#include "wmopt/construct_a.hpp"

#include <algorithm>
#include <set>

#include "wmopt/errors.hpp"

namespace wmopt {

namespace {

std::uint64_t nonzero_mask(int t) { return ((1ULL << (t + 1)) - 1) & ~1ULL; }

void require_reduced(const KeySet& keyset, std::size_t length, int t) {
  if (keyset.kind() != KeySetKind::reduced) throw ParameterError("construction needs the reduced key set");
  if (static_cast<std::size_t>(keyset.length()) != length || keyset.t() != t) {
    throw ParameterError("key set dimensions do not match the input vector");
  }
}

// Last k positions nonzero.
KeyPattern anchored_pattern(const KeySet& keyset, int k) {
  KeyPattern p = unrestricted_pattern(keyset.length(), keyset.t());
  for (int i = keyset.length() - k; i < keyset.length(); ++i) p[static_cast<std::size_t>(i)] = nonzero_mask(keyset.t());
  return p;
}

}  // namespace

RationalVector StepDecomposition::reconstruct() const {
  RationalVector out(n);
  for (const auto& inc : increments) {
    for (std::size_t i = n - static_cast<std::size_t>(inc.j); i < n; ++i) out[i] += inc.delta;
  }
  return out;
}

Rational ImbalanceLedger::total_for(int m) const {
  Rational s;
  for (const auto& [key, u] : per_key.at(static_cast<std::size_t>(m - 1))) s += u;
  return s;
}

std::vector<KeyIndex> structural_keys(const KeySet& keyset, const std::vector<bool>& omega) {
  require_reduced(keyset, omega.size(), keyset.t());
  if (std::count(omega.begin(), omega.end(), true) != keyset.t()) throw ParameterError("omega is not a T-hot vector");
  KeyPattern p(omega.size(), 1ULL);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (omega[i]) p[i] = nonzero_mask(keyset.t());
  }
  return keyset.matching(p);
}

std::vector<KeyIndex> anchored_keys(const KeySet& keyset, int k) {
  if (keyset.kind() != KeySetKind::reduced) throw ParameterError("anchored keys need the reduced key set");
  if (k < 1 || k > keyset.t() - 1) throw ParameterError("K must lie in [1:T-1]");
  return keyset.matching(anchored_pattern(keyset, k));
}

Rational anchored_slice_size(int n, int t, int k) {
  return factorial(t - 1) / factorial(t - k) * factorial(n - k) / factorial(n - t);
}

TableSet build_pm1(const THotDecomposition& decomp, const KeySet& keyset) {
  require_reduced(keyset, decomp.length, decomp.t);
  const int t = decomp.t;
  const Rational share = Rational(1) / factorial(t - 1);
  TableSet tables = empty_tables(t);
  for (const auto& term : decomp.terms) {
    const Rational mass = term.lambda * share;
    for (KeyIndex idx : structural_keys(keyset, term.omega)) {
      const KeyVector key = keyset.key_at(idx);
      for (std::size_t x = 0; x < key.size(); ++x) {
        if (term.omega[x]) tables[static_cast<std::size_t>(key[x] - 1)].add(idx, x, mass);
      }
    }
  }
  return tables;
}

StepDecomposition step_decomposition(const RationalVector& px2, int t) {
  const std::size_t n = px2.size();
  for (const auto& v : px2) {
    if (v.sign() < 0) throw PreconditionError("P_X^(2) has a negative entry");
  }
  if (!std::is_sorted(px2.begin(), px2.end())) throw PreconditionError("P_X^(2) must be non-decreasing");
  const int k = static_cast<int>(std::count_if(px2.begin(), px2.end(), [](const Rational& v) { return v.sign() > 0; }));
  if (k > t - 1) throw PreconditionError("P_X^(2) has more than T-1 positive entries");

  StepDecomposition s;
  s.n = n;
  s.k = k;
  for (int j = 1; j <= k; ++j) {
    const std::size_t at = n - static_cast<std::size_t>(j);
    const Rational below = at == 0 ? Rational() : px2[at - 1];
    s.increments.push_back({j, px2[at] - below});
  }
  return s;
}

ImbalanceLedger measure_imbalance(const TableSet& tables) {
  ImbalanceLedger ledger;
  ledger.per_key.resize(tables.size());
  std::set<KeyIndex> keys;
  for (const auto& table : tables) {
    for (const auto& [key, row] : table.rows()) keys.insert(key);
  }
  for (KeyIndex key : keys) {
    std::vector<Rational> sums;
    for (const auto& table : tables) sums.push_back(table.row_sum(key));
    const Rational top = *std::max_element(sums.begin(), sums.end());
    for (std::size_t m = 0; m < sums.size(); ++m) {
      if (sums[m] != top) ledger.per_key[m].emplace(key, top - sums[m]);
    }
  }
  if (!tables.empty()) ledger.total = ledger.total_for(1);
  return ledger;
}

Pm2Result build_pm2(const RationalVector& px2, const KeySet& keyset) {
  const int t = keyset.t();
  require_reduced(keyset, px2.size(), t);
  Pm2Result out;
  out.steps = step_decomposition(px2, t);
  out.tables = empty_tables(t);
  const int k = out.steps.k;
  const int n = static_cast<int>(px2.size());
  if (k == 0) {
    out.ledger.per_key.resize(static_cast<std::size_t>(t));
    return out;
  }

  const Rational c = anchored_slice_size(n, t, k);
  // slices[(x, m)] = S(K) ∩ gamma_x^{-1}(m) for x in the last K positions.
  std::map<std::pair<int, int>, std::vector<KeyIndex>> slices;
  for (int x = n - k; x < n; ++x) {
    for (int m = 1; m <= t; ++m) {
      KeyPattern p = anchored_pattern(keyset, k);
      p[static_cast<std::size_t>(x)] = 1ULL << m;
      auto keys = keyset.matching(p);
      if (Rational(static_cast<long>(keys.size())) != c) throw InvariantError("anchored slice size differs from closed form");
      slices.emplace(std::make_pair(x, m), std::move(keys));
    }
  }

  for (int j = k; j >= 1; --j) {
    const Rational& delta = out.steps.increments[static_cast<std::size_t>(j - 1)].delta;
    if (delta.is_zero()) continue;
    const Rational mass = delta / c;
    for (int x = n - j; x < n; ++x) {
      for (int m = 1; m <= t; ++m) {
        for (KeyIndex key : slices.at({x, m})) out.tables[static_cast<std::size_t>(m - 1)].add(key, static_cast<std::size_t>(x), mass);
      }
    }
  }

  out.ledger = measure_imbalance(out.tables);
  Rational expected;
  for (const auto& inc : out.steps.increments) expected += inc.delta * Rational(t - inc.j);
  for (int m = 1; m <= t; ++m) {
    if (out.ledger.total_for(m) != expected) throw InvariantError("row-sum imbalance differs across messages");
  }
  out.ledger.total = expected;
  return out;
}

TableSet build_pm3(const RationalVector& px3, const StepDecomposition& steps, const ImbalanceLedger& ledger,
                   const KeySet& keyset) {
  const int t = keyset.t();
  require_reduced(keyset, px3.size(), t);
  if (steps.n != px3.size()) throw ParameterError("step decomposition length mismatch");
  TableSet tables = empty_tables(t);
  const Rational r_total = sum(px3);
  const Rational& u = ledger.total;
  if (r_total < u) throw InvariantError("residual mass R is smaller than the imbalance U");
  if (r_total.is_zero()) return tables;

  const int n = static_cast<int>(px3.size());
  const int k = steps.k;
  for (int j = k; j >= 1; --j) {
    const Rational& delta = steps.increments[static_cast<std::size_t>(j - 1)].delta;
    if (delta.is_zero()) continue;
    for (int m = 1; m <= t; ++m) {
      KeyPattern p = anchored_pattern(keyset, k);
      for (int l = n - j; l < n; ++l) p[static_cast<std::size_t>(l)] &= ~(1ULL << m);
      const auto keys = keyset.matching(p);
      if (keys.empty()) throw InvariantError("no key available to absorb the imbalance");
      const Rational layer = delta * Rational(t - j) / Rational(static_cast<long>(keys.size()));
      for (int x = 0; x < n; ++x) {
        if (px3[static_cast<std::size_t>(x)].is_zero()) continue;
        const Rational mass = layer * px3[static_cast<std::size_t>(x)] / r_total;
        for (KeyIndex key : keys) tables[static_cast<std::size_t>(m - 1)].add(key, static_cast<std::size_t>(x), mass);
      }
    }
  }

  const KeyIndex zero = *keyset.zero_key();
  const Rational keep = Rational(1) - u / r_total;
  for (int x = 0; x < n; ++x) {
    const Rational mass = px3[static_cast<std::size_t>(x)] * keep;
    for (auto& table : tables) table.add(zero, static_cast<std::size_t>(x), mass);
  }
  return tables;
}

ConstructionAParts construction_a_parts(const RationalVector& sorted_px, const Rational& alpha, int t) {
  ConstructionAParts parts;
  parts.split = split_px(sorted_px, alpha, t);
  const KeySet keyset = KeySet::reduced(static_cast<int>(sorted_px.size()), t);
  parts.px1_terms = decompose_t_hot(parts.split.px1, t);
  parts.pm1 = build_pm1(parts.px1_terms, keyset);
  Pm2Result pm2 = build_pm2(parts.split.px2, keyset);
  parts.pm2 = std::move(pm2.tables);
  parts.ledger = std::move(pm2.ledger);
  parts.steps = std::move(pm2.steps);
  parts.pm3 = build_pm3(parts.split.px3, parts.steps, parts.ledger, keyset);
  return parts;
}

WatermarkScheme construct_a(const TokenDistribution& px, const Rational& alpha, int t) {
  check_alpha(alpha);
  check_t(t, px.size());
  const RationalVector sorted = px.sorted();
  ConstructionAParts parts = construction_a_parts(sorted, alpha, t);

  TableSet tables = parts.pm1;
  accumulate(tables, parts.pm2);
  accumulate(tables, parts.pm3);
  const KeySet keyset = KeySet::reduced(static_cast<int>(px.size()), t);
  tables = restore_token_order(tables, keyset, px.sort_perm());

  Provenance prov;
  prov.method = "A";
  prov.details["case"] = parts.split.case_two() ? "2" : "1";
  prov.details["K"] = std::to_string(parts.split.k);
  prov.details["K_tilde"] = std::to_string(parts.split.k_tilde);
  if (parts.split.y) prov.details["y"] = parts.split.y->str();
  prov.details["U"] = parts.ledger.total.str();
  prov.details["R"] = sum(parts.split.px3).str();
  return WatermarkScheme(px, alpha, t, keyset, std::move(tables), std::move(prov));
}

}  // namespace wmopt
