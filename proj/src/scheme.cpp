#include "wmopt/scheme.hpp"

#include "wmopt/errors.hpp"

namespace wmopt {

void JointTable::add(KeyIndex key, std::size_t token, const Rational& mass) {
  if (mass.is_zero()) return;
  auto& row = rows_[key];
  auto [it, inserted] = row.emplace(token, mass);
  if (!inserted) {
    it->second += mass;
    if (it->second.is_zero()) row.erase(it);
  }
  if (row.empty()) rows_.erase(key);
}

Rational JointTable::at(KeyIndex key, std::size_t token) const {
  const auto r = rows_.find(key);
  if (r == rows_.end()) return {};
  const auto c = r->second.find(token);
  return c == r->second.end() ? Rational() : c->second;
}

Rational JointTable::row_sum(KeyIndex key) const {
  Rational s;
  const auto r = rows_.find(key);
  if (r == rows_.end()) return s;
  for (const auto& [x, v] : r->second) s += v;
  return s;
}

Rational JointTable::total() const {
  Rational s;
  for (const auto& [key, row] : rows_) {
    for (const auto& [x, v] : row) s += v;
  }
  return s;
}

std::size_t JointTable::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& [key, row] : rows_) n += row.size();
  return n;
}

JointTable& JointTable::operator+=(const JointTable& other) {
  for (const auto& [key, row] : other.rows_) {
    for (const auto& [x, v] : row) add(key, x, v);
  }
  return *this;
}

TableSet empty_tables(int t) {
  TableSet out;
  out.reserve(static_cast<std::size_t>(t));
  for (int m = 1; m <= t; ++m) out.emplace_back(m);
  return out;
}

void accumulate(TableSet& into, const TableSet& from) {
  if (into.size() != from.size()) throw ParameterError("table count mismatch");
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

void check_alpha(const Rational& alpha) {
  if (alpha.sign() < 0 || alpha >= Rational(1)) throw ParameterError("alpha must lie in [0,1), got " + alpha.str());
}

void check_t(int t, std::size_t n) {
  if (t < 1 || static_cast<std::size_t>(t) > n) {
    throw ParameterError("T must lie in [1:" + std::to_string(n) + "], got " + std::to_string(t));
  }
}

WatermarkScheme::WatermarkScheme(TokenDistribution px, Rational alpha, int t, KeySet keyset, TableSet tables,
                                 Provenance provenance)
    : px_(std::move(px)),
      alpha_(std::move(alpha)),
      t_(t),
      keyset_(std::move(keyset)),
      tables_(std::move(tables)),
      provenance_(std::move(provenance)) {
  try {
    check_alpha(alpha_);
    check_t(t_, px_.size());
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  if (keyset_.t() != t_) throw ValidationError("key set T differs from scheme T");
  if (static_cast<std::size_t>(keyset_.length()) < px_.size()) throw ValidationError("keys shorter than N");
  if (tables_.size() != static_cast<std::size_t>(t_)) throw ValidationError("expected one table per message");
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const auto& table = tables_[i];
    if (table.message() != static_cast<int>(i) + 1) throw ValidationError("tables out of message order");
    for (const auto& [key, row] : table.rows()) {
      if (key >= keyset_.size()) throw ValidationError("key index " + std::to_string(key) + " outside key set");
      for (const auto& [x, v] : row) {
        if (x >= px_.size()) throw ValidationError("token index outside [1:N]");
        if (v.sign() <= 0) {
          throw ValidationError("non-positive mass " + v.str() + " in table " + std::to_string(i + 1) + " at key " +
                                std::to_string(key) + ", token " + std::to_string(x + 1));
        }
      }
    }
  }
  Rational total;
  for (const auto& [key, row] : tables_.front().rows()) {
    Rational s;
    for (const auto& [x, v] : row) s += v;
    pz_.emplace(key, s);
    total += s;
  }
  if (total != Rational(1)) throw ValidationError("key marginal sums to " + total.str() + ", not 1");
}

const JointTable& WatermarkScheme::table(int m) const {
  if (m < 1 || m > t_) throw ParameterError("message outside [1:T]");
  return tables_[static_cast<std::size_t>(m - 1)];
}

TableSet restore_token_order(const TableSet& sorted_tables, const KeySet& keyset, const std::vector<std::size_t>& perm) {
  if (keyset.kind() != KeySetKind::reduced) throw ParameterError("token relabelling needs a reduced key set");
  std::map<KeyIndex, KeyIndex> remap;
  auto target = [&](KeyIndex idx) {
    auto it = remap.find(idx);
    if (it != remap.end()) return it->second;
    const KeyVector key = keyset.key_at(idx);
    std::vector<int> entries = key.entries();
    for (std::size_t i = 0; i < perm.size(); ++i) entries[perm[i]] = key[i];
    const KeyIndex out = keyset.index_of(KeyVector(std::move(entries)));
    remap.emplace(idx, out);
    return out;
  };
  TableSet out = empty_tables(static_cast<int>(sorted_tables.size()));
  for (std::size_t m = 0; m < sorted_tables.size(); ++m) {
    for (const auto& [key, row] : sorted_tables[m].rows()) {
      const KeyIndex k = target(key);
      for (const auto& [x, v] : row) out[m].add(k, x < perm.size() ? perm[x] : x, v);
    }
  }
  return out;
}

}  // namespace wmopt
