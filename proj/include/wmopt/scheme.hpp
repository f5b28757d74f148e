#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wmopt/keys.hpp"
#include "wmopt/rational.hpp"
#include "wmopt/token_distribution.hpp"

namespace wmopt {

// Sparse P_m(x, zeta): key index -> (0-based token -> mass). Zero masses are never stored.
class JointTable {
 public:
  using Row = std::map<std::size_t, Rational>;

  explicit JointTable(int m = 1) : m_(m) {}

  int message() const { return m_; }
  void add(KeyIndex key, std::size_t token, const Rational& mass);
  Rational at(KeyIndex key, std::size_t token) const;
  const std::map<KeyIndex, Row>& rows() const { return rows_; }
  Rational row_sum(KeyIndex key) const;
  Rational total() const;
  std::size_t nonzero_count() const;
  bool empty() const { return rows_.empty(); }

  JointTable& operator+=(const JointTable& other);
  friend bool operator==(const JointTable&, const JointTable&) = default;

 private:
  int m_;
  std::map<KeyIndex, Row> rows_;
};

using TableSet = std::vector<JointTable>;  // index m-1 holds P_m

TableSet empty_tables(int t);
void accumulate(TableSet& into, const TableSet& from);

struct Provenance {
  std::string method;  // "A", "B" or "external"
  std::map<std::string, std::string> details;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

class WatermarkScheme {
 public:
  // Validates dimensions and masses and derives P_Z from the row sums of P_1.
  WatermarkScheme(TokenDistribution px, Rational alpha, int t, KeySet keyset, TableSet tables, Provenance provenance);

  std::size_t n() const { return px_.size(); }
  int t() const { return t_; }
  const Rational& alpha() const { return alpha_; }
  const TokenDistribution& px() const { return px_; }
  const KeySet& keyset() const { return keyset_; }
  const TableSet& tables() const { return tables_; }
  const JointTable& table(int m) const;  // m in [1:T]
  const std::map<KeyIndex, Rational>& pz() const { return pz_; }
  const Provenance& provenance() const { return provenance_; }

  // Number of keys with positive P_Z mass.
  std::size_t key_support() const { return pz_.size(); }

 private:
  TokenDistribution px_;
  Rational alpha_;
  int t_;
  KeySet keyset_;
  TableSet tables_;
  std::map<KeyIndex, Rational> pz_;
  Provenance provenance_;
};

// Maps tables built on the sorted view of P_X back to original token ids.
// Sorted position i is original token perm[i]; key coordinates beyond perm.size() are untouched.
TableSet restore_token_order(const TableSet& sorted_tables, const KeySet& keyset, const std::vector<std::size_t>& perm);

void check_alpha(const Rational& alpha);
void check_t(int t, std::size_t n);

}  // namespace wmopt
