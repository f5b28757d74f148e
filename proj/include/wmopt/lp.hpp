#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wmopt/keys.hpp"
#include "wmopt/rational.hpp"
#include "wmopt/token_distribution.hpp"

namespace wmopt {

inline constexpr std::size_t kDefaultVariableCap = 100'000;

struct LpRow {
  std::string name;
  std::vector<std::pair<std::size_t, Rational>> coeffs;  // sorted by column
  Rational rhs;
};

// minimize d'p subject to A p <= b, E p = c, p >= 0.
//
// Variables: P_m(x, zeta_k) at (m-1)*N*|Z| + x*|Z| + k, then P_Z(zeta_k) at T*N*|Z| + k, then t last.
// Inequality rows: alpha rows for x = 1..N, then error rows for m = 1..T.
// Equality rows: column sums for (m, x) in lexicographic order, then row sums for (m, k).
struct LpProblem {
  std::size_t n = 0;
  int t = 0;
  std::size_t keys = 0;
  std::vector<std::string> var_names;
  RationalVector objective;
  std::vector<LpRow> inequalities;
  std::vector<LpRow> equalities;

  std::size_t num_vars() const { return var_names.size(); }
  std::size_t var_pm(int m, std::size_t x, std::size_t k) const;
  std::size_t var_pz(std::size_t k) const;
  std::size_t var_t() const;
};

LpProblem build_primal(const TokenDistribution& px, const Rational& alpha, int t, const KeySet& keyset,
                       std::size_t variable_cap = kDefaultVariableCap,
                       std::uint64_t enumeration_cap = kDefaultEnumerationCap);

struct DualCertificate {
  RationalVector y;  // one per inequality row, >= 0
  RationalVector z;  // one per equality row
};

enum class LpStatus { optimal, infeasible, unbounded };
std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational objective;
  RationalVector primal;
  std::vector<std::size_t> basis;  // standard-form column per tableau row
  DualCertificate dual;            // optimal dual values (only at status optimal)
  std::size_t pivots = 0;
};

// Exact two-phase simplex with Bland's rule.
LpSolution solve(const LpProblem& problem, std::size_t pivot_cap = 1'000'000);

struct DualCheck {
  bool feasible = false;
  Rational objective;  // -y'b - z'c
  std::string violation;
};

DualCheck check_dual(const LpProblem& problem, const DualCertificate& cert);

// True iff p satisfies every constraint exactly.
bool is_primal_feasible(const LpProblem& problem, const RationalVector& p);

// Cyclic shifts of (1, 2, ..., T, 0, ..., 0) plus the all-zero key, unless seeds are given.
KeySet bijective_keyset(int n, int t, const std::optional<std::vector<KeyVector>>& seeds = std::nullopt);

// CPLEX LP text. Names: P<m>_<x>_<k> (x 1-based, k key index), PZ_<k>, t;
// rows fa_<x>, err_<m>, col_<m>_<x>, row_<m>_<k>.
std::string export_lp(const LpProblem& problem);

nlohmann::json to_json(const LpSolution& solution);

}  // namespace wmopt
