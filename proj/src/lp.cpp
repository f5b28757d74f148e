#include "wmopt/lp.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "wmopt/errors.hpp"
#include "wmopt/scheme.hpp"

namespace wmopt {

std::size_t LpProblem::var_pm(int m, std::size_t x, std::size_t k) const {
  return (static_cast<std::size_t>(m - 1) * n + x) * keys + k;
}
std::size_t LpProblem::var_pz(std::size_t k) const { return static_cast<std::size_t>(t) * n * keys + k; }
std::size_t LpProblem::var_t() const { return static_cast<std::size_t>(t) * n * keys + keys; }

LpProblem build_primal(const TokenDistribution& px, const Rational& alpha, int t, const KeySet& keyset,
                       std::size_t variable_cap, std::uint64_t enumeration_cap) {
  check_alpha(alpha);
  check_t(t, px.size());
  if (keyset.t() != t) throw ParameterError("key set T differs from T");
  if (static_cast<std::size_t>(keyset.length()) < px.size()) throw ParameterError("keys shorter than N");
  const std::vector<KeyVector> keys = keyset.keys(enumeration_cap);

  LpProblem lp;
  lp.n = px.size();
  lp.t = t;
  lp.keys = keys.size();
  const std::size_t pm_vars = static_cast<std::size_t>(t) * lp.n * lp.keys;
  if (pm_vars > variable_cap) {
    throw CapacityError("LP needs " + std::to_string(pm_vars) + " table variables, above the cap " + std::to_string(variable_cap));
  }

  lp.var_names.resize(pm_vars + lp.keys + 1);
  for (int m = 1; m <= t; ++m) {
    for (std::size_t x = 0; x < lp.n; ++x) {
      for (std::size_t k = 0; k < lp.keys; ++k) {
        lp.var_names[lp.var_pm(m, x, k)] = "P" + std::to_string(m) + "_" + std::to_string(x + 1) + "_" + std::to_string(k);
      }
    }
  }
  for (std::size_t k = 0; k < lp.keys; ++k) lp.var_names[lp.var_pz(k)] = "PZ_" + std::to_string(k);
  lp.var_names[lp.var_t()] = "t";
  lp.objective.assign(lp.num_vars(), Rational());
  lp.objective[lp.var_t()] = Rational(1);

  for (std::size_t x = 0; x < lp.n; ++x) {
    LpRow row{"fa_" + std::to_string(x + 1), {}, alpha};
    for (std::size_t k = 0; k < lp.keys; ++k) {
      if (decode(x, keys[k]) != 0) row.coeffs.emplace_back(lp.var_pz(k), Rational(1));
    }
    lp.inequalities.push_back(std::move(row));
  }
  for (int m = 1; m <= t; ++m) {
    LpRow row{"err_" + std::to_string(m), {}, Rational()};
    for (std::size_t x = 0; x < lp.n; ++x) {
      for (std::size_t k = 0; k < lp.keys; ++k) {
        if (decode(x, keys[k]) != m) row.coeffs.emplace_back(lp.var_pm(m, x, k), Rational(1));
      }
    }
    row.coeffs.emplace_back(lp.var_t(), Rational(-1));
    lp.inequalities.push_back(std::move(row));
  }

  for (int m = 1; m <= t; ++m) {
    for (std::size_t x = 0; x < lp.n; ++x) {
      LpRow row{"col_" + std::to_string(m) + "_" + std::to_string(x + 1), {}, px[x]};
      for (std::size_t k = 0; k < lp.keys; ++k) row.coeffs.emplace_back(lp.var_pm(m, x, k), Rational(1));
      lp.equalities.push_back(std::move(row));
    }
  }
  for (int m = 1; m <= t; ++m) {
    for (std::size_t k = 0; k < lp.keys; ++k) {
      LpRow row{"row_" + std::to_string(m) + "_" + std::to_string(k), {}, Rational()};
      for (std::size_t x = 0; x < lp.n; ++x) row.coeffs.emplace_back(lp.var_pm(m, x, k), Rational(1));
      row.coeffs.emplace_back(lp.var_pz(k), Rational(-1));
      lp.equalities.push_back(std::move(row));
    }
  }
  return lp;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense tableau. Columns: structural | slacks of <= rows | one artificial per row | rhs.
class Tableau {
 public:
  Tableau(const LpProblem& lp) : nv_(lp.num_vars()) {
    const std::size_t ni = lp.inequalities.size();
    const std::size_t ne = lp.equalities.size();
    rows_ = ni + ne;
    ns_ = ni;
    art0_ = nv_ + ns_;
    rhs_ = art0_ + rows_;
    cells_.assign(rows_, RationalVector(rhs_ + 1));
    sign_.assign(rows_, 1);
    basis_.resize(rows_);

    auto load = [&](std::size_t i, const LpRow& row, std::optional<std::size_t> slack) {
      auto& r = cells_[i];
      for (const auto& [j, v] : row.coeffs) r[j] += v;
      if (slack) r[nv_ + *slack] = Rational(1);
      r[rhs_] = row.rhs;
      if (row.rhs.sign() < 0) {
        sign_[i] = -1;
        for (auto& v : r) v = -v;
      }
      r[art0_ + i] = Rational(1);
      basis_[i] = art0_ + i;
    };
    for (std::size_t i = 0; i < ni; ++i) load(i, lp.inequalities[i], i);
    for (std::size_t i = 0; i < ne; ++i) load(ni + i, lp.equalities[i], std::nullopt);
  }

  // Reduced costs for the given column costs (artificial columns included).
  void price(const RationalVector& cost) {
    cost_ = cost;
    reduced_.assign(rhs_ + 1, Rational());
    for (std::size_t j = 0; j <= rhs_; ++j) reduced_[j] = j < rhs_ ? cost[j] : Rational();
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j <= rhs_; ++j) {
        if (!cells_[i][j].is_zero()) reduced_[j] -= cb * cells_[i][j];
      }
    }
  }

  // Returns false when the problem is unbounded in the current phase.
  bool optimize(std::size_t& pivots, std::size_t cap) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < art0_; ++j) {
        if (reduced_[j].sign() < 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational& a = cells_[i][*enter];
        if (a.sign() <= 0) continue;
        const Rational ratio = cells_[i][rhs_] / a;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
      if (++pivots > cap) throw SolverError("simplex pivot cap exceeded");
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& pr = cells_[r];
    const Rational inv = Rational(1) / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= rhs_; ++j) {
      if (!pr[j].is_zero()) {
        pr[j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](RationalVector& row) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(cells_[i]);
    }
    eliminate(reduced_);
    basis_[r] = c;
  }

  // Pivots basic artificials out where a structural or slack column allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < art0_) continue;
      for (std::size_t j = 0; j < art0_; ++j) {
        if (!cells_[i][j].is_zero()) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Rational objective() const { return -reduced_[rhs_]; }
  std::size_t columns() const { return rhs_; }
  std::size_t artificial_begin() const { return art0_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  RationalVector values() const {
    RationalVector v(rhs_);
    for (std::size_t i = 0; i < rows_; ++i) v[basis_[i]] = cells_[i][rhs_];
    return v;
  }

  // Simplex multipliers of the original rows: pi_i = sign_i * -(reduced cost of artificial i).
  RationalVector multipliers() const {
    RationalVector pi(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      pi[i] = -reduced_[art0_ + i];
      if (sign_[i] < 0) pi[i] = -pi[i];
    }
    return pi;
  }

 private:
  std::size_t nv_, ns_, rows_, art0_, rhs_;
  std::vector<RationalVector> cells_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  RationalVector cost_, reduced_;
};

}  // namespace

LpSolution solve(const LpProblem& problem, std::size_t pivot_cap) {
  Tableau tab(problem);
  LpSolution sol;

  RationalVector phase1(tab.columns());
  for (std::size_t j = tab.artificial_begin(); j < tab.columns(); ++j) phase1[j] = Rational(1);
  tab.price(phase1);
  tab.optimize(sol.pivots, pivot_cap);
  if (tab.objective().sign() > 0) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  tab.expel_artificials();

  RationalVector phase2(tab.columns());
  std::copy(problem.objective.begin(), problem.objective.end(), phase2.begin());
  tab.price(phase2);
  if (!tab.optimize(sol.pivots, pivot_cap)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.objective = tab.objective();
  const RationalVector v = tab.values();
  sol.primal.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(problem.num_vars()));
  sol.basis = tab.basis();
  const RationalVector pi = tab.multipliers();
  const std::size_t ni = problem.inequalities.size();
  for (std::size_t i = 0; i < ni; ++i) sol.dual.y.push_back(-pi[i]);
  for (std::size_t i = ni; i < pi.size(); ++i) sol.dual.z.push_back(-pi[i]);
  return sol;
}

DualCheck check_dual(const LpProblem& problem, const DualCertificate& cert) {
  if (cert.y.size() != problem.inequalities.size() || cert.z.size() != problem.equalities.size()) {
    throw ParameterError("certificate dimensions (" + std::to_string(cert.y.size()) + ", " + std::to_string(cert.z.size()) +
                         ") do not match the problem (" + std::to_string(problem.inequalities.size()) + ", " +
                         std::to_string(problem.equalities.size()) + ")");
  }
  DualCheck out;
  out.feasible = true;
  auto violate = [&](const std::string& what) {
    if (out.feasible) out.violation = what;
    out.feasible = false;
  };
  for (std::size_t i = 0; i < cert.y.size(); ++i) {
    if (cert.y[i].sign() < 0) violate("y[" + std::to_string(i) + "] is negative");
  }
  // lhs = -A'y - E'z, compared against d column by column.
  RationalVector lhs(problem.num_vars());
  for (std::size_t i = 0; i < cert.y.size(); ++i) {
    for (const auto& [j, a] : problem.inequalities[i].coeffs) lhs[j] -= cert.y[i] * a;
  }
  for (std::size_t i = 0; i < cert.z.size(); ++i) {
    for (const auto& [j, e] : problem.equalities[i].coeffs) lhs[j] -= cert.z[i] * e;
  }
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    if (lhs[j] > problem.objective[j]) {
      violate("dual constraint for " + problem.var_names[j] + " violated: " + lhs[j].str() + " > " +
              problem.objective[j].str());
    }
  }
  for (std::size_t i = 0; i < cert.y.size(); ++i) out.objective -= cert.y[i] * problem.inequalities[i].rhs;
  for (std::size_t i = 0; i < cert.z.size(); ++i) out.objective -= cert.z[i] * problem.equalities[i].rhs;
  return out;
}

bool is_primal_feasible(const LpProblem& problem, const RationalVector& p) {
  if (p.size() != problem.num_vars()) return false;
  for (const auto& v : p) {
    if (v.sign() < 0) return false;
  }
  auto lhs = [&](const LpRow& row) {
    Rational s;
    for (const auto& [j, a] : row.coeffs) s += a * p[j];
    return s;
  };
  for (const auto& row : problem.inequalities) {
    if (lhs(row) > row.rhs) return false;
  }
  for (const auto& row : problem.equalities) {
    if (lhs(row) != row.rhs) return false;
  }
  return true;
}

KeySet bijective_keyset(int n, int t, const std::optional<std::vector<KeyVector>>& seeds) {
  if (n < 1 || t < 1 || t > n) throw ConstructionError("no bijective key family for N = " + std::to_string(n) + ", T = " + std::to_string(t));
  std::vector<KeyVector> keys;
  if (seeds) {
    keys = *seeds;
  } else {
    for (int s = 0; s < n; ++s) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < t; ++i) e[static_cast<std::size_t>((i + s) % n)] = i + 1;
      keys.emplace_back(std::move(e));
    }
  }
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(t) + 1, false));
  bool has_zero = false;
  for (const auto& key : keys) {
    if (key.size() != static_cast<std::size_t>(n) || !is_reduced_member(key, t)) {
      throw ConstructionError("key " + key.str() + " does not assign 1..T to distinct tokens");
    }
    if (key.is_zero()) {
      has_zero = true;
      continue;
    }
    for (std::size_t x = 0; x < key.size(); ++x) {
      const int m = key[x];
      if (m == 0) continue;
      if (seen[x][static_cast<std::size_t>(m)]) {
        throw ConstructionError("token " + std::to_string(x + 1) + " decodes to " + std::to_string(m) + " under two keys");
      }
      seen[x][static_cast<std::size_t>(m)] = true;
    }
  }
  if (!has_zero) keys.emplace_back(std::vector<int>(static_cast<std::size_t>(n), 0));
  try {
    return KeySet::from_keys(KeySetKind::bijective, n, t, std::move(keys));
  } catch (const ValidationError& e) {
    throw ConstructionError(e.what());
  }
}

namespace {

std::string lp_number(const Rational& v) {
  const std::string d = v.decimal();
  if (d.find('/') == std::string::npos) return d;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v.to_double());
  return buf;
}

void write_row(std::ostringstream& os, const LpProblem& lp, const LpRow& row, const char* sense) {
  os << " " << row.name << ":";
  bool first = true;
  for (const auto& [j, a] : row.coeffs) {
    const bool neg = a.sign() < 0;
    const Rational mag = neg ? -a : a;
    os << (neg ? " - " : (first ? " " : " + "));
    if (mag != Rational(1)) os << lp_number(mag) << " ";
    os << lp.var_names[j];
    first = false;
  }
  if (first) os << " 0 " << lp.var_names.back();
  os << " " << sense << " " << lp_number(row.rhs) << "\n";
}

}  // namespace

std::string export_lp(const LpProblem& problem) {
  std::ostringstream os;
  os << "\\ N=" << problem.n << " T=" << problem.t << " keys=" << problem.keys << "\n";
  os << "Minimize\n obj: t\nSubject To\n";
  for (const auto& row : problem.inequalities) write_row(os, problem, row, "<=");
  for (const auto& row : problem.equalities) write_row(os, problem, row, "=");
  os << "End\n";
  return os.str();
}

nlohmann::json to_json(const LpSolution& solution) {
  nlohmann::json out = {{"status", to_string(solution.status)}, {"pivots", solution.pivots}};
  if (solution.status == LpStatus::optimal) {
    out["objective"] = solution.objective.str();
    out["objective_decimal"] = solution.objective.to_double();
    nlohmann::json y = nlohmann::json::array(), z = nlohmann::json::array();
    for (const auto& v : solution.dual.y) y.push_back(v.str());
    for (const auto& v : solution.dual.z) z.push_back(v.str());
    out["dual"] = {{"y", y}, {"z", z}};
  }
  return out;
}

}  // namespace wmopt
