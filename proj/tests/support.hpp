#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "golden.hpp"
#include "wmopt/keys.hpp"
#include "wmopt/rational.hpp"
#include "wmopt/scheme.hpp"
#include "wmopt/token_distribution.hpp"

namespace wmopt::test {

inline Rational q(const char* s) { return Rational::parse(s); }

inline RationalVector qv(const std::string& csv) { return parse_rational_list(csv); }

inline KeyVector key(const std::string& csv) {
  std::vector<int> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  return KeyVector(std::move(v));
}

// (key, m, x 1-based, mass)
using Cell = std::tuple<std::vector<int>, int, int, Rational>;

inline std::set<Cell> cells_of(const TableSet& tables, const KeySet& keyset) {
  std::set<Cell> out;
  for (const auto& table : tables) {
    for (const auto& [k, row] : table.rows()) {
      for (const auto& [x, v] : row) {
        out.emplace(keyset.key_at(k).entries(), table.message(), static_cast<int>(x) + 1, v);
      }
    }
  }
  return out;
}

inline std::set<Cell> cells_of(const std::vector<GoldenCell>& golden) {
  std::set<Cell> out;
  for (const auto& c : golden) out.emplace(key(c.key).entries(), c.m, c.x, Rational::parse(c.mass));
  return out;
}

inline std::string describe(const std::set<Cell>& cells) {
  std::ostringstream os;
  for (const auto& [k, m, x, v] : cells) os << KeyVector(k).str() << " m=" << m << " x=" << x << " " << v.str() << "\n";
  return os.str();
}

inline std::set<Cell> difference(const std::set<Cell>& a, const std::set<Cell>& b) {
  std::set<Cell> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// Brute force over [0:T]^L: all-zero, or 1..T each exactly once.
inline std::vector<std::vector<int>> brute_force_keys(int length, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<std::size_t>(length), 0);
  while (true) {
    std::vector<int> count(static_cast<std::size_t>(t) + 1, 0);
    for (int e : v) ++count[static_cast<std::size_t>(e)];
    bool ok = true;
    for (int m = 1; m <= t; ++m) ok = ok && count[static_cast<std::size_t>(m)] == 1;
    if (ok || count[0] == length) out.push_back(v);
    int p = 0;
    while (p < length && v[static_cast<std::size_t>(p)] == t) v[static_cast<std::size_t>(p++)] = 0;
    if (p == length) break;
    ++v[static_cast<std::size_t>(p)];
  }
  auto zero_last_colex = [](const std::vector<int>& a, const std::vector<int>& b) {
    const bool za = std::all_of(a.begin(), a.end(), [](int e) { return e == 0; });
    const bool zb = std::all_of(b.begin(), b.end(), [](int e) { return e == 0; });
    if (za != zb) return zb;
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  };
  std::sort(out.begin(), out.end(), zero_last_colex);
  return out;
}

// Random rational point of the simplex: integer weights over their sum.
inline RationalVector random_simplex(std::mt19937_64& rng, std::size_t n, long grain = 40, bool allow_zero = true) {
  std::uniform_int_distribution<long> d(allow_zero ? 0 : 1, grain);
  std::vector<long> w(n);
  long total = 0;
  do {
    total = 0;
    for (auto& e : w) total += (e = d(rng));
  } while (total == 0);
  RationalVector out;
  for (long e : w) out.emplace_back(e, total);
  return out;
}

// Rational in (0, 1) with a small denominator.
inline Rational random_alpha(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(2, 30);
  const long d = den(rng);
  std::uniform_int_distribution<long> num(1, d - 1);
  return Rational(num(rng), d);
}

inline std::vector<Rational> sorted_copy(RationalVector v) {
  std::sort(v.begin(), v.end());
  return v;
}

// 1 - sum_x min(alpha/T, P_X(x)), computed from scratch.
inline Rational formula_optimum(const RationalVector& px, const Rational& alpha, int t) {
  Rational s;
  const Rational cap = alpha / Rational(t);
  for (const auto& p : px) s += p < cap ? p : cap;
  return Rational(1) - s;
}

}  // namespace wmopt::test
