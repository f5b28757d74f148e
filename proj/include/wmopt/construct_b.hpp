#pragma once

#include <optional>

#include "wmopt/scheme.hpp"
#include "wmopt/thot.hpp"

namespace wmopt {

struct Extension {
  std::size_t n = 0;         // pseudo tokens
  RationalVector px_prime;   // length N + n
  RationalVector r;          // length N
  Rational r_total;          // R
  RationalVector a;
};

// Inputs are the sorted view of P_X.
Extension extend_px(const RationalVector& sorted_px, const Rational& alpha, int t, bool force_pseudo);
Extension extend_px(const TokenDistribution& px, const Rational& alpha, int t, bool force_pseudo);

struct ConstructionBOptions {
  bool force_pseudo = false;
  // Use this decomposition of px_prime instead of the greedy one (validated by exact reconstruction).
  std::optional<THotDecomposition> decomposition;
};

struct ConstructionBParts {
  Extension extension;
  THotDecomposition terms;
  KeySet keyset;
  TableSet extended;  // P'_m over N + n tokens
  TableSet folded;    // P_m over the N real tokens, sorted view
};

ConstructionBParts construction_b_parts(const RationalVector& sorted_px, const Rational& alpha, int t,
                                        const ConstructionBOptions& options = {});

WatermarkScheme construct_b(const TokenDistribution& px, const Rational& alpha, int t,
                            const ConstructionBOptions& options = {});
WatermarkScheme construct_b(const TokenDistribution& px, const Rational& alpha, int t, bool force_pseudo);

}  // namespace wmopt
