#pragma once

#include <optional>

#include "wmopt/rational.hpp"
#include "wmopt/token_distribution.hpp"

namespace wmopt {

struct CappedVector {
  RationalVector a;  // min(alpha/T, px)
  RationalVector r;  // px - a
};

struct PxSplit {
  RationalVector px1, px2, px3;
  int k = 0;        // positive entries of px2
  int k_tilde = 0;  // entries of px with px(x) >= alpha/T
  std::optional<Rational> y;
  RationalVector a;

  bool case_two() const { return y.has_value(); }
};

// Inputs are the sorted (non-decreasing) view of P_X.
CappedVector cap_vector(const RationalVector& sorted_px, const Rational& alpha, int t);
PxSplit split_px(const RationalVector& sorted_px, const Rational& alpha, int t);

CappedVector cap_vector(const TokenDistribution& px, const Rational& alpha, int t);
PxSplit split_px(const TokenDistribution& px, const Rational& alpha, int t);

}  // namespace wmopt
