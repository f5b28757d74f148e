#pragma once

#include <map>
#include <vector>

#include "wmopt/decompose.hpp"
#include "wmopt/keys.hpp"
#include "wmopt/scheme.hpp"
#include "wmopt/thot.hpp"

namespace wmopt {

struct StepIncrement {
  int j = 0;      // step length, u_j = (0_{N-j}, 1_j)
  Rational delta;  // Delta eta_{N-j+1}
};

struct StepDecomposition {
  std::size_t n = 0;
  int k = 0;
  std::vector<StepIncrement> increments;  // j = 1..K

  RationalVector reconstruct() const;
};

struct ImbalanceLedger {
  // per_key[m-1][key] = U_m(zeta); zero entries omitted.
  std::vector<std::map<KeyIndex, Rational>> per_key;
  Rational total;

  Rational total_for(int m) const;
};

// Keys whose support is exactly supp(omega).
std::vector<KeyIndex> structural_keys(const KeySet& keyset, const std::vector<bool>& omega);
// S(K): keys whose last K coordinates are nonzero.
std::vector<KeyIndex> anchored_keys(const KeySet& keyset, int k);

// |S(K) ∩ gamma_x^{-1}(m)| for x among the last K positions.
Rational anchored_slice_size(int n, int t, int k);

TableSet build_pm1(const THotDecomposition& decomp, const KeySet& keyset);

StepDecomposition step_decomposition(const RationalVector& px2, int t);

struct Pm2Result {
  TableSet tables;
  ImbalanceLedger ledger;
  StepDecomposition steps;
};
Pm2Result build_pm2(const RationalVector& px2, const KeySet& keyset);

TableSet build_pm3(const RationalVector& px3, const StepDecomposition& steps, const ImbalanceLedger& ledger,
                   const KeySet& keyset);

// Row-sum imbalance of each table against the row-wise maximum over messages.
ImbalanceLedger measure_imbalance(const TableSet& tables);

struct ConstructionAParts {
  PxSplit split;
  THotDecomposition px1_terms;
  TableSet pm1, pm2, pm3;  // on the sorted token view
  ImbalanceLedger ledger;
  StepDecomposition steps;
};

// Layers of Construction A on an already sorted P_X.
ConstructionAParts construction_a_parts(const RationalVector& sorted_px, const Rational& alpha, int t);

WatermarkScheme construct_a(const TokenDistribution& px, const Rational& alpha, int t);

}  // namespace wmopt
