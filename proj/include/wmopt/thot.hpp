#pragma once

#include <cstddef>
#include <vector>

#include "wmopt/rational.hpp"
#include "wmopt/token_distribution.hpp"

namespace wmopt {

struct THotTerm {
  std::vector<bool> omega;  // exactly T ones
  Rational lambda;          // > 0
};

struct THotDecomposition {
  std::size_t length = 0;
  int t = 0;
  std::vector<THotTerm> terms;

  RationalVector reconstruct() const;
};

// True iff T * max(a) <= sum(a).
bool is_t_hot_representable(const RationalVector& a, int t);

// Per-iteration state, for tests that audit the loop invariants.
struct DecompositionStep {
  RationalVector residual;  // after the subtraction
  std::size_t settled = 0;  // |{i : nu(i) = 0 or T nu(i) = sum(nu)}| after the subtraction
};

// Greedy decomposition (T largest residual entries, ties to the lower index).
// Throws PreconditionError when a is not representable.
THotDecomposition decompose_t_hot(const RationalVector& a, int t, std::vector<DecompositionStep>* trace = nullptr);

// Checks shape and exact reconstruction of a caller supplied decomposition.
void validate_decomposition(const THotDecomposition& d, const RationalVector& target);

}  // namespace wmopt
