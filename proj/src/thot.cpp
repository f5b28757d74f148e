#include "wmopt/thot.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "wmopt/errors.hpp"

namespace wmopt {

namespace {

void check_t_range(std::size_t length, int t) {
  if (t < 1 || static_cast<std::size_t>(t) > length) {
    throw ParameterError("T = " + std::to_string(t) + " outside [1:" + std::to_string(length) + "]");
  }
}

std::size_t settled_count(const RationalVector& nu, const Rational& total, int t) {
  std::size_t n = 0;
  for (const auto& v : nu) {
    if (v.is_zero() || v * Rational(t) == total) ++n;
  }
  return n;
}

}  // namespace

RationalVector THotDecomposition::reconstruct() const {
  RationalVector out(length);
  for (const auto& term : terms) {
    for (std::size_t i = 0; i < length; ++i) {
      if (term.omega[i]) out[i] += term.lambda;
    }
  }
  return out;
}

bool is_t_hot_representable(const RationalVector& a, int t) {
  check_t_range(a.size(), t);
  for (const auto& v : a) {
    if (v.sign() < 0) throw ParameterError("T-hot test needs a non-negative vector");
  }
  const Rational top = *std::max_element(a.begin(), a.end());
  return top * Rational(t) <= sum(a);
}

THotDecomposition decompose_t_hot(const RationalVector& a, int t, std::vector<DecompositionStep>* trace) {
  if (!is_t_hot_representable(a, t)) throw PreconditionError("vector is not T-hot representable");
  const std::size_t len = a.size();
  const Rational tt(t);

  THotDecomposition out;
  out.length = len;
  out.t = t;

  RationalVector nu = a;
  Rational total = sum(nu);
  std::size_t settled = settled_count(nu, total, t);
  std::vector<std::size_t> order(len);

  while (!total.is_zero()) {
    if (out.terms.size() >= len) throw InvariantError("decomposition exceeded L iterations");

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + t, order.end(), [&](std::size_t i, std::size_t j) {
      return nu[j] < nu[i] || (nu[i] == nu[j] && i < j);
    });
    std::vector<bool> omega(len, false);
    for (int k = 0; k < t; ++k) omega[order[static_cast<std::size_t>(k)]] = true;

    std::optional<Rational> bound;
    for (std::size_t j = 0; j < len; ++j) {
      const Rational cand = omega[j] ? nu[j] * tt : total - nu[j] * tt;
      if (!bound || cand < *bound) bound = cand;
    }
    const Rational lambda = *bound / tt;
    if (lambda.sign() <= 0) throw InvariantError("greedy step made no progress");

    for (std::size_t j = 0; j < len; ++j) {
      if (omega[j]) nu[j] -= lambda;
    }
    total -= lambda * tt;
    out.terms.push_back({std::move(omega), lambda});

    Rational top;
    for (const auto& v : nu) {
      if (v.sign() < 0) throw InvariantError("residual went negative");
      top = max(top, v);
    }
    if (top * tt > total) throw InvariantError("residual lost representability");
    const std::size_t now = settled_count(nu, total, t);
    if (now <= settled && !total.is_zero()) throw InvariantError("settled index set did not grow");
    settled = now;
    if (trace) trace->push_back({nu, settled});
  }
  return out;
}

void validate_decomposition(const THotDecomposition& d, const RationalVector& target) {
  if (d.length != target.size()) throw PreconditionError("decomposition length mismatch");
  for (const auto& term : d.terms) {
    if (term.omega.size() != d.length) throw PreconditionError("T-hot vector has wrong length");
    if (std::count(term.omega.begin(), term.omega.end(), true) != d.t) {
      throw PreconditionError("term is not a T-hot vector");
    }
    if (term.lambda.sign() <= 0) throw PreconditionError("decomposition weights must be positive");
  }
  if (d.reconstruct() != target) throw PreconditionError("decomposition does not reconstruct its target");
}

}  // namespace wmopt
