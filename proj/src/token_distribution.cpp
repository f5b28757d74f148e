#include "wmopt/token_distribution.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wmopt/errors.hpp"

namespace wmopt {

TokenDistribution::TokenDistribution(RationalVector probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("token distribution is empty");
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i].sign() < 0) {
      throw ValidationError("token probability " + std::to_string(i + 1) + " is negative: " + probs_[i].str());
    }
  }
  const Rational total = sum(probs_);
  if (total != Rational(1)) throw ValidationError("token probabilities sum to " + total.str() + ", not 1");
  perm_.resize(probs_.size());
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  std::stable_sort(perm_.begin(), perm_.end(),
                   [this](std::size_t a, std::size_t b) { return probs_[a] < probs_[b]; });
}

TokenDistribution TokenDistribution::parse(const std::string& csv) {
  return TokenDistribution(parse_rational_list(csv));
}

RationalVector TokenDistribution::sorted() const {
  RationalVector out;
  out.reserve(probs_.size());
  for (std::size_t i : perm_) out.push_back(probs_[i]);
  return out;
}

bool TokenDistribution::is_sorted() const {
  return std::is_sorted(probs_.begin(), probs_.end());
}

RationalVector parse_rational_list(const std::string& csv) {
  RationalVector out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  if (out.empty()) throw ParseError("empty list");
  return out;
}

Rational sum(const RationalVector& v) {
  Rational s;
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace wmopt
