#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wmopt/rational.hpp"

namespace wmopt {

using RationalVector = std::vector<Rational>;

// P_X over N tokens. sorted()[i] == probs()[sort_perm()[i]] and sorted() is non-decreasing.
class TokenDistribution {
 public:
  explicit TokenDistribution(RationalVector probs);

  // Parses a comma separated list of exact decimals or fractions.
  static TokenDistribution parse(const std::string& csv);

  std::size_t size() const { return probs_.size(); }
  const RationalVector& probs() const { return probs_; }
  const Rational& operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<std::size_t>& sort_perm() const { return perm_; }
  RationalVector sorted() const;
  bool is_sorted() const;

 private:
  RationalVector probs_;
  std::vector<std::size_t> perm_;
};

RationalVector parse_rational_list(const std::string& csv);
Rational sum(const RationalVector& v);

}  // namespace wmopt
