#include "wmopt/decompose.hpp"

#include <algorithm>

#include "wmopt/errors.hpp"
#include "wmopt/scheme.hpp"
#include "wmopt/thot.hpp"

namespace wmopt {

namespace {

void check_sorted(const RationalVector& v) {
  if (!std::is_sorted(v.begin(), v.end())) throw PreconditionError("P_X must be given in non-decreasing order");
}

}  // namespace

CappedVector cap_vector(const RationalVector& sorted_px, const Rational& alpha, int t) {
  check_alpha(alpha);
  check_t(t, sorted_px.size());
  check_sorted(sorted_px);
  const Rational cap = alpha / Rational(t);
  CappedVector out;
  for (const auto& p : sorted_px) {
    out.a.push_back(min(cap, p));
    out.r.push_back(p - out.a.back());
  }
  return out;
}

PxSplit split_px(const RationalVector& sorted_px, const Rational& alpha, int t) {
  CappedVector cv = cap_vector(sorted_px, alpha, t);
  const std::size_t n = sorted_px.size();
  const Rational cap = alpha / Rational(t);

  PxSplit s;
  s.a = cv.a;
  s.px3 = cv.r;
  s.k_tilde = static_cast<int>(std::count_if(sorted_px.begin(), sorted_px.end(), [&](const Rational& p) { return p >= cap; }));

  if (is_t_hot_representable(s.a, t)) {
    s.px1 = s.a;
    s.px2 = RationalVector(n);
    return s;
  }

  // Smallest k in [K~ : T-1] whose leveling value y reaches a(N-k).
  std::optional<int> found;
  Rational y;
  for (int k = s.k_tilde; k <= t - 1; ++k) {
    Rational head;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i) head += s.a[i];
    y = head / Rational(t - k);
    if (y >= s.a[n - static_cast<std::size_t>(k) - 1]) {
      found = k;
      break;
    }
  }
  if (!found) throw InvariantError("leveling loop ended without a break");

  s.k = *found;
  s.y = y;
  s.px1 = s.a;
  s.px2 = RationalVector(n);
  for (std::size_t i = n - static_cast<std::size_t>(s.k); i < n; ++i) {
    s.px1[i] = y;
    s.px2[i] = s.a[i] - y;
  }
  return s;
}

CappedVector cap_vector(const TokenDistribution& px, const Rational& alpha, int t) {
  return cap_vector(px.sorted(), alpha, t);
}

PxSplit split_px(const TokenDistribution& px, const Rational& alpha, int t) { return split_px(px.sorted(), alpha, t); }

}  // namespace wmopt
