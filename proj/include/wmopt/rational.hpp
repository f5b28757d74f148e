#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace wmopt {

// Exact rational in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& q);

  // Accepts "3", "-0.05", ".5", "1/20". Exponents, inf and nan are rejected.
  static Rational parse(std::string_view text);

  const mpq_class& get() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  // "p/q", or "p" when the denominator is 1.
  std::string str() const;
  // Exact decimal when the expansion terminates, otherwise "p/q".
  std::string decimal() const;
  // Round-to-nearest.
  double to_double() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational factorial(int n);
// Smallest integer >= q, as a 64-bit value. Throws CapacityError on overflow.
std::uint64_t ceil_to_u64(const Rational& q);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace wmopt
