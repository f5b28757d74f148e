#include "wmopt/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <ostream>

#include "wmopt/errors.hpp"

namespace wmopt {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw ParameterError("zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const std::string original(text);
  if (s.empty()) throw ParseError("empty number");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = trim(s.substr(slash + 1));
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed fraction '" + original + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + original + "'");
    if (negative) n = -n;
    return Rational(mpq_class(n, d));
  }

  std::string_view body = s;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  std::string_view int_part = body;
  std::string_view frac_part;
  if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw ParseError("malformed decimal '" + original + "'");
    if (!int_part.empty() && !all_digits(int_part)) throw ParseError("malformed decimal '" + original + "'");
    if (!frac_part.empty() && !all_digits(frac_part)) {
      throw ParseError("malformed decimal '" + original + "' (exponent or float notation is not accepted)");
    }
  } else if (!all_digits(int_part)) {
    throw ParseError("malformed number '" + original + "' (exponent or float notation is not accepted)");
  }

  const std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class n(digits.empty() ? std::string("0") : digits, 10);
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 10, frac_part.size());
  if (negative) n = -n;
  return Rational(mpq_class(n, d));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw ParameterError("division by zero");
  q_ /= o.q_;
  return *this;
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal() const {
  mpz_class den = q_.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return str();

  const unsigned long k = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
  mpz_class scaled = abs(q_.get_num()) * scale / q_.get_den();
  std::string digits = scaled.get_str();
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  std::string out = sign() < 0 ? "-" : "";
  out += digits.substr(0, digits.size() - k);
  if (k > 0) out += "." + digits.substr(digits.size() - k);
  return out;
}

double Rational::to_double() const {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_q(tmp, q_.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational factorial(int n) {
  if (n < 0) throw ParameterError("factorial of a negative number");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(mpq_class(f));
}

std::uint64_t ceil_to_u64(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get().get_num_mpz_t(), q.get().get_den_mpz_t());
  if (c < 0) throw ParameterError("negative value where a count was expected");
  if (!c.fits_ulong_p()) throw CapacityError("count does not fit in 64 bits");
  return c.get_ui();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace wmopt
