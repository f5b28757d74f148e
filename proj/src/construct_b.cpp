#include "wmopt/construct_b.hpp"

#include "wmopt/construct_a.hpp"
#include "wmopt/decompose.hpp"
#include "wmopt/errors.hpp"

namespace wmopt {

Extension extend_px(const RationalVector& sorted_px, const Rational& alpha, int t, bool force_pseudo) {
  CappedVector cv = cap_vector(sorted_px, alpha, t);
  Extension e;
  e.a = cv.a;
  e.r = cv.r;
  e.r_total = sum(cv.r);
  e.px_prime = cv.a;
  if ((is_t_hot_representable(cv.a, t) && !force_pseudo) || e.r_total.is_zero()) return e;

  const Rational& top = cv.a.back();
  if (top.is_zero()) throw UnsupportedParameterError("alpha = 0 leaves no capacity for pseudo tokens");
  e.n = ceil_to_u64(e.r_total / top);
  const Rational fill = e.r_total / Rational(static_cast<long>(e.n));
  e.px_prime.insert(e.px_prime.end(), e.n, fill);
  if (!is_t_hot_representable(e.px_prime, t)) throw InvariantError("extended vector is not T-hot representable");
  return e;
}

Extension extend_px(const TokenDistribution& px, const Rational& alpha, int t, bool force_pseudo) {
  return extend_px(px.sorted(), alpha, t, force_pseudo);
}

ConstructionBParts construction_b_parts(const RationalVector& sorted_px, const Rational& alpha, int t,
                                        const ConstructionBOptions& options) {
  check_alpha(alpha);
  check_t(t, sorted_px.size());
  Extension ext = extend_px(sorted_px, alpha, t, options.force_pseudo);
  const std::size_t n_real = sorted_px.size();
  const std::size_t length = n_real + ext.n;
  if (length > static_cast<std::size_t>(INT32_MAX)) throw CapacityError("extended token set too large");

  THotDecomposition terms;
  if (options.decomposition) {
    terms = *options.decomposition;
    if (terms.t != t) throw PreconditionError("supplied decomposition has a different T");
    validate_decomposition(terms, ext.px_prime);
  } else {
    terms = decompose_t_hot(ext.px_prime, t);
  }

  KeySet keyset = KeySet::reduced(static_cast<int>(length), t);
  TableSet extended = build_pm1(terms, keyset);

  TableSet folded = empty_tables(t);
  for (std::size_t m = 0; m < extended.size(); ++m) {
    for (const auto& [key, row] : extended[m].rows()) {
      Rational pseudo;
      for (const auto& [x, v] : row) {
        if (x < n_real) {
          folded[m].add(key, x, v);
        } else {
          pseudo += v;
        }
      }
      if (pseudo.is_zero()) continue;
      for (std::size_t x = 0; x < n_real; ++x) {
        if (!ext.r[x].is_zero()) folded[m].add(key, x, ext.r[x] / ext.r_total * pseudo);
      }
    }
  }
  if (ext.n == 0) {
    const KeyIndex zero = *keyset.zero_key();
    for (auto& table : folded) {
      for (std::size_t x = 0; x < n_real; ++x) table.add(zero, x, ext.r[x]);
    }
  }

  ConstructionBParts parts{std::move(ext), std::move(terms), keyset, std::move(extended), std::move(folded)};
  return parts;
}

WatermarkScheme construct_b(const TokenDistribution& px, const Rational& alpha, int t,
                            const ConstructionBOptions& options) {
  check_alpha(alpha);
  check_t(t, px.size());
  ConstructionBParts parts = construction_b_parts(px.sorted(), alpha, t, options);
  TableSet tables = restore_token_order(parts.folded, parts.keyset, px.sort_perm());

  Provenance prov;
  prov.method = "B";
  prov.details["pseudo_tokens"] = std::to_string(parts.extension.n);
  prov.details["force_pseudo"] = options.force_pseudo ? "true" : "false";
  prov.details["R"] = parts.extension.r_total.str();
  prov.details["decomposition"] = options.decomposition ? "supplied" : "greedy";
  return WatermarkScheme(px, alpha, t, parts.keyset, std::move(tables), std::move(prov));
}

WatermarkScheme construct_b(const TokenDistribution& px, const Rational& alpha, int t, bool force_pseudo) {
  ConstructionBOptions options;
  options.force_pseudo = force_pseudo;
  return construct_b(px, alpha, t, options);
}

}  // namespace wmopt
