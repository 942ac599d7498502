#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace pfa {

// Exact rational scalar. mpq_class keeps lowest terms with positive
// denominator once canonicalized; every constructor below canonicalizes.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "n" or "n/d" with optional sign, exactly.
inline Rational rat_parse(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("rat_parse: malformed rational '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator");
  r.canonicalize();
  return r;
}

// Canonical rendering: "n" for integers, "n/d" otherwise.
inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p())
    throw std::domain_error("to_long: not a small integer");
  return r.get_num().get_si();
}

inline Rational binomial(long n, long k) {
  if (n < 0) throw std::invalid_argument("binomial: negative n");
  if (k < 0 || k > n) return Rational(0);
  mpz_class v;
  mpz_bin_uiui(v.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(v);
}

inline Rational factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative n");
  mpz_class v;
  mpz_fac_ui(v.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(v);
}

// Bernoulli numbers with B_1 = -1/2, generated by the recurrence
// sum_{r=0}^{j} C(j+1, r) B_r = 0 for j > 0.
inline const Rational& bernoulli(int j) {
  if (j < 0) throw std::invalid_argument("bernoulli: negative index");
  static std::vector<Rational> table{Rational(1)};
  while (static_cast<int>(table.size()) <= j) {
    long m = static_cast<long>(table.size());
    Rational acc(0);
    for (long r = 0; r < m; ++r) acc += binomial(m + 1, r) * table[r];
    table.push_back(-acc / binomial(m + 1, m));
  }
  return table[j];
}

}  // namespace pfa
