#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pfa/rational.hpp"

namespace pfa {

struct Interval {
  Rational a, b;
  Interval(Rational lo, Rational hi) : a(std::move(lo)), b(std::move(hi)) {
    if (!(a < b)) throw std::invalid_argument("Interval: need a < b");
  }
  Rational length() const { return b - a; }
};

// Dense polynomial, coefficient index = power. Canonical form has no
// trailing zero coefficients; the zero polynomial is the empty vector.
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_const(const Rational& c) {
  Poly p;
  if (c != 0) p.push_back(c);
  return p;
}

inline Poly poly_add(const Poly& f, const Poly& g) {
  Poly r(std::max(f.size(), g.size()), Rational(0));
  for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& f, const Rational& c) {
  if (c == 0) return {};
  Poly r = f;
  for (auto& x : r) x *= c;
  return r;
}

inline Poly poly_sub(const Poly& f, const Poly& g) { return poly_add(f, poly_scale(g, rat(-1))); }

inline Poly poly_mul(const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, Rational(0));
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  poly_trim(r);
  return r;
}

inline Rational poly_eval(const Poly& f, const Rational& x) {
  Rational v(0);
  for (size_t i = f.size(); i-- > 0;) v = v * x + f[i];
  return v;
}

inline Poly poly_derivative(const Poly& f) {
  if (f.size() <= 1) return {};
  Poly r(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * Rational(static_cast<long>(i));
  return r;
}

inline Poly poly_antiderivative(const Poly& f) {
  if (f.empty()) return {};
  Poly r(f.size() + 1, Rational(0));
  for (size_t i = 0; i < f.size(); ++i) r[i + 1] = f[i] / Rational(static_cast<long>(i + 1));
  return r;
}

inline Rational poly_defint(const Poly& f, const Rational& a, const Rational& b) {
  Poly F = poly_antiderivative(f);
  return poly_eval(F, b) - poly_eval(F, a);
}

// Piecewise polynomial function on R: zero left of the first knot, pieces[i]
// on (knots[i], knots[i+1]), the constant `tail` right of the last knot.
// Compactly supported functions have tail == 0; a nonzero tail shows up when
// antidifferentiating a density with nonzero total integral.
struct PiecewisePoly {
  std::vector<Rational> knots;
  std::vector<Poly> pieces;
  Rational tail = Rational(0);

  bool is_zero() const { return knots.empty() && tail == 0; }

  // Canonical form: trimmed pieces, no mergeable interior knot, no leading
  // zero piece, no trailing piece equal to the tail constant, and the empty
  // knot list exactly for the zero function.
  void canon() {
    for (auto& p : pieces) poly_trim(p);
    // merge interior knots whose two sides carry the same polynomial
    for (size_t i = 1; i < pieces.size();) {
      if (pieces[i - 1] == pieces[i]) {
        pieces.erase(pieces.begin() + static_cast<long>(i));
        knots.erase(knots.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
    while (!pieces.empty() && pieces.front().empty()) {
      pieces.erase(pieces.begin());
      knots.erase(knots.begin());
    }
    Poly tail_poly = poly_const(tail);
    while (!pieces.empty() && pieces.back() == tail_poly) {
      pieces.pop_back();
      knots.pop_back();
    }
    if (pieces.empty()) {
      if (tail == 0)
        knots.clear();
      else if (knots.size() > 1)
        knots.erase(knots.begin(), knots.end() - 1);
    }
  }

  // Polynomial on the open interval (x0, x1); the caller guarantees no knot
  // lies strictly inside.
  Poly over(const Rational& x0, const Rational& x1) const {
    if (knots.empty()) return poly_const(tail);
    if (x1 <= knots.front()) return {};
    if (x0 >= knots.back()) return poly_const(tail);
    for (size_t i = 0; i + 1 < knots.size(); ++i)
      if (knots[i] <= x0 && x1 <= knots[i + 1]) return pieces[i];
    throw std::logic_error("PiecewisePoly::over: interval straddles a knot");
  }

  Rational value_from_left(const Rational& x) const {
    if (knots.empty()) return tail;
    if (x <= knots.front()) return Rational(0);
    if (x > knots.back()) return tail;
    for (size_t i = 0; i + 1 < knots.size(); ++i)
      if (x <= knots[i + 1]) return poly_eval(pieces[i], x);
    return tail;
  }
};

inline std::vector<Rational> knot_union(const PiecewisePoly& f, const PiecewisePoly& g) {
  std::set<Rational> s(f.knots.begin(), f.knots.end());
  s.insert(g.knots.begin(), g.knots.end());
  return {s.begin(), s.end()};
}

template <typename Op>
PiecewisePoly pp_combine(const PiecewisePoly& f, const PiecewisePoly& g, Op op) {
  PiecewisePoly r;
  r.knots = knot_union(f, g);
  for (size_t i = 0; i + 1 < r.knots.size(); ++i)
    r.pieces.push_back(op(f.over(r.knots[i], r.knots[i + 1]), g.over(r.knots[i], r.knots[i + 1])));
  Poly t = op(poly_const(f.tail), poly_const(g.tail));
  if (t.size() > 1) throw std::logic_error("pp_combine: non-constant tail");
  r.tail = t.empty() ? Rational(0) : t[0];
  r.canon();
  return r;
}

inline PiecewisePoly pp_add(const PiecewisePoly& f, const PiecewisePoly& g) {
  return pp_combine(f, g, [](const Poly& a, const Poly& b) { return poly_add(a, b); });
}

inline PiecewisePoly pp_mul(const PiecewisePoly& f, const PiecewisePoly& g) {
  return pp_combine(f, g, [](const Poly& a, const Poly& b) { return poly_mul(a, b); });
}

inline PiecewisePoly pp_scale(const PiecewisePoly& f, const Rational& c) {
  PiecewisePoly r;
  if (c == 0) return r;
  r = f;
  for (auto& p : r.pieces) p = poly_scale(p, c);
  r.tail *= c;
  r.canon();
  return r;
}

inline PiecewisePoly pp_sub(const PiecewisePoly& f, const PiecewisePoly& g) {
  return pp_add(f, pp_scale(g, rat(-1)));
}

inline PiecewisePoly pp_derivative(const PiecewisePoly& f) {
  PiecewisePoly r;
  r.knots = f.knots;
  for (const auto& p : f.pieces) r.pieces.push_back(poly_derivative(p));
  r.tail = 0;
  r.canon();
  return r;
}

// Primitive anchored so the result vanishes left of the support. Requires a
// compactly supported integrand; the tail of the result is the total integral.
inline PiecewisePoly pp_antiderivative(const PiecewisePoly& f) {
  if (f.tail != 0) throw std::invalid_argument("pp_antiderivative: integrand has a tail");
  PiecewisePoly r;
  r.knots = f.knots;
  Rational acc(0);
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    Poly F = poly_antiderivative(f.pieces[i]);
    Rational c = acc - poly_eval(F, f.knots[i]);
    r.pieces.push_back(poly_add(F, poly_const(c)));
    acc = poly_eval(F, f.knots[i + 1]) + c;
  }
  r.tail = acc;
  r.canon();
  return r;
}

inline Rational pp_integral(const PiecewisePoly& f) {
  if (f.tail != 0) throw std::invalid_argument("pp_integral: integrand has a tail");
  Rational acc(0);
  for (size_t i = 0; i < f.pieces.size(); ++i)
    acc += poly_defint(f.pieces[i], f.knots[i], f.knots[i + 1]);
  return acc;
}

inline Rational pp_integral(const PiecewisePoly& f, const Interval& dom) {
  Rational acc(0);
  for (size_t i = 0; i < f.pieces.size(); ++i) {
    Rational lo = std::max(dom.a, f.knots[i]);
    Rational hi = std::min(dom.b, f.knots[i + 1]);
    if (lo < hi) acc += poly_defint(f.pieces[i], lo, hi);
  }
  if (f.tail != 0 && !f.knots.empty() && dom.b > f.knots.back())
    acc += f.tail * (dom.b - std::max(dom.a, f.knots.back()));
  return acc;
}

inline std::string pp_key(const PiecewisePoly& f) {
  std::ostringstream os;
  os << "k";
  for (const auto& k : f.knots) os << " " << rat_str(k);
  os << ";";
  for (const auto& p : f.pieces) {
    os << "[";
    for (const auto& c : p) os << rat_str(c) << ",";
    os << "]";
  }
  os << ";t" << rat_str(f.tail);
  return os.str();
}

// Differential form on R: a function (degree 0) or a density (degree 1).
struct Form1D {
  int degree = 1;
  PiecewisePoly c;

  bool is_zero() const { return c.is_zero(); }
  bool operator==(const Form1D& o) const {
    if (is_zero() && o.is_zero()) return true;
    return degree == o.degree && c.knots == o.c.knots && c.pieces == o.c.pieces && c.tail == o.c.tail;
  }
};

inline Form1D f1_zero(int degree = 1) { return Form1D{degree, {}}; }

inline Form1D f1_add(const Form1D& f, const Form1D& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (f.degree != g.degree) throw std::invalid_argument("f1_add: mixed degrees");
  return Form1D{f.degree, pp_add(f.c, g.c)};
}

inline Form1D f1_scale(const Form1D& f, const Rational& k) { return Form1D{f.degree, pp_scale(f.c, k)}; }

inline Form1D d1(const Form1D& f) {
  if (f.degree >= 1) return f1_zero(1);
  return Form1D{1, pp_derivative(f.c)};
}

// Graded product; degrees add, overflow past the top degree gives zero.
inline Form1D wedge1(const Form1D& f, const Form1D& g) {
  int d = f.degree + g.degree;
  if (f.is_zero() || g.is_zero()) return f1_zero(std::min(d, 1));
  if (d > 1) return f1_zero(1);
  return Form1D{d, pp_mul(f.c, g.c)};
}

inline Rational integrate1(const Form1D& f, const std::optional<Interval>& dom = std::nullopt) {
  if (f.degree != 1 || f.is_zero()) return Rational(0);
  return dom ? pp_integral(f.c, *dom) : pp_integral(f.c);
}

// x -> integral over (-inf, x]; compactly supported iff the total integral vanishes.
inline Form1D indefinite_integral(const Form1D& f) {
  if (f.degree != 1) throw std::invalid_argument("indefinite_integral: expects a density");
  return Form1D{0, pp_antiderivative(f.c)};
}

inline Form1D bump1(const Interval& D) {
  PiecewisePoly p;
  p.knots = {D.a, D.b};
  p.pieces = {poly_const(Rational(1) / D.length())};
  return Form1D{1, p};
}

inline bool f1_supported_in(const Form1D& f, const Interval& D) {
  if (f.is_zero()) return true;
  if (f.c.tail != 0) return false;
  return f.c.knots.front() >= D.a && f.c.knots.back() <= D.b;
}

// Continuity at every knot, zero limits at the outer knots when the tail
// vanishes; this is what membership in the degree 0 complex means here.
inline bool f1_valid(const Form1D& f) {
  if (f.degree != 0 && f.degree != 1) return false;
  if (f.is_zero()) return true;
  if (f.degree == 1) return f.c.tail == 0;
  const auto& k = f.c.knots;
  const auto& p = f.c.pieces;
  if (p.empty()) return true;
  if (poly_eval(p.front(), k.front()) != 0) return false;
  for (size_t i = 1; i < p.size(); ++i)
    if (poly_eval(p[i - 1], k[i]) != poly_eval(p[i], k[i])) return false;
  return poly_eval(p.back(), k.back()) == f.c.tail;
}

inline std::string f1_key(const Form1D& f) {
  if (f.is_zero()) return "F1:0";
  return "F1:" + std::to_string(f.degree) + ":" + pp_key(f.c);
}

// Contraction of the one dimensional compactly supported de Rham complex
// onto its top cohomology, against a reference density omega with total
// integral one. h annihilates functions and sends a density f to
// -(primitive of (f - omega * integral f)), which is compactly supported.
struct FormSdr1D {
  std::optional<Interval> domain;  // nullopt means all of R
  Form1D omega;

  Rational p(const Form1D& f) const { return integrate1(f); }

  Form1D i(const Rational& k) const { return f1_scale(omega, k); }

  // The inverse of d on exact densities, extended by zero: +h^1.
  Form1D hr(const Form1D& f) const {
    if (f.degree != 1 || f.is_zero()) return f1_zero(0);
    Form1D centered = f1_add(f, f1_scale(omega, -integrate1(f)));
    if (centered.is_zero()) return f1_zero(0);
    return indefinite_integral(centered);
  }

  Form1D h(const Form1D& f) const { return f1_scale(hr(f), rat(-1)); }
};

inline FormSdr1D sdr_interval(std::optional<Interval> D, const Form1D& omega) {
  if (omega.degree != 1) throw std::invalid_argument("sdr_interval: omega must be a density");
  if (integrate1(omega) != 1) throw std::invalid_argument("sdr_interval: omega must have integral 1");
  if (D && !f1_supported_in(omega, *D))
    throw std::invalid_argument("sdr_interval: omega not supported in the interval");
  return FormSdr1D{D, omega};
}

inline FormSdr1D sdr_interval(const Interval& D) { return sdr_interval(D, bump1(D)); }

}  // namespace pfa
