#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pfa/forms1d.hpp"
#include "pfa/forms2d.hpp"
#include "pfa/lie.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Chain elements
//
// Envelope1 / Envelope2: Sym of (Lie basis element) x (compactly supported
// form), with the form complex shifted so that top forms sit in degree 0.
// ChernSimons: Sym of (form on the plane) x (circle class 1 or theta), shifted
// by two. Cohomology-side factors drop the form part and keep the discrete
// label; both elements sides share the monomial machinery.
// ---------------------------------------------------------------------------

enum class TheoryKind { Envelope1, Envelope2, ChernSimons };

struct Factor {
  bool coh = false;
  int lie = -1;   // basis index for envelope kinds
  Form1D f1;      // Envelope1 chain factors
  Form2D f2;      // Envelope2 / ChernSimons chain factors
  int upow = 0;   // circle class degree for ChernSimons
};

inline Factor env1_factor(int lie, const Form1D& w) {
  Factor f;
  f.lie = lie;
  f.f1 = w;
  return f;
}

inline Factor env2_factor(int lie, const Form2D& w) {
  Factor f;
  f.lie = lie;
  f.f2 = w;
  return f;
}

inline Factor cs_factor(const Form2D& w, int upow) {
  Factor f;
  f.f2 = w;
  f.upow = upow;
  return f;
}

inline Factor env_coh_factor(int lie) {
  Factor f;
  f.coh = true;
  f.lie = lie;
  return f;
}

inline Factor cs_coh_factor(int upow) {
  Factor f;
  f.coh = true;
  f.upow = upow;
  return f;
}

inline bool factor_repr_zero(TheoryKind k, const Factor& f) {
  if (f.coh) return false;
  if (k == TheoryKind::Envelope1) return f.f1.is_zero();
  return !f.f2.has_terms();
}

inline int factor_form_degree(TheoryKind k, const Factor& f) {
  if (f.coh) return 0;
  if (k == TheoryKind::Envelope1) return f.f1.degree;
  auto d = f.f2.raw_degree();
  return d ? *d : 0;
}

// Degree in the shifted complex. Both envelope theories shift the form
// degree down by one, which is what makes the bracket part of the
// differential a degree +1 map; the Chern-Simons model shifts by two and the
// circle class adds its own degree. Cohomology factors carry the degree of
// the class they name: top forms land in degree m - 1.
inline int factor_degree(TheoryKind k, const Factor& f) {
  switch (k) {
    case TheoryKind::Envelope1:
      return f.coh ? 0 : factor_form_degree(k, f) - 1;
    case TheoryKind::Envelope2:
      return f.coh ? 1 : factor_form_degree(k, f) - 1;
    case TheoryKind::ChernSimons:
      return f.coh ? f.upow : factor_form_degree(k, f) - 2 + f.upow;
  }
  return 0;
}

inline std::string factor_key(TheoryKind k, const Factor& f) {
  std::string s = f.coh ? "c:" : "v:";
  if (k != TheoryKind::ChernSimons) s += "g" + std::to_string(f.lie) + ":";
  if (!f.coh) {
    if (k == TheoryKind::Envelope1)
      s += f1_key(f.f1);
    else
      s += f2_key(f.f2);
  }
  if (k == TheoryKind::ChernSimons) s += ":u" + std::to_string(f.upow);
  return s;
}

struct Monomial {
  Rational coef;
  std::vector<Factor> factors;
};

struct ChainElement {
  TheoryKind kind = TheoryKind::Envelope1;
  std::vector<Monomial> mons;

  bool repr_zero() const { return mons.empty(); }
};

inline ChainElement ce_zero(TheoryKind k) { return ChainElement{k, {}}; }

inline ChainElement ce_unit(TheoryKind k) { return ChainElement{k, {Monomial{Rational(1), {}}}}; }

// Sort factors with Koszul signs, drop squares of odd factors, merge equal
// monomials. Factor keys are canonical per factor, so key equality is value
// equality; semantic zero across differently grouped forms is the job of
// canonical_expand below.
inline ChainElement normalize(const ChainElement& e) {
  std::map<std::string, Monomial> merged;
  for (const auto& mon : e.mons) {
    if (mon.coef == 0) continue;
    bool zero = false;
    for (const auto& f : mon.factors) {
      if (factor_repr_zero(e.kind, f)) {
        zero = true;
        break;
      }
      if (e.kind == TheoryKind::Envelope1 && !f.coh && f.f1.c.tail != 0)
        throw std::invalid_argument("normalize: chain factors must be compactly supported");
    }
    if (zero) continue;
    std::vector<std::pair<std::string, Factor>> keyed;
    for (const auto& f : mon.factors) keyed.push_back({factor_key(e.kind, f), f});
    Rational sign(1);
    bool killed = false;
    // insertion sort, tracking the Koszul sign of each adjacent swap
    for (size_t t = 1; t < keyed.size() && !killed; ++t)
      for (size_t u = t; u > 0 && keyed[u - 1].first > keyed[u].first; --u) {
        int da = factor_degree(e.kind, keyed[u - 1].second);
        int db = factor_degree(e.kind, keyed[u].second);
        if ((da % 2 != 0) && (db % 2 != 0)) sign = -sign;
        std::swap(keyed[u - 1], keyed[u]);
      }
    for (size_t t = 0; t + 1 < keyed.size(); ++t)
      if (keyed[t].first == keyed[t + 1].first &&
          factor_degree(e.kind, keyed[t].second) % 2 != 0)
        killed = true;
    if (killed) continue;
    std::string key;
    Monomial m;
    m.coef = mon.coef * sign;
    for (auto& [fk, f] : keyed) {
      key += fk + ";";
      m.factors.push_back(f);
    }
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(key, std::move(m));
    else
      it->second.coef += m.coef;
  }
  ChainElement out{e.kind, {}};
  for (auto& [k, m] : merged)
    if (m.coef != 0) out.mons.push_back(std::move(m));
  return out;
}

inline ChainElement ce_scale(const ChainElement& e, const Rational& c) {
  if (c == 0) return ce_zero(e.kind);
  ChainElement r = e;
  for (auto& m : r.mons) m.coef *= c;
  return r;
}

inline ChainElement ce_add(const ChainElement& a, const ChainElement& b) {
  if (a.kind != b.kind) throw std::invalid_argument("ce_add: mixed theories");
  ChainElement r = a;
  r.mons.insert(r.mons.end(), b.mons.begin(), b.mons.end());
  return normalize(r);
}

inline ChainElement ce_sub(const ChainElement& a, const ChainElement& b) {
  return ce_add(a, ce_scale(b, rat(-1)));
}

// Symmetric product; signs come out of normalization.
inline ChainElement ce_mul(const ChainElement& a, const ChainElement& b) {
  if (a.kind != b.kind) throw std::invalid_argument("ce_mul: mixed theories");
  ChainElement r{a.kind, {}};
  for (const auto& ma : a.mons)
    for (const auto& mb : b.mons) {
      Monomial m;
      m.coef = ma.coef * mb.coef;
      m.factors = ma.factors;
      m.factors.insert(m.factors.end(), mb.factors.begin(), mb.factors.end());
      r.mons.push_back(std::move(m));
    }
  return normalize(r);
}

inline std::optional<int> total_degree(const ChainElement& e) {
  std::optional<int> deg;
  for (const auto& m : e.mons) {
    int d = 0;
    for (const auto& f : m.factors) d += factor_degree(e.kind, f);
    if (deg && *deg != d) throw std::logic_error("total_degree: inhomogeneous element");
    deg = d;
  }
  return deg;
}

inline int sym_weight(const ChainElement& e) {
  int w = 0;
  for (const auto& m : e.mons) w = std::max(w, static_cast<int>(m.factors.size()));
  return w;
}

// ---------------------------------------------------------------------------
// Differentials
// ---------------------------------------------------------------------------

// Shifted de Rham differential, extended as a derivation with Koszul signs.
// The odd shift of the envelope theories flips the sign of d on each factor;
// the even Chern-Simons shift keeps it.
inline ChainElement d_dr(const ChainElement& e) {
  ChainElement r{e.kind, {}};
  for (const auto& mon : e.mons) {
    Rational prefix(1);
    for (size_t a = 0; a < mon.factors.size(); ++a) {
      const Factor& f = mon.factors[a];
      if (!f.coh) {
        Factor g = f;
        bool nonzero;
        if (e.kind == TheoryKind::Envelope1) {
          g.f1 = f1_scale(d1(f.f1), rat(-1));
          nonzero = !g.f1.is_zero();
        } else {
          g.f2 = d2(f.f2);
          if (e.kind == TheoryKind::Envelope2) g.f2 = f2_scale(g.f2, rat(-1));
          nonzero = g.f2.has_terms();
        }
        if (nonzero) {
          Monomial m;
          m.coef = mon.coef * prefix;
          m.factors = mon.factors;
          m.factors[a] = g;
          r.mons.push_back(std::move(m));
        }
      }
      if (factor_degree(e.kind, f) % 2 != 0) prefix = -prefix;
    }
  }
  return normalize(r);
}

namespace detail {
// Koszul sign for pulling factors i < j to the front, in that order.
inline Rational extract_sign(TheoryKind k, const std::vector<Factor>& fs, size_t i, size_t j) {
  int di = factor_degree(k, fs[i]), dj = factor_degree(k, fs[j]);
  long cross_i = 0, cross_j = 0;
  for (size_t a = 0; a < i; ++a) cross_i += factor_degree(k, fs[a]);
  for (size_t a = 0; a < j; ++a)
    if (a != i) cross_j += factor_degree(k, fs[a]);
  long tot = static_cast<long>(di) * cross_i + static_cast<long>(dj) * cross_j;
  return (tot % 2 == 0) ? Rational(1) : Rational(-1);
}
}  // namespace detail

// Chevalley-Eilenberg part of the differential: contract two factors with the
// bracket and wedge their forms, with the new factor in front.
inline ChainElement d_ce(const ChainElement& e, const LieAlgebra& L) {
  if (e.kind == TheoryKind::ChernSimons)
    throw std::invalid_argument("d_ce: envelope theories only");
  ChainElement r{e.kind, {}};
  for (const auto& mon : e.mons) {
    const auto& fs = mon.factors;
    for (size_t i = 0; i < fs.size(); ++i)
      for (size_t j = i + 1; j < fs.size(); ++j) {
        if (fs[i].coh || fs[j].coh)
          throw std::invalid_argument("d_ce: cohomology factors have no bracket");
        Factor nf;
        bool nonzero;
        if (e.kind == TheoryKind::Envelope1) {
          nf = env1_factor(0, wedge1(fs[i].f1, fs[j].f1));
          nonzero = !nf.f1.is_zero();
        } else {
          nf = env2_factor(0, wedge2(fs[i].f2, fs[j].f2));
          nonzero = nf.f2.has_terms();
        }
        if (!nonzero) continue;
        auto w = L.bracket_basis(fs[i].lie, fs[j].lie);
        Rational sign = detail::extract_sign(e.kind, fs, i, j);
        if (factor_form_degree(e.kind, fs[i]) % 2 != 0) sign = -sign;
        for (int kk = 0; kk < L.dim(); ++kk) {
          if (w[static_cast<size_t>(kk)] == 0) continue;
          Monomial m;
          m.coef = mon.coef * sign * w[static_cast<size_t>(kk)];
          nf.lie = kk;
          m.factors.push_back(nf);
          for (size_t a = 0; a < fs.size(); ++a)
            if (a != i && a != j) m.factors.push_back(fs[a]);
          r.mons.push_back(std::move(m));
        }
      }
  }
  return normalize(r);
}

// Contraction with the antisymmetric pairing of two Chern-Simons factors:
// integrate the wedge over the plane and the circle classes over the circle
// (unit total length, so theta integrates to 1 and the class of 1 to 0).
inline ChainElement bv_laplacian(const ChainElement& e) {
  if (e.kind != TheoryKind::ChernSimons)
    throw std::invalid_argument("bv_laplacian: Chern-Simons only");
  ChainElement r{e.kind, {}};
  for (const auto& mon : e.mons) {
    const auto& fs = mon.factors;
    for (size_t i = 0; i < fs.size(); ++i)
      for (size_t j = i + 1; j < fs.size(); ++j) {
        if (fs[i].coh || fs[j].coh)
          throw std::invalid_argument("bv_laplacian: cohomology factors have no pairing");
        if (fs[i].upow + fs[j].upow != 1) continue;
        Rational v = integrate2(wedge2(fs[i].f2, fs[j].f2));
        if (v == 0) continue;
        Rational sign = detail::extract_sign(e.kind, fs, i, j);
        if ((fs[i].upow * factor_form_degree(e.kind, fs[j])) % 2 != 0) sign = -sign;
        Monomial m;
        m.coef = mon.coef * sign * v;
        for (size_t a = 0; a < fs.size(); ++a)
          if (a != i && a != j) m.factors.push_back(fs[a]);
        r.mons.push_back(std::move(m));
      }
  }
  return normalize(r);
}

// ---------------------------------------------------------------------------
// Canonical expansion: exact zero test
//
// Every form factor is expanded over the cell-monomial atoms of the union
// grid of the whole element. Atoms have canonical identities, so the expanded
// sum is zero iff the element is zero; this is the ground truth that the
// key-based merge above cannot provide when equal elements group their forms
// differently.
// ---------------------------------------------------------------------------

namespace detail {

struct AtomTable {
  std::map<std::string, int> ids;
  std::vector<int> degrees;
  int intern(const std::string& key, int degree) {
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(degrees.size());
    ids.emplace(key, id);
    degrees.push_back(degree);
    return id;
  }
};

using ExpandedFactor = std::vector<std::pair<int, Rational>>;  // atom id, coefficient

}  // namespace detail

inline std::map<std::vector<int>, Rational> canonical_expand(const ChainElement& e) {
  // union grids
  std::set<Rational> xs_set, ys_set;
  for (const auto& mon : e.mons)
    for (const auto& f : mon.factors) {
      if (f.coh) continue;
      if (e.kind == TheoryKind::Envelope1) {
        xs_set.insert(f.f1.c.knots.begin(), f.f1.c.knots.end());
      } else {
        for (const auto& t : f.f2.terms) {
          xs_set.insert(t.fx.c.knots.begin(), t.fx.c.knots.end());
          ys_set.insert(t.fy.c.knots.begin(), t.fy.c.knots.end());
        }
      }
    }
  std::vector<Rational> xs(xs_set.begin(), xs_set.end()), ys(ys_set.begin(), ys_set.end());

  detail::AtomTable atoms;
  auto expand_factor = [&](const Factor& f) {
    detail::ExpandedFactor out;
    std::string tag = (e.kind == TheoryKind::ChernSimons)
                          ? "u" + std::to_string(f.upow)
                          : "g" + std::to_string(f.lie);
    if (f.coh) {
      int deg = factor_degree(e.kind, f);
      out.push_back({atoms.intern("coh:" + tag, deg), Rational(1)});
      return out;
    }
    if (e.kind == TheoryKind::Envelope1) {
      int dg = f.f1.degree;
      for (size_t t = 0; t + 1 < xs.size(); ++t) {
        Poly p = f.f1.c.over(xs[t], xs[t + 1]);
        for (size_t q = 0; q < p.size(); ++q) {
          if (p[q] == 0) continue;
          std::string key = tag + ":d" + std::to_string(dg) + ":c" + std::to_string(t) + ":p" +
                            std::to_string(q);
          out.push_back({atoms.intern(key, dg - 1), p[q]});
        }
      }
      return out;
    }
    // two dimensional kinds
    for (const auto& t : f.f2.terms) {
      int cx = t.fx.degree, cy = t.fy.degree;
      int fdeg = cx + cy;
      int sdeg = (e.kind == TheoryKind::Envelope2) ? fdeg - 2 : fdeg - 2 + f.upow;
      for (size_t a = 0; a + 1 < xs.size(); ++a) {
        Poly px = t.fx.c.over(xs[a], xs[a + 1]);
        if (px.empty()) continue;
        for (size_t b = 0; b + 1 < ys.size(); ++b) {
          Poly py = t.fy.c.over(ys[b], ys[b + 1]);
          if (py.empty()) continue;
          for (size_t qa = 0; qa < px.size(); ++qa) {
            if (px[qa] == 0) continue;
            for (size_t qb = 0; qb < py.size(); ++qb) {
              if (py[qb] == 0) continue;
              std::string key = tag + ":d" + std::to_string(cx) + "," + std::to_string(cy) +
                                ":c" + std::to_string(a) + "," + std::to_string(b) + ":p" +
                                std::to_string(qa) + "," + std::to_string(qb);
              out.push_back({atoms.intern(key, sdeg), t.coef * px[qa] * py[qb]});
            }
          }
        }
      }
    }
    return out;
  };

  std::map<std::vector<int>, Rational> acc;
  for (const auto& mon : e.mons) {
    std::vector<detail::ExpandedFactor> exp;
    for (const auto& f : mon.factors) exp.push_back(expand_factor(f));
    // distribute
    std::vector<size_t> pick(exp.size(), 0);
    bool any_empty = false;
    for (const auto& ef : exp) any_empty = any_empty || ef.empty();
    if (any_empty) continue;
    while (true) {
      Rational c = mon.coef;
      std::vector<int> ids;
      for (size_t a = 0; a < exp.size(); ++a) {
        c *= exp[a][pick[a]].second;
        ids.push_back(exp[a][pick[a]].first);
      }
      // sort with Koszul signs; odd repeats vanish
      bool dead = false;
      for (size_t t = 1; t < ids.size() && !dead; ++t)
        for (size_t u = t; u > 0 && ids[u - 1] > ids[u]; --u) {
          if (atoms.degrees[static_cast<size_t>(ids[u - 1])] % 2 != 0 &&
              atoms.degrees[static_cast<size_t>(ids[u])] % 2 != 0)
            c = -c;
          std::swap(ids[u - 1], ids[u]);
        }
      for (size_t t = 0; t + 1 < ids.size(); ++t)
        if (ids[t] == ids[t + 1] && atoms.degrees[static_cast<size_t>(ids[t])] % 2 != 0)
          dead = true;
      if (!dead) acc[ids] += c;
      size_t lvl = 0;
      while (lvl < pick.size()) {
        if (++pick[lvl] < exp[lvl].size()) break;
        pick[lvl] = 0;
        ++lvl;
      }
      if (lvl == pick.size()) break;
    }
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = (it->second == 0) ? acc.erase(it) : std::next(it);
  return acc;
}

inline bool ce_is_zero(const ChainElement& e) {
  if (e.repr_zero()) return true;
  return canonical_expand(e).empty();
}

inline bool ce_equal(const ChainElement& a, const ChainElement& b) {
  return ce_is_zero(ce_sub(a, b));
}

}  // namespace pfa
