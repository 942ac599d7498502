#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "pfa/forms1d.hpp"
#include "pfa/linalg.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Forms on R^2 as sums of separable terms
//
// A term (fx, fy, c) stands for c * fx(x) dx^{|fx|} ^ fy(y) dy^{|fy|}, with dx
// written before dy. All terms of one form share the total degree. Equality
// and zero tests go through the cellwise normal form below, because the same
// form admits many different separable decompositions.
// ---------------------------------------------------------------------------

struct Form2D {
  struct Term {
    Form1D fx, fy;
    Rational coef;
  };
  std::vector<Term> terms;

  bool has_terms() const { return !terms.empty(); }
  std::optional<int> raw_degree() const {
    if (terms.empty()) return std::nullopt;
    return terms.front().fx.degree + terms.front().fy.degree;
  }
};

inline Form2D f2_zero() { return {}; }

inline Form2D f2_from_terms(std::vector<Form2D::Term> ts) {
  Form2D f;
  std::optional<int> deg;
  for (auto& t : ts) {
    if (t.coef == 0 || t.fx.is_zero() || t.fy.is_zero()) continue;
    if (t.fx.c.tail != 0 || t.fy.c.tail != 0)
      throw std::invalid_argument("Form2D: factors must be compactly supported");
    int d = t.fx.degree + t.fy.degree;
    if (deg && *deg != d) throw std::invalid_argument("Form2D: mixed total degree");
    deg = d;
    f.terms.push_back(std::move(t));
  }
  return f;
}

inline Form2D f2_term(const Form1D& fx, const Form1D& fy, const Rational& coef = Rational(1)) {
  return f2_from_terms({{fx, fy, coef}});
}

inline Form2D f2_scale(const Form2D& f, const Rational& k) {
  if (k == 0) return {};
  Form2D r = f;
  for (auto& t : r.terms) t.coef *= k;
  return r;
}

// Bivariate polynomial: bp[i] is the y-polynomial multiplying x^i.
using Bivar = std::vector<Poly>;

inline void bivar_trim(Bivar& b) {
  while (!b.empty() && b.back().empty()) b.pop_back();
}

inline bool bivar_zero(const Bivar& b) {
  for (const auto& p : b)
    if (!p.empty()) return false;
  return true;
}

inline void bivar_acc(Bivar& dst, const Poly& px, const Poly& py, const Rational& c) {
  if (px.empty() || py.empty() || c == 0) return;
  if (dst.size() < px.size()) dst.resize(px.size());
  for (size_t i = 0; i < px.size(); ++i)
    if (px[i] != 0) dst[i] = poly_add(dst[i], poly_scale(py, px[i] * c));
  bivar_trim(dst);
}

// Evaluate the x-variable at a constant, leaving a polynomial in y.
inline Poly bivar_eval_x(const Bivar& b, const Rational& x) {
  Poly r;
  Rational xp(1);
  for (const auto& p : b) {
    r = poly_add(r, poly_scale(p, xp));
    xp *= x;
  }
  return r;
}

inline Poly bivar_eval_y(const Bivar& b, const Rational& y) {
  Poly r(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) r[i] = poly_eval(b[i], y);
  poly_trim(r);
  return r;
}

// Cellwise normal form of a Form2D over the product grid of all knots.
// Components: degree 0 -> {f}; degree 1 -> {dx, dy}; degree 2 -> {dxdy}.
struct Cellwise2 {
  std::vector<Rational> xs, ys;
  int degree = 0;
  int ncomp = 1;
  // comp[c][ix][iy]
  std::vector<std::vector<std::vector<Bivar>>> comp;

  int nx() const { return xs.empty() ? 0 : static_cast<int>(xs.size()) - 1; }
  int ny() const { return ys.empty() ? 0 : static_cast<int>(ys.size()) - 1; }

  bool is_zero() const {
    for (const auto& c : comp)
      for (const auto& col : c)
        for (const auto& b : col)
          if (!bivar_zero(b)) return false;
    return true;
  }
};

namespace detail {
inline int term_component(int degree, int degx) {
  if (degree == 1) return degx == 1 ? 0 : 1;
  return 0;
}
}  // namespace detail

inline Cellwise2 cellwise(const Form2D& f) {
  Cellwise2 cw;
  if (!f.has_terms()) return cw;
  cw.degree = *f.raw_degree();
  cw.ncomp = cw.degree == 1 ? 2 : 1;
  std::set<Rational> xs, ys;
  for (const auto& t : f.terms) {
    xs.insert(t.fx.c.knots.begin(), t.fx.c.knots.end());
    ys.insert(t.fy.c.knots.begin(), t.fy.c.knots.end());
  }
  cw.xs.assign(xs.begin(), xs.end());
  cw.ys.assign(ys.begin(), ys.end());
  cw.comp.assign(cw.ncomp, std::vector<std::vector<Bivar>>(
                               std::max(cw.nx(), 0), std::vector<Bivar>(std::max(cw.ny(), 0))));
  for (const auto& t : f.terms) {
    int c = detail::term_component(cw.degree, t.fx.degree);
    for (int i = 0; i < cw.nx(); ++i) {
      Poly px = t.fx.c.over(cw.xs[i], cw.xs[i + 1]);
      if (px.empty()) continue;
      for (int j = 0; j < cw.ny(); ++j) {
        Poly py = t.fy.c.over(cw.ys[j], cw.ys[j + 1]);
        bivar_acc(cw.comp[c][i][j], px, py, t.coef);
      }
    }
  }
  return cw;
}

namespace detail {

inline bool col_equal(const Cellwise2& cw, int i0, int i1) {
  for (int c = 0; c < cw.ncomp; ++c)
    for (int j = 0; j < cw.ny(); ++j)
      if (cw.comp[c][i0][j] != cw.comp[c][i1][j]) return false;
  return true;
}

inline bool col_zero(const Cellwise2& cw, int i) {
  for (int c = 0; c < cw.ncomp; ++c)
    for (int j = 0; j < cw.ny(); ++j)
      if (!bivar_zero(cw.comp[c][i][j])) return false;
  return true;
}

inline bool row_equal(const Cellwise2& cw, int j0, int j1) {
  for (int c = 0; c < cw.ncomp; ++c)
    for (int i = 0; i < cw.nx(); ++i)
      if (cw.comp[c][i][j0] != cw.comp[c][i][j1]) return false;
  return true;
}

inline bool row_zero(const Cellwise2& cw, int j) {
  for (int c = 0; c < cw.ncomp; ++c)
    for (int i = 0; i < cw.nx(); ++i)
      if (!bivar_zero(cw.comp[c][i][j])) return false;
  return true;
}

inline void erase_col(Cellwise2& cw, int i, bool keep_left_line) {
  for (int c = 0; c < cw.ncomp; ++c) cw.comp[c].erase(cw.comp[c].begin() + i);
  cw.xs.erase(cw.xs.begin() + (keep_left_line ? i + 1 : i));
}

inline void erase_row(Cellwise2& cw, int j, bool keep_bottom_line) {
  for (int c = 0; c < cw.ncomp; ++c)
    for (auto& col : cw.comp[c]) col.erase(col.begin() + j);
  cw.ys.erase(cw.ys.begin() + (keep_bottom_line ? j + 1 : j));
}

}  // namespace detail

// Minimal product grid: boundary rows/columns that vanish are dropped and
// neighbours carrying identical polynomial data are merged. The result is
// intrinsic to the function, so it serves as a canonical key.
inline void cellwise_prune(Cellwise2& cw) {
  bool changed = true;
  while (changed) {
    changed = false;
    while (cw.nx() > 0 && detail::col_zero(cw, 0)) {
      detail::erase_col(cw, 0, false);
      changed = true;
    }
    while (cw.nx() > 0 && detail::col_zero(cw, cw.nx() - 1)) {
      detail::erase_col(cw, cw.nx() - 1, true);
      changed = true;
    }
    for (int i = 0; i + 1 < cw.nx();) {
      if (detail::col_equal(cw, i, i + 1)) {
        detail::erase_col(cw, i + 1, false);
        changed = true;
      } else {
        ++i;
      }
    }
    while (cw.ny() > 0 && detail::row_zero(cw, 0)) {
      detail::erase_row(cw, 0, false);
      changed = true;
    }
    while (cw.ny() > 0 && detail::row_zero(cw, cw.ny() - 1)) {
      detail::erase_row(cw, cw.ny() - 1, true);
      changed = true;
    }
    for (int j = 0; j + 1 < cw.ny();) {
      if (detail::row_equal(cw, j, j + 1)) {
        detail::erase_row(cw, j + 1, false);
        changed = true;
      } else {
        ++j;
      }
    }
  }
  if (cw.nx() == 0 || cw.ny() == 0) {
    cw.xs.clear();
    cw.ys.clear();
    for (auto& c : cw.comp) c.clear();
  }
}

inline bool f2_is_zero(const Form2D& f) {
  if (!f.has_terms()) return true;
  return cellwise(f).is_zero();
}

inline Form2D f2_add(const Form2D& f, const Form2D& g) {
  if (!f.has_terms()) return g;
  if (!g.has_terms()) return f;
  if (*f.raw_degree() != *g.raw_degree()) throw std::invalid_argument("f2_add: mixed degrees");
  Form2D r = f;
  r.terms.insert(r.terms.end(), g.terms.begin(), g.terms.end());
  return r;
}

inline Form2D f2_sub(const Form2D& f, const Form2D& g) { return f2_add(f, f2_scale(g, rat(-1))); }

inline bool f2_equal(const Form2D& f, const Form2D& g) {
  if (!f.has_terms() && !g.has_terms()) return true;
  if (f.has_terms() && g.has_terms() && *f.raw_degree() != *g.raw_degree()) return false;
  return f2_is_zero(f2_sub(f, g));
}

inline std::string f2_key(const Form2D& f) {
  Cellwise2 cw = cellwise(f);
  cellwise_prune(cw);
  if (cw.is_zero()) return "F2:0";
  std::ostringstream os;
  os << "F2:" << cw.degree << ":x";
  for (const auto& v : cw.xs) os << " " << rat_str(v);
  os << ":y";
  for (const auto& v : cw.ys) os << " " << rat_str(v);
  for (int c = 0; c < cw.ncomp; ++c)
    for (int i = 0; i < cw.nx(); ++i)
      for (int j = 0; j < cw.ny(); ++j) {
        os << "|";
        for (const auto& p : cw.comp[c][i][j]) {
          os << "(";
          for (const auto& z : p) os << rat_str(z) << ",";
          os << ")";
        }
      }
  return os.str();
}

// Koszul-graded termwise differential; correct whenever the total form is an
// actual element of the complex (termwise jumps cancel in the sum).
inline Form2D d2(const Form2D& f) {
  std::vector<Form2D::Term> ts;
  for (const auto& t : f.terms) {
    ts.push_back({d1(t.fx), t.fy, t.coef});
    Rational s = (t.fx.degree % 2 == 0) ? t.coef : -t.coef;
    ts.push_back({t.fx, d1(t.fy), s});
  }
  return f2_from_terms(std::move(ts));
}

inline Form2D wedge2(const Form2D& f, const Form2D& g) {
  std::vector<Form2D::Term> ts;
  for (const auto& a : f.terms)
    for (const auto& b : g.terms) {
      Form1D px = wedge1(a.fx, b.fx);
      if (px.is_zero()) continue;
      Form1D py = wedge1(a.fy, b.fy);
      if (py.is_zero()) continue;
      Rational c = a.coef * b.coef;
      if ((a.fy.degree * b.fx.degree) % 2 != 0) c = -c;
      ts.push_back({px, py, c});
    }
  return f2_from_terms(std::move(ts));
}

// Total integral; only the top component integrates, anything else reports 0
// and sets the warning flag when provided.
inline Rational integrate2(const Form2D& f, bool* nontop_warning = nullptr) {
  Rational acc(0);
  for (const auto& t : f.terms) {
    if (t.fx.degree == 1 && t.fy.degree == 1)
      acc += t.coef * integrate1(t.fx) * integrate1(t.fy);
    else if (nontop_warning)
      *nontop_warning = true;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Disk regions
// ---------------------------------------------------------------------------

struct HomotopyBudget {
  int maxPolyDegree = 2;
  int gridRefinement = 1;
};

struct DiskRegion {
  enum class Kind { All, Rect, Cells };
  int m = 2;
  Kind kind = Kind::All;
  std::optional<Interval> ix, iy;             // Rect
  Rational pitch = Rational(1);               // Cells
  std::set<std::pair<long, long>> cells;      // Cells, unit squares scaled by pitch
};

inline DiskRegion disk_all(int m) {
  DiskRegion d;
  d.m = m;
  d.kind = DiskRegion::Kind::All;
  return d;
}

inline DiskRegion disk_interval(const Interval& I) {
  DiskRegion d;
  d.m = 1;
  d.kind = DiskRegion::Kind::Rect;
  d.ix = I;
  return d;
}

inline DiskRegion disk_rect(const Interval& Ix, const Interval& Iy) {
  DiskRegion d;
  d.m = 2;
  d.kind = DiskRegion::Kind::Rect;
  d.ix = Ix;
  d.iy = Iy;
  return d;
}

inline DiskRegion disk_cells(const Rational& pitch, std::set<std::pair<long, long>> cells) {
  if (pitch <= 0) throw std::invalid_argument("disk_cells: pitch must be positive");
  if (cells.empty()) throw std::invalid_argument("disk_cells: empty cell set");
  DiskRegion d;
  d.m = 2;
  d.kind = DiskRegion::Kind::Cells;
  d.pitch = pitch;
  d.cells = std::move(cells);
  return d;
}

struct Rect2 {
  Interval x, y;
};

inline std::vector<Rect2> region_rects(const DiskRegion& d) {
  if (d.kind == DiskRegion::Kind::All)
    throw std::invalid_argument("region_rects: unbounded region");
  if (d.kind == DiskRegion::Kind::Rect) {
    if (d.m == 1) throw std::invalid_argument("region_rects: one dimensional region");
    return {{*d.ix, *d.iy}};
  }
  std::vector<Rect2> rs;
  for (const auto& [i, j] : d.cells)
    rs.push_back({Interval(d.pitch * static_cast<long>(i), d.pitch * static_cast<long>(i + 1)),
                  Interval(d.pitch * static_cast<long>(j), d.pitch * static_cast<long>(j + 1))});
  return rs;
}

inline Rational rect_area(const Rect2& r) { return r.x.length() * r.y.length(); }

inline Rational rect_overlap_area(const Rect2& a, const Rect2& b) {
  Rational dx = std::min(a.x.b, b.x.b) - std::max(a.x.a, b.x.a);
  Rational dy = std::min(a.y.b, b.y.b) - std::max(a.y.a, b.y.a);
  if (dx <= 0 || dy <= 0) return Rational(0);
  return dx * dy;
}

// B inside A. Exact, by area bookkeeping: the rectangles of either region
// have pairwise disjoint interiors.
inline bool region_contains(const DiskRegion& A, const DiskRegion& B) {
  if (A.m != B.m) return false;
  if (A.kind == DiskRegion::Kind::All) return true;
  if (B.kind == DiskRegion::Kind::All) return false;
  if (A.m == 1) return B.ix->a >= A.ix->a && B.ix->b <= A.ix->b;
  Rational missing(0), covered(0);
  auto bs = region_rects(B);
  auto as = region_rects(A);
  for (const auto& rb : bs) {
    missing += rect_area(rb);
    for (const auto& ra : as) covered += rect_overlap_area(ra, rb);
  }
  return covered == missing;
}

inline bool region_disjoint(const DiskRegion& A, const DiskRegion& B) {
  if (A.m != B.m) throw std::invalid_argument("region_disjoint: dimension mismatch");
  if (A.kind == DiskRegion::Kind::All || B.kind == DiskRegion::Kind::All) return false;
  if (A.m == 1) return A.ix->b <= B.ix->a || B.ix->b <= A.ix->a;
  for (const auto& ra : region_rects(A))
    for (const auto& rb : region_rects(B))
      if (rect_overlap_area(ra, rb) != 0) return false;
  return true;
}

// Connectivity plus Euler characteristic 1 of the closed cell union: that is
// exactly "finite polyomino disk" (connected, no holes).
inline bool region_valid(const DiskRegion& d) {
  if (d.m == 1) return d.kind != DiskRegion::Kind::Cells;
  if (d.kind != DiskRegion::Kind::Cells) return true;
  if (d.cells.empty()) return false;
  std::set<std::pair<long, long>> seen;
  std::vector<std::pair<long, long>> stack{*d.cells.begin()};
  seen.insert(stack[0]);
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const std::pair<long, long> nbrs[4] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& n : nbrs)
      if (d.cells.count(n) && !seen.count(n)) {
        seen.insert(n);
        stack.push_back(n);
      }
  }
  if (seen.size() != d.cells.size()) return false;
  std::set<std::pair<long, long>> verts;
  std::set<std::pair<std::pair<long, long>, std::pair<long, long>>> edges;
  for (const auto& [i, j] : d.cells) {
    std::pair<long, long> c00{i, j}, c10{i + 1, j}, c01{i, j + 1}, c11{i + 1, j + 1};
    verts.insert({c00.first, c00.second});
    verts.insert({c10.first, c10.second});
    verts.insert({c01.first, c01.second});
    verts.insert({c11.first, c11.second});
    edges.insert({c00, c10});
    edges.insert({c01, c11});
    edges.insert({c00, c01});
    edges.insert({c10, c11});
  }
  long chi = static_cast<long>(verts.size()) - static_cast<long>(edges.size()) +
             static_cast<long>(d.cells.size());
  return chi == 1;
}

inline Form2D bump2(const DiskRegion& D) {
  if (D.kind == DiskRegion::Kind::Rect)
    return f2_term(bump1(*D.ix), bump1(*D.iy));
  if (D.kind == DiskRegion::Kind::Cells) {
    auto [i, j] = *D.cells.begin();  // lexicographically least cell
    return f2_term(bump1(Interval(D.pitch * i, D.pitch * (i + 1))),
                   bump1(Interval(D.pitch * j, D.pitch * (j + 1))));
  }
  throw std::invalid_argument("bump2: unbounded region needs a reference cell");
}

inline bool f2_supported_in(const Form2D& f, const DiskRegion& D) {
  if (D.kind == DiskRegion::Kind::All) return true;
  Cellwise2 cw = cellwise(f);
  if (cw.is_zero()) return true;
  auto rects = region_rects(D);
  for (int i = 0; i < cw.nx(); ++i)
    for (int j = 0; j < cw.ny(); ++j) {
      bool nonzero = false;
      for (int c = 0; c < cw.ncomp && !nonzero; ++c) nonzero = !bivar_zero(cw.comp[c][i][j]);
      if (!nonzero) continue;
      Rect2 cell{Interval(cw.xs[i], cw.xs[i + 1]), Interval(cw.ys[j], cw.ys[j + 1])};
      Rational covered(0);
      for (const auto& r : rects) covered += rect_overlap_area(r, cell);
      if (covered != rect_area(cell)) return false;
    }
  return true;
}

// Support bookkeeping only; the global representation does not change.
inline Form2D extend_by_zero(const Form2D& f, const DiskRegion& from, const DiskRegion& to) {
  if (!region_contains(to, from)) throw std::invalid_argument("extend_by_zero: regions not nested");
  if (!f2_supported_in(f, from)) throw std::invalid_argument("extend_by_zero: support leaks out");
  return f;
}

// Face compatibility of the cellwise data: degree 0 forms are continuous
// across every grid line (and vanish toward the outside), the dx component of
// a 1-form is continuous across horizontal lines, the dy component across
// vertical lines. Top forms are unconstrained.
inline bool f2_valid(const Form2D& f) {
  if (!f.has_terms()) return true;
  Cellwise2 cw = cellwise(f);
  int deg = cw.degree;
  if (deg == 2) return true;
  auto zero_bivar = Bivar{};
  // vertical lines: x = xs[i], i = 0..nx; compare comp of cells (i-1, j) and (i, j)
  for (int i = 0; i <= cw.nx(); ++i)
    for (int j = 0; j < cw.ny(); ++j) {
      const Bivar& left = (i > 0) ? cw.comp[deg == 1 ? 1 : 0][i - 1][j] : zero_bivar;
      const Bivar& right = (i < cw.nx()) ? cw.comp[deg == 1 ? 1 : 0][i][j] : zero_bivar;
      if (bivar_eval_x(left, cw.xs.empty() ? Rational(0) : cw.xs[i]) !=
          bivar_eval_x(right, cw.xs.empty() ? Rational(0) : cw.xs[i]))
        return false;
    }
  // horizontal lines: y = ys[j]; compare cells (i, j-1) and (i, j)
  for (int j = 0; j <= cw.ny(); ++j)
    for (int i = 0; i < cw.nx(); ++i) {
      const Bivar& below = (j > 0) ? cw.comp[0][i][j - 1] : zero_bivar;
      const Bivar& above = (j < cw.ny()) ? cw.comp[0][i][j] : zero_bivar;
      if (bivar_eval_y(below, cw.ys.empty() ? Rational(0) : cw.ys[j]) !=
          bivar_eval_y(above, cw.ys.empty() ? Rational(0) : cw.ys[j]))
        return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Contractions of the two dimensional complex
// ---------------------------------------------------------------------------

struct FormSdr2D {
  DiskRegion domain;
  Form2D omega;
  std::function<Rational(const Form2D&)> p;
  std::function<Form2D(const Rational&)> i;
  std::function<Form2D(const Form2D&)> h;  // degree -1, satisfies dh + hd = ip - id
};

// Tensor contraction h = h_x (x) (i_y p_y) + id (x) h_y with Koszul signs.
inline FormSdr2D sdr_tensor(const DiskRegion& domain, const FormSdr1D& sx, const FormSdr1D& sy) {
  Form2D omega = f2_term(sx.omega, sy.omega);
  auto p = [](const Form2D& f) {
    Rational v(0);
    for (const auto& t : f.terms)
      if (t.fx.degree == 1 && t.fy.degree == 1) v += t.coef * integrate1(t.fx) * integrate1(t.fy);
    return v;
  };
  auto i = [omega](const Rational& k) { return f2_scale(omega, k); };
  auto h = [sx, sy](const Form2D& f) {
    std::vector<Form2D::Term> ts;
    for (const auto& t : f.terms) {
      Form1D hx = sx.h(t.fx);
      if (!hx.is_zero() && t.fy.degree == 1) {
        Rational w = integrate1(t.fy);
        if (w != 0) ts.push_back({hx, f1_scale(sy.omega, w), t.coef});
      }
      Form1D hy = sy.h(t.fy);
      if (!hy.is_zero()) {
        Rational s = (t.fx.degree % 2 == 0) ? t.coef : -t.coef;
        ts.push_back({t.fx, hy, s});
      }
    }
    return f2_from_terms(std::move(ts));
  };
  return FormSdr2D{domain, omega, p, i, h};
}

inline FormSdr2D sdr_rectangle(const Interval& Ix, const Interval& Iy) {
  return sdr_tensor(disk_rect(Ix, Iy), sdr_interval(Ix), sdr_interval(Iy));
}

// Contraction of the whole plane against a reference cell Ix x Iy.
inline FormSdr2D sdr_plane(const Interval& Ix, const Interval& Iy) {
  return sdr_tensor(disk_all(2), sdr_interval(std::nullopt, bump1(Ix)),
                    sdr_interval(std::nullopt, bump1(Iy)));
}

// ---------------------------------------------------------------------------
// Budgeted contraction on polyomino disks
//
// The budget space over each cell, with k = maxPolyDegree:
//   0-forms  x^a y^b,            a <= k,   b <= k
//   1-forms  (a <= k-1, b <= k) dx  +  (a <= k, b <= k-1) dy
//   2-forms  a <= k-1, b <= k-1
// subject to face compatibility inside and vanishing tangential trace on the
// boundary. The profile is chosen so that d stays inside the space and the
// complex has the cohomology of compact supports on a disk (checked below).
// ---------------------------------------------------------------------------

class BudgetSdr {
 public:
  BudgetSdr(const DiskRegion& D, const HomotopyBudget& budget) : D_(D) {
    if (D.kind != DiskRegion::Kind::Cells)
      throw std::invalid_argument("BudgetSdr: expects a polyomino region");
    if (!region_valid(D)) throw std::invalid_argument("BudgetSdr: region is not a disk");
    if (budget.maxPolyDegree < 1) throw std::invalid_argument("BudgetSdr: maxPolyDegree < 1");
    if (budget.gridRefinement < 1) throw std::invalid_argument("BudgetSdr: gridRefinement < 1");
    k_ = budget.maxPolyDegree;
    pitch_ = D.pitch / budget.gridRefinement;
    for (const auto& [i, j] : D.cells)
      for (long di = 0; di < budget.gridRefinement; ++di)
        for (long dj = 0; dj < budget.gridRefinement; ++dj)
          cells_.push_back({i * budget.gridRefinement + di, j * budget.gridRefinement + dj});
    std::sort(cells_.begin(), cells_.end());
    for (size_t c = 0; c < cells_.size(); ++c) cell_index_[cells_[c]] = static_cast<int>(c);

    build_raw_dims();
    SparseMatrix C0 = constraints0();
    SparseMatrix C1 = constraints1();
    B0_ = nullspace_basis(C0);
    B1_ = nullspace_basis(C1);
    SparseMatrix D0 = d_matrix0(), D1 = d_matrix1();
    M0_ = product(D0, B0_);
    M1_ = product(D1, B1_);
    S0_ = std::make_unique<GaussSolver>(M0_);
    S1_ = std::make_unique<GaussSolver>(M1_);

    omega_raw_ = raw_coords(bump2(D_), 2);
    probes_ok_ = (S0_->rank() == static_cast<int>(B0_.size())) &&
                 (static_cast<int>(B1_.size()) - S1_->rank() == static_cast<int>(B0_.size())) &&
                 (raw2_ - S1_->rank() == 1) && !S1_->solve(omega_raw_).has_value();
    if (!probes_ok_)
      throw std::runtime_error("BudgetSdr: budget space fails the cohomology probe");

    // [d(V0) | K1] where K1 = pivot-column span of V1, the fixed complement
    // of ker(d) = im(d) used to invert d on functions.
    SparseMatrix M0K(raw1_, static_cast<int>(B0_.size() + S1_->pivot_columns().size()));
    for (const auto& [rc, v] : M0_.entries) M0K.set(rc.first, rc.second, v);
    int off = static_cast<int>(B0_.size());
    for (size_t t = 0; t < S1_->pivot_columns().size(); ++t) {
      const auto& col = B1_[static_cast<size_t>(S1_->pivot_columns()[t])];
      for (int r = 0; r < raw1_; ++r)
        if (col[r] != 0) M0K.set(r, off + static_cast<int>(t), col[r]);
    }
    S0K_ = std::make_unique<GaussSolver>(M0K);
  }

  const DiskRegion& domain() const { return D_; }
  Form2D omega() const { return bump2(D_); }

  Rational p(const Form2D& f) const { return integrate2(f); }
  Form2D i(const Rational& c) const { return f2_scale(bump2(D_), c); }

  Form2D h(const Form2D& f) const {
    if (!f.has_terms()) return {};
    int deg = *f.raw_degree();
    if (deg == 0) return {};
    if (deg == 2) {
      std::vector<Rational> w = raw_coords(f, 2);
      Rational c = integrate2(f);
      for (int r = 0; r < raw2_; ++r) w[r] -= c * omega_raw_[r];
      auto sol = S1_->solve(w);
      if (!sol) throw std::runtime_error("BudgetSdr: homotopy budget exhausted (top degree)");
      return f2_scale(from_raw(mat_apply(B1_, *sol, raw1_), 1), rat(-1));
    }
    std::vector<Rational> w = raw_coords(f, 1);
    auto sol = S0K_->solve(w);
    if (!sol) throw std::runtime_error("BudgetSdr: homotopy budget exhausted (degree one)");
    std::vector<Rational> phi(sol->begin(), sol->begin() + static_cast<long>(B0_.size()));
    return f2_scale(from_raw(mat_apply(B0_, phi, raw0_), 0), rat(-1));
  }

  // Constrained basis vectors as forms, for spanning samples in tests.
  std::vector<Form2D> basis_forms(int degree) const {
    std::vector<Form2D> out;
    if (degree == 0)
      for (const auto& v : B0_) out.push_back(from_raw(v, 0));
    else if (degree == 1)
      for (const auto& v : B1_) out.push_back(from_raw(v, 1));
    else
      for (int t = 0; t < raw2_; ++t) {
        std::vector<Rational> v(raw2_, Rational(0));
        v[t] = 1;
        out.push_back(from_raw(v, 2));
      }
    return out;
  }

 private:
  using Basis = std::vector<std::vector<Rational>>;

  DiskRegion D_;
  int k_ = 2;
  Rational pitch_;
  std::vector<std::pair<long, long>> cells_;
  std::map<std::pair<long, long>, int> cell_index_;
  int raw0_ = 0, raw1_ = 0, raw1dx_ = 0, raw2_ = 0;
  Basis B0_, B1_;
  SparseMatrix M0_, M1_;
  std::unique_ptr<GaussSolver> S0_, S1_, S0K_;
  std::vector<Rational> omega_raw_;
  bool probes_ok_ = false;

  int n0x() const { return k_ + 1; }
  int per0() const { return (k_ + 1) * (k_ + 1); }
  int per1dx() const { return k_ * (k_ + 1); }
  int per1dy() const { return (k_ + 1) * k_; }
  int per2() const { return k_ * k_; }

  void build_raw_dims() {
    int nc = static_cast<int>(cells_.size());
    raw0_ = nc * per0();
    raw1dx_ = nc * per1dx();
    raw1_ = raw1dx_ + nc * per1dy();
    raw2_ = nc * per2();
  }

  int idx0(int cell, int a, int b) const { return cell * per0() + a * (k_ + 1) + b; }
  int idx1dx(int cell, int a, int b) const { return cell * per1dx() + a * (k_ + 1) + b; }
  int idx1dy(int cell, int a, int b) const { return raw1dx_ + cell * per1dy() + a * k_ + b; }
  int idx2(int cell, int a, int b) const { return cell * per2() + a * k_ + b; }

  Interval cell_ix(int c) const {
    return Interval(pitch_ * cells_[c].first, pitch_ * (cells_[c].first + 1));
  }
  Interval cell_iy(int c) const {
    return Interval(pitch_ * cells_[c].second, pitch_ * (cells_[c].second + 1));
  }

  // rows: continuity / zero-trace equations.
  SparseMatrix constraints0() const {
    std::vector<std::map<int, Rational>> rows;
    for (size_t c = 0; c < cells_.size(); ++c) {
      auto [i, j] = cells_[c];
      // vertical edges x = const: right neighbour or boundary
      for (int side = 0; side < 2; ++side) {
        std::pair<long, long> nb{i + (side == 0 ? 1 : -1), j};
        if (side == 1 && cell_index_.count(nb)) continue;  // handled from the left cell
        Rational xe = pitch_ * (side == 0 ? i + 1 : i);
        auto it = cell_index_.find(nb);
        for (int b = 0; b <= k_; ++b) {
          std::map<int, Rational> row;
          Rational xp(1);
          for (int a = 0; a <= k_; ++a) {
            row[idx0(static_cast<int>(c), a, b)] += xp;
            if (it != cell_index_.end()) row[idx0(it->second, a, b)] -= xp;
            xp *= xe;
          }
          rows.push_back(std::move(row));
        }
      }
      // horizontal edges y = const
      for (int side = 0; side < 2; ++side) {
        std::pair<long, long> nb{i, j + (side == 0 ? 1 : -1)};
        if (side == 1 && cell_index_.count(nb)) continue;
        Rational ye = pitch_ * (side == 0 ? j + 1 : j);
        auto it = cell_index_.find(nb);
        for (int a = 0; a <= k_; ++a) {
          std::map<int, Rational> row;
          Rational yp(1);
          for (int b = 0; b <= k_; ++b) {
            row[idx0(static_cast<int>(c), a, b)] += yp;
            if (it != cell_index_.end()) row[idx0(it->second, a, b)] -= yp;
            yp *= ye;
          }
          rows.push_back(std::move(row));
        }
      }
    }
    return rows_to_matrix(rows, raw0_);
  }

  SparseMatrix constraints1() const {
    std::vector<std::map<int, Rational>> rows;
    for (size_t c = 0; c < cells_.size(); ++c) {
      auto [i, j] = cells_[c];
      // dy component continuous across vertical edges, zero on boundary ones
      for (int side = 0; side < 2; ++side) {
        std::pair<long, long> nb{i + (side == 0 ? 1 : -1), j};
        if (side == 1 && cell_index_.count(nb)) continue;
        Rational xe = pitch_ * (side == 0 ? i + 1 : i);
        auto it = cell_index_.find(nb);
        for (int b = 0; b <= k_ - 1; ++b) {
          std::map<int, Rational> row;
          Rational xp(1);
          for (int a = 0; a <= k_; ++a) {
            row[idx1dy(static_cast<int>(c), a, b)] += xp;
            if (it != cell_index_.end()) row[idx1dy(it->second, a, b)] -= xp;
            xp *= xe;
          }
          rows.push_back(std::move(row));
        }
      }
      // dx component continuous across horizontal edges
      for (int side = 0; side < 2; ++side) {
        std::pair<long, long> nb{i, j + (side == 0 ? 1 : -1)};
        if (side == 1 && cell_index_.count(nb)) continue;
        Rational ye = pitch_ * (side == 0 ? j + 1 : j);
        auto it = cell_index_.find(nb);
        for (int a = 0; a <= k_ - 1; ++a) {
          std::map<int, Rational> row;
          Rational yp(1);
          for (int b = 0; b <= k_; ++b) {
            row[idx1dx(static_cast<int>(c), a, b)] += yp;
            if (it != cell_index_.end()) row[idx1dx(it->second, a, b)] -= yp;
            yp *= ye;
          }
          rows.push_back(std::move(row));
        }
      }
    }
    return rows_to_matrix(rows, raw1_);
  }

  static SparseMatrix rows_to_matrix(const std::vector<std::map<int, Rational>>& rows, int cols) {
    SparseMatrix A(static_cast<int>(rows.size()), cols);
    for (size_t r = 0; r < rows.size(); ++r)
      for (const auto& [c, v] : rows[r])
        if (v != 0) A.set(static_cast<int>(r), c, v);
    return A;
  }

  SparseMatrix d_matrix0() const {
    SparseMatrix A(raw1_, raw0_);
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
      for (int a = 0; a <= k_; ++a)
        for (int b = 0; b <= k_; ++b) {
          if (a > 0) A.add(idx1dx(c, a - 1, b), idx0(c, a, b), Rational(a));
          if (b > 0) A.add(idx1dy(c, a, b - 1), idx0(c, a, b), Rational(b));
        }
    return A;
  }

  // d(u dx + v dy) = (dv/dx - du/dy) dx dy
  SparseMatrix d_matrix1() const {
    SparseMatrix A(raw2_, raw1_);
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
      for (int a = 0; a <= k_ - 1; ++a)
        for (int b = 0; b <= k_; ++b)
          if (b > 0) A.add(idx2(c, a, b - 1), idx1dx(c, a, b), Rational(-b));
      for (int a = 0; a <= k_; ++a)
        for (int b = 0; b <= k_ - 1; ++b)
          if (a > 0) A.add(idx2(c, a - 1, b), idx1dy(c, a, b), Rational(a));
    }
    return A;
  }

  static SparseMatrix product(const SparseMatrix& A, const Basis& cols) {
    SparseMatrix M(A.rows, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
      std::vector<Rational> y = A.apply(cols[c]);
      for (int r = 0; r < A.rows; ++r)
        if (y[r] != 0) M.set(r, static_cast<int>(c), y[r]);
    }
    return M;
  }

  static std::vector<Rational> mat_apply(const Basis& cols, const std::vector<Rational>& x,
                                         int dim) {
    std::vector<Rational> y(static_cast<size_t>(dim), Rational(0));
    for (size_t c = 0; c < cols.size(); ++c)
      if (x[c] != 0)
        for (size_t r = 0; r < y.size(); ++r)
          if (cols[c][r] != 0) y[r] += cols[c][r] * x[c];
    return y;
  }

  void accumulate_cell(std::vector<Rational>& w, int degree, int cell, const Bivar& bv) const {
    for (size_t a = 0; a < bv.size(); ++a)
      for (size_t b = 0; b < bv[a].size(); ++b) {
        if (bv[a][b] == 0) continue;
        int lim_a = degree == 0 ? k_ : k_ - 1;
        int lim_b = degree == 0 ? k_ : k_ - 1;
        if (degree == 1) throw std::logic_error("accumulate_cell: wrong path");
        if (static_cast<int>(a) > lim_a || static_cast<int>(b) > lim_b)
          throw std::runtime_error("BudgetSdr: form exceeds the polynomial budget");
        w[degree == 0 ? idx0(cell, static_cast<int>(a), static_cast<int>(b))
                      : idx2(cell, static_cast<int>(a), static_cast<int>(b))] += bv[a][b];
      }
  }

  std::vector<Rational> raw_coords(const Form2D& f, int degree) const {
    if (!f2_supported_in(f, D_))
      throw std::runtime_error("BudgetSdr: form not supported in the region");
    std::vector<Rational> w(degree == 0 ? raw0_ : (degree == 1 ? raw1_ : raw2_), Rational(0));
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
      Interval ix = cell_ix(c), iy = cell_iy(c);
      for (const auto& t : f.terms) {
        Poly px, py;
        try {
          px = t.fx.c.over(ix.a, ix.b);
          py = t.fy.c.over(iy.a, iy.b);
        } catch (const std::logic_error&) {
          throw std::runtime_error("BudgetSdr: form knots do not align with the cell grid");
        }
        if (px.empty() || py.empty()) continue;
        Bivar bv;
        bivar_acc(bv, px, py, t.coef);
        if (degree != 1) {
          accumulate_cell(w, degree, c, bv);
        } else {
          bool is_dx = t.fx.degree == 1;
          for (size_t a = 0; a < bv.size(); ++a)
            for (size_t b = 0; b < bv[a].size(); ++b) {
              if (bv[a][b] == 0) continue;
              int la = is_dx ? k_ - 1 : k_, lb = is_dx ? k_ : k_ - 1;
              if (static_cast<int>(a) > la || static_cast<int>(b) > lb)
                throw std::runtime_error("BudgetSdr: form exceeds the polynomial budget");
              w[is_dx ? idx1dx(c, static_cast<int>(a), static_cast<int>(b))
                      : idx1dy(c, static_cast<int>(a), static_cast<int>(b))] += bv[a][b];
            }
        }
      }
    }
    return w;
  }

  Form1D monomial_on(const Interval& I, int power, int degree) const {
    PiecewisePoly pp;
    pp.knots = {I.a, I.b};
    Poly mono(static_cast<size_t>(power) + 1, Rational(0));
    mono[static_cast<size_t>(power)] = 1;
    pp.pieces = {mono};
    return Form1D{degree, pp};
  }

  Form2D from_raw(const std::vector<Rational>& w, int degree) const {
    std::vector<Form2D::Term> ts;
    for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
      Interval ix = cell_ix(c), iy = cell_iy(c);
      auto emit = [&](int a, int b, int dx, int dy, const Rational& v) {
        if (v == 0) return;
        ts.push_back({monomial_on(ix, a, dx), monomial_on(iy, b, dy), v});
      };
      if (degree == 0) {
        for (int a = 0; a <= k_; ++a)
          for (int b = 0; b <= k_; ++b) emit(a, b, 0, 0, w[idx0(c, a, b)]);
      } else if (degree == 2) {
        for (int a = 0; a <= k_ - 1; ++a)
          for (int b = 0; b <= k_ - 1; ++b) emit(a, b, 1, 1, w[idx2(c, a, b)]);
      } else {
        for (int a = 0; a <= k_ - 1; ++a)
          for (int b = 0; b <= k_; ++b) emit(a, b, 1, 0, w[idx1dx(c, a, b)]);
        for (int a = 0; a <= k_; ++a)
          for (int b = 0; b <= k_ - 1; ++b) emit(a, b, 0, 1, w[idx1dy(c, a, b)]);
      }
    }
    return f2_from_terms(std::move(ts));
  }
};

inline FormSdr2D sdr_polyomino(const DiskRegion& D, const HomotopyBudget& budget) {
  auto core = std::make_shared<BudgetSdr>(D, budget);
  FormSdr2D s;
  s.domain = D;
  s.omega = core->omega();
  s.p = [core](const Form2D& f) { return core->p(f); };
  s.i = [core](const Rational& c) { return core->i(c); };
  s.h = [core](const Form2D& f) { return core->h(f); };
  return s;
}

}  // namespace pfa
