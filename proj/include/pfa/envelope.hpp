#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfa/theory.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Envelope theories: closed forms and prefactor integrals
// ---------------------------------------------------------------------------

// Element of the symmetric algebra given by a coefficient vector over the
// Lie basis, as a single symmetric factor.
inline ChainElement lie_elem(TheoryKind kind, const std::vector<Rational>& v) {
  ChainElement e = ce_zero(kind);
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    e.mons.push_back(Monomial{v[i], {env_coh_factor(static_cast<int>(i))}});
  }
  return normalize(e);
}

inline ChainElement lie_gen(TheoryKind kind, int i) {
  return normalize(ChainElement{kind, {Monomial{Rational(1), {env_coh_factor(i)}}}});
}

inline ChainElement ce_pow(const ChainElement& e, int n) {
  if (n < 0) throw std::invalid_argument("ce_pow: negative power");
  ChainElement out = ce_unit(e.kind);
  for (int t = 0; t < n; ++t) out = ce_mul(out, e);
  return out;
}

// ---------------------------------------------------------------------------
// The eta recurrence on the line
//
// Contract the bump of the right interval against the reference bump of the
// left interval, n times:
//   eta_0 = bump of D', eta_{j+1} = -(n-j) * bump_D * primitive(eta_j - bump_D Int eta_j).
// The integrals are the Bernoulli coefficients of the one dimensional star
// product: Int eta_j = (-1)^j C(n,j) B_j.
// ---------------------------------------------------------------------------

struct EtaRow {
  Form1D eta;
  Rational integral;
};

inline std::vector<EtaRow> eta_sequence(int n, const Interval& D = Interval(Rational(0), Rational(1)),
                                        const Interval& Dp = Interval(Rational(2), Rational(3))) {
  if (n < 0) throw std::invalid_argument("eta_sequence: n must be nonnegative");
  if (!(D.b <= Dp.a)) throw std::invalid_argument("eta_sequence: D must lie left of D'");
  FormSdr1D s = sdr_interval(std::nullopt, bump1(D));
  std::vector<EtaRow> rows;
  Form1D eta = bump1(Dp);
  for (int j = 0; j <= n; ++j) {
    rows.push_back({eta, integrate1(eta)});
    if (j < n) eta = f1_scale(wedge1(s.omega, s.hr(eta)), Rational(-(n - j)));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Star product on the line
// ---------------------------------------------------------------------------

// Closed form: X^n * Y = sum_j (-1)^j C(n,j) B_j X^{n-j} ad_X^j(Y).
inline ChainElement gutt_closed(const LieAlgebra& g, int n, const std::vector<Rational>& x,
                                const std::vector<Rational>& y) {
  if (n < 0) throw std::invalid_argument("gutt_closed: n must be nonnegative");
  const TheoryKind kind = TheoryKind::Envelope1;
  ChainElement xe = lie_elem(kind, x);
  ChainElement out = ce_zero(kind);
  for (int j = 0; j <= n; ++j) {
    ChainElement term = ce_mul(ce_pow(xe, n - j), lie_elem(kind, g.ad_power(x, j, y)));
    Rational c = binomial(n, j) * bernoulli(j);
    if (j % 2) c = -c;
    out = ce_add(out, ce_scale(term, c));
  }
  return out;
}

// Same product through the transferred structure maps: X^n placed in the
// left interval, Y in the right one, multiplied into the line.
inline ChainElement gutt_via_transfer(const TheoryContext& ctx, int n,
                                      const std::vector<Rational>& x,
                                      const std::vector<Rational>& y,
                                      std::optional<Interval> D = std::nullopt,
                                      Interval Dp = Interval(Rational(2), Rational(3))) {
  if (ctx.kind() != TheoryKind::Envelope1)
    throw std::invalid_argument("gutt_via_transfer: wants the line theory");
  Interval left = D ? *D : ctx.refx();
  if (!(left.b <= Dp.a))
    throw std::invalid_argument("gutt_via_transfer: the first interval must lie on the left");
  PfaOperation op{disk_all(1), {disk_interval(left), disk_interval(Dp)}};
  ChainElement xn = ce_pow(lie_elem(ctx.kind(), x), n);
  return strict_mu(ctx, op, {xn, lie_elem(ctx.kind(), y)});
}

// ---------------------------------------------------------------------------
// Degree -1 bracket on products of odd generators
//
//   {A, B} = - sum_{i,j} (-1)^{n+i+j} [X_i, Y_j] prod_{a != i} X_a prod_{b != j} Y_b
//
// for A = X_1...X_n, B = Y_1...Y_r, extended bilinearly. All generators sit
// in degree one.
// ---------------------------------------------------------------------------

inline ChainElement shifted_bracket(const LieAlgebra& g, const ChainElement& a,
                                    const ChainElement& b) {
  if (a.kind != b.kind) throw std::invalid_argument("shifted_bracket: mixed theories");
  if (a.kind != TheoryKind::Envelope2)
    throw std::invalid_argument("shifted_bracket: wants the planar envelope");
  ChainElement out = ce_zero(a.kind);
  for (const auto& ma : a.mons)
    for (const auto& mb : b.mons) {
      const int n = static_cast<int>(ma.factors.size());
      const int r = static_cast<int>(mb.factors.size());
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= r; ++j) {
          const Factor& fx = ma.factors[static_cast<size_t>(i - 1)];
          const Factor& fy = mb.factors[static_cast<size_t>(j - 1)];
          if (!fx.coh || !fy.coh)
            throw std::invalid_argument("shifted_bracket: wants cohomology elements");
          std::vector<Rational> br = g.bracket_basis(fx.lie, fy.lie);
          for (size_t k = 0; k < br.size(); ++k) {
            if (br[k] == 0) continue;
            Monomial m;
            m.coef = ma.coef * mb.coef * br[k];
            if ((n + i + j) % 2 == 0) m.coef = -m.coef;
            m.factors.push_back(env_coh_factor(static_cast<int>(k)));
            for (int t = 1; t <= n; ++t)
              if (t != i) m.factors.push_back(ma.factors[static_cast<size_t>(t - 1)]);
            for (int t = 1; t <= r; ++t)
              if (t != j) m.factors.push_back(mb.factors[static_cast<size_t>(t - 1)]);
            out.mons.push_back(std::move(m));
          }
        }
    }
  return normalize(out);
}

// The same bracket through the generic biderivation extension; used to
// cross-check the closed form.
inline ChainElement shifted_bracket_via_extension(const LieAlgebra& g, const ChainElement& a,
                                                  const ChainElement& b) {
  GeneratorBracket br = [&g](const Factor& fx, const Factor& fy) {
    ChainElement out = ce_zero(TheoryKind::Envelope2);
    std::vector<Rational> v = g.bracket_basis(fx.lie, fy.lie);
    for (size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0) continue;
      out.mons.push_back(Monomial{v[k], {env_coh_factor(static_cast<int>(k))}});
    }
    return normalize(out);
  };
  return poisson_extend(TheoryKind::Envelope2, br, a, b);
}

// ---------------------------------------------------------------------------
// Prefactor integrals in the plane
//
// All three integrals contract the bump of d1 inside d1p, then pair the
// resulting one-form against reference data of the plane retraction with
// base cell refx x refy.
// ---------------------------------------------------------------------------

inline FormSdr2D region_sdr(const DiskRegion& D, const HomotopyBudget& budget,
                            const Interval& refx = Interval(Rational(0), Rational(1)),
                            const Interval& refy = Interval(Rational(0), Rational(1))) {
  if (D.m != 2) throw std::invalid_argument("region_sdr: wants a planar region");
  switch (D.kind) {
    case DiskRegion::Kind::All:
      return sdr_plane(refx, refy);
    case DiskRegion::Kind::Rect:
      return sdr_rectangle(*D.ix, *D.iy);
    case DiskRegion::Kind::Cells:
      return sdr_polyomino(D, budget);
  }
  throw std::logic_error("region_sdr: unreachable");
}

struct MasseyRectConfig {
  DiskRegion d1, d1p, d2, root;
};

inline MasseyRectConfig massey_rect_default() {
  MasseyRectConfig c;
  c.d1 = disk_rect(Interval(Rational(1), Rational(2)), Interval(Rational(1), Rational(2)));
  c.d1p = disk_rect(Interval(Rational(0), Rational(3)), Interval(Rational(0), Rational(3)));
  c.d2 = disk_rect(Interval(Rational(4), Rational(5)), Interval(Rational(1), Rational(2)));
  c.root = disk_all(2);
  return c;
}

// phi0 = 1/2 Int( h(h_{d1p}(w1)) ^ (w2 + w_ref) + h(w2) ^ h_{d1p}(w1) )
inline Rational phi0(const DiskRegion& d1, const DiskRegion& d1p, const DiskRegion& d2,
                     const HomotopyBudget& budget = {},
                     const Interval& refx = Interval(Rational(0), Rational(1)),
                     const Interval& refy = Interval(Rational(0), Rational(1))) {
  FormSdr2D plane = sdr_plane(refx, refy);
  FormSdr2D in = region_sdr(d1p, budget, refx, refy);
  Form2D sigma = in.h(bump2(d1));
  Form2D hsig = plane.h(sigma);
  Rational t1 = integrate2(wedge2(hsig, f2_add(bump2(d2), plane.omega)));
  Rational t2 = integrate2(wedge2(plane.h(bump2(d2)), sigma));
  return (t1 + t2) / 2;
}

// psi = 1/2 Int( h(h_{d1p}(w1)) ^ (w1 + w1p + 2 w_ref) + h(w1 + w1p) ^ h_{d1p}(w1) )
inline Rational psi(const DiskRegion& d1, const DiskRegion& d1p,
                    const HomotopyBudget& budget = {},
                    const Interval& refx = Interval(Rational(0), Rational(1)),
                    const Interval& refy = Interval(Rational(0), Rational(1))) {
  FormSdr2D plane = sdr_plane(refx, refy);
  FormSdr2D in = region_sdr(d1p, budget, refx, refy);
  Form2D w1 = bump2(d1), w1p = bump2(d1p);
  Form2D sigma = in.h(w1);
  Form2D hsig = plane.h(sigma);
  Form2D drivers = f2_add(f2_add(w1, w1p), f2_scale(plane.omega, Rational(2)));
  Rational t1 = integrate2(wedge2(hsig, drivers));
  Rational t2 = integrate2(wedge2(plane.h(f2_add(w1, w1p)), sigma));
  return (t1 + t2) / 2;
}

// phi = Int h(h_{d1p}(w1)) ^ w2
inline Rational phi(const DiskRegion& d1, const DiskRegion& d1p, const DiskRegion& d2,
                    const HomotopyBudget& budget = {},
                    const Interval& refx = Interval(Rational(0), Rational(1)),
                    const Interval& refy = Interval(Rational(0), Rational(1))) {
  FormSdr2D plane = sdr_plane(refx, refy);
  FormSdr2D in = region_sdr(d1p, budget, refx, refy);
  Form2D hsig = plane.h(in.h(bump2(d1)));
  return integrate2(wedge2(hsig, bump2(d2)));
}

// ---------------------------------------------------------------------------
// Improved product of the right free tree and the planar gauge cochain
// ---------------------------------------------------------------------------

inline ChainElement right_free_beta(const TheoryContext& ctx, const MasseyRectConfig& cfg,
                                    const ChainElement& a, const ChainElement& b) {
  PfaTree t = right_free_tree(cfg.root, cfg.d1p, cfg.d2, cfg.d1);
  return massey_beta2(ctx, t, {a, b}).value;
}

// Gauge cochain supported on binary operations: half the pairing of the
// contracted bumps of the two input disks (second one first), times the
// degree -1 bracket of the arguments. Depends on the inputs only.
inline ZeroCochain chi_envelope() {
  return [](const TheoryContext& ctx, const PfaOperation& op,
            const std::vector<ChainElement>& args) {
    if (ctx.kind() != TheoryKind::Envelope2)
      throw std::invalid_argument("chi_envelope: wants the planar envelope");
    if (op.arity() != 2) return ce_zero(ctx.kind());
    FormSdr2D plane = sdr_plane(ctx.refx(), ctx.refy());
    Rational c =
        integrate2(wedge2(plane.h(bump2(op.in[1])), plane.h(bump2(op.in[0])))) / 2;
    return ce_scale(shifted_bracket(ctx.lie(), args[0], args[1]), c);
  };
}

}  // namespace pfa
