#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "pfa/chains.hpp"

using namespace pfa;

namespace {

Form1D box1(const Rational& a, const Rational& b, const Rational& c) {
  PiecewisePoly p;
  p.knots = {a, b};
  p.pieces = {poly_const(c)};
  return Form1D{1, p};
}

Form1D hat0(const Rational& a, const Rational& m, const Rational& b) {
  PiecewisePoly p;
  p.knots = {a, m, b};
  Rational u = Rational(1) / (m - a), v = Rational(1) / (b - m);
  p.pieces = {{-a * u, u}, {b * v, -v}};
  return Form1D{0, p};
}

ChainElement single(TheoryKind k, const Factor& f) {
  return ChainElement{k, {Monomial{rat(1), {f}}}};
}

}  // namespace

TEST_CASE("unit and zero elements") {
  auto u = ce_unit(TheoryKind::Envelope1);
  CHECK(u.mons.size() == 1);
  CHECK(u.mons[0].factors.empty());
  CHECK(total_degree(u) == 0);
  CHECK(ce_is_zero(ce_zero(TheoryKind::Envelope2)));
  CHECK_FALSE(ce_is_zero(u));
  CHECK(total_degree(ce_zero(TheoryKind::Envelope1)) == std::nullopt);
}

TEST_CASE("factor degrees under the shifts") {
  CHECK(factor_degree(TheoryKind::Envelope1, env1_factor(0, box1(rat(0), rat(1), rat(1)))) == 0);
  CHECK(factor_degree(TheoryKind::Envelope1, env1_factor(0, hat0(rat(0), rat(1), rat(2)))) == -1);
  CHECK(factor_degree(TheoryKind::Envelope1, env_coh_factor(0)) == 0);
  Form2D top = f2_term(box1(rat(0), rat(1), rat(1)), box1(rat(0), rat(1), rat(1)));
  Form2D one = f2_term(box1(rat(0), rat(1), rat(1)), hat0(rat(0), rat(1), rat(2)));
  CHECK(factor_degree(TheoryKind::Envelope2, env2_factor(0, top)) == 1);
  CHECK(factor_degree(TheoryKind::Envelope2, env2_factor(0, one)) == 0);
  CHECK(factor_degree(TheoryKind::Envelope2, env_coh_factor(0)) == 1);
  CHECK(factor_degree(TheoryKind::ChernSimons, cs_factor(top, 0)) == 0);
  CHECK(factor_degree(TheoryKind::ChernSimons, cs_factor(one, 1)) == 0);
  CHECK(factor_degree(TheoryKind::ChernSimons, cs_coh_factor(0)) == 0);
  CHECK(factor_degree(TheoryKind::ChernSimons, cs_coh_factor(1)) == 1);
}

TEST_CASE("products follow the sign rule") {
  auto A = single(TheoryKind::Envelope1, env1_factor(0, hat0(rat(0), rat(1), rat(2))));
  auto B = single(TheoryKind::Envelope1, env1_factor(1, hat0(rat(1), rat(2), rat(3))));
  auto C = single(TheoryKind::Envelope1, env1_factor(0, box1(rat(0), rat(1), rat(1))));
  // odd with odd anticommutes, squares vanish
  CHECK(ce_equal(ce_mul(A, B), ce_scale(ce_mul(B, A), rat(-1))));
  CHECK(ce_is_zero(ce_mul(A, A)));
  // even with anything commutes
  CHECK(ce_equal(ce_mul(C, B), ce_mul(B, C)));
  CHECK_FALSE(ce_is_zero(ce_mul(C, C)));
  CHECK(total_degree(ce_mul(A, B)) == -2);
  CHECK(sym_weight(ce_mul(A, B)) == 2);
}

TEST_CASE("mixed theories are rejected") {
  auto a = ce_unit(TheoryKind::Envelope1);
  auto b = ce_unit(TheoryKind::ChernSimons);
  CHECK_THROWS_AS(ce_add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(ce_mul(a, b), std::invalid_argument);
}

TEST_CASE("inhomogeneous degree is an error") {
  auto A = single(TheoryKind::Envelope1, env1_factor(0, hat0(rat(0), rat(1), rat(2))));
  auto C = single(TheoryKind::Envelope1, env1_factor(0, box1(rat(0), rat(1), rat(1))));
  CHECK_THROWS_AS(total_degree(ce_add(A, C)), std::logic_error);
}

TEST_CASE("normalize rejects factors with a tail") {
  PiecewisePoly tailed;
  tailed.tail = 2;
  ChainElement e{TheoryKind::Envelope1, {Monomial{rat(1), {env1_factor(0, Form1D{0, tailed})}}}};
  CHECK_THROWS_AS(normalize(e), std::invalid_argument);
}

TEST_CASE("zero detection across regroupings") {
  Form1D a = hat0(rat(0), rat(1), rat(2));
  Form1D b = hat0(rat(1), rat(2), rat(3));
  ChainElement joint =
      single(TheoryKind::Envelope1, env1_factor(0, Form1D{0, pp_add(a.c, b.c)}));
  ChainElement split = ce_add(single(TheoryKind::Envelope1, env1_factor(0, a)),
                              single(TheoryKind::Envelope1, env1_factor(0, b)));
  CHECK(ce_equal(joint, split));
  CHECK_FALSE(ce_equal(joint, single(TheoryKind::Envelope1, env1_factor(0, a))));
}

TEST_CASE("de Rham differential squares to zero") {
  auto e1 = ce_mul(single(TheoryKind::Envelope1, env1_factor(0, hat0(rat(0), rat(1), rat(2)))),
                   single(TheoryKind::Envelope1, env1_factor(1, box1(rat(0), rat(2), rat(3)))));
  CHECK(ce_is_zero(d_dr(d_dr(e1))));

  Form2D zf = f2_term(hat0(rat(0), rat(1), rat(2)), hat0(rat(0), rat(1), rat(2)));
  auto e2 = single(TheoryKind::Envelope2, env2_factor(0, zf));
  CHECK(ce_is_zero(d_dr(d_dr(e2))));
}

TEST_CASE("full envelope differential squares to zero") {
  auto L = lie_sl2();
  auto dfull = [&](const ChainElement& x) { return ce_add(d_dr(x), d_ce(x, L)); };

  auto E = single(TheoryKind::Envelope1, env1_factor(0, hat0(rat(0), rat(1), rat(2))));
  auto F = single(TheoryKind::Envelope1, env1_factor(1, box1(rat(0), rat(2), rat(1))));
  auto H = single(TheoryKind::Envelope1, env1_factor(2, hat0(rat(1), rat(2), rat(3))));
  auto e = ce_mul(E, ce_mul(F, H));
  CHECK(ce_is_zero(dfull(dfull(e))));

  Form2D za = f2_term(hat0(rat(0), rat(1), rat(2)), hat0(rat(0), rat(1), rat(2)));
  Form2D ob = f2_term(box1(rat(0), rat(1), rat(1)), hat0(rat(0), rat(1), rat(2)));
  Form2D oc = f2_term(hat0(rat(0), rat(1), rat(2)), box1(rat(1), rat(2), rat(2)));
  auto f = ce_mul(single(TheoryKind::Envelope2, env2_factor(0, za)),
                  ce_mul(single(TheoryKind::Envelope2, env2_factor(1, ob)),
                         single(TheoryKind::Envelope2, env2_factor(2, oc))));
  CHECK(ce_is_zero(dfull(dfull(f))));
}

TEST_CASE("pairing contraction") {
  Form2D w1 = f2_term(box1(rat(0), rat(1), rat(1)), hat0(rat(0), rat(1), rat(2)));
  Form2D w2 = f2_term(hat0(rat(0), rat(1), rat(2)), box1(rat(0), rat(1), rat(1)));
  Rational v = integrate2(wedge2(w1, w2));
  REQUIRE(v != 0);

  ChainElement e{TheoryKind::ChernSimons,
                 {Monomial{rat(1), {cs_factor(w1, 1), cs_factor(w2, 0)}}}};
  auto de = bv_laplacian(e);
  auto exp = canonical_expand(de);
  REQUIRE(exp.size() == 1);
  CHECK(exp.begin()->first.empty());
  CHECK((exp.begin()->second == v || exp.begin()->second == -v));

  // circle grading: only mixed powers pair
  ChainElement same{TheoryKind::ChernSimons,
                    {Monomial{rat(1), {cs_factor(w1, 0), cs_factor(w2, 0)}}}};
  CHECK(ce_is_zero(bv_laplacian(same)));
  CHECK_THROWS_AS(bv_laplacian(ce_unit(TheoryKind::Envelope1)), std::invalid_argument);
  CHECK_THROWS_AS(d_ce(ce_unit(TheoryKind::ChernSimons), lie_sl2()), std::invalid_argument);
}

TEST_CASE("full pairing differential squares to zero") {
  Form2D w1 = f2_term(box1(rat(0), rat(1), rat(1)), hat0(rat(0), rat(1), rat(2)));
  Form2D w2 = f2_term(hat0(rat(0), rat(1), rat(2)), box1(rat(0), rat(1), rat(1)));
  Form2D w3 = f2_term(box1(rat(0), rat(2), rat(1, 2)), hat0(rat(0), rat(1), rat(2)));
  Form2D w4 = f2_term(hat0(rat(0), rat(2), rat(3)), box1(rat(1), rat(2), rat(2)));
  ChainElement e{TheoryKind::ChernSimons,
                 {Monomial{rat(1),
                           {cs_factor(w1, 1), cs_factor(w2, 0), cs_factor(w3, 1),
                            cs_factor(w4, 0)}}}};
  auto dfull = [](const ChainElement& x) { return ce_add(d_dr(x), bv_laplacian(x)); };
  CHECK(ce_is_zero(bv_laplacian(bv_laplacian(e))));
  CHECK(ce_is_zero(dfull(dfull(e))));
}
