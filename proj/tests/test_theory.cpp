#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "pfa/chernsimons.hpp"
#include "pfa/envelope.hpp"
#include "pfa/theory.hpp"

using namespace pfa;

namespace {

DiskRegion box(const Rational& ax, const Rational& bx, const Rational& ay, const Rational& by) {
  return disk_rect(Interval(ax, bx), Interval(ay, by));
}

DiskRegion seg(const Rational& a, const Rational& b) { return disk_interval(Interval(a, b)); }

}  // namespace

TEST_CASE("context construction guards") {
  CHECK_THROWS_AS(TheoryContext(TheoryKind::ChernSimons, lie_sl2()), std::invalid_argument);
  CHECK_THROWS_AS(TheoryContext(TheoryKind::Envelope2, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(envelope_theory(3, lie_sl2()), std::invalid_argument);
  auto ctx = envelope_theory(1, lie_heisenberg3());
  CHECK(ctx.m() == 1);
  CHECK_THROWS_AS(ctx.maps(box(rat(0), rat(1), rat(0), rat(1))), std::invalid_argument);
  CHECK(region_key(disk_all(2)) != region_key(box(rat(0), rat(1), rat(0), rat(1))));
  CHECK(region_key(box(rat(0), rat(1), rat(0), rat(1))) !=
        region_key(disk_cells(rat(1), {{0, 0}})));
}

TEST_CASE("transfer maps invert on cohomology for every disk shape") {
  auto ctx = envelope_theory(2, lie_heisenberg3());
  auto X = lie_gen(TheoryKind::Envelope2, 0);
  auto Y = lie_gen(TheoryKind::Envelope2, 1);
  auto Z = lie_gen(TheoryKind::Envelope2, 2);
  std::vector<ChainElement> samples = {X, ce_mul(X, Y), ce_mul(X, ce_mul(Y, Z))};
  std::vector<DiskRegion> disks = {disk_all(2), box(rat(0), rat(1), rat(0), rat(1)),
                                   disk_cells(rat(1), {{0, 0}, {1, 0}, {0, 1}})};
  for (const auto& D : disks) {
    const auto& tm = ctx.maps(D).tm;
    for (const auto& y : samples) {
      CHECK(ce_equal(tm.p_hat(tm.i_hat(y)), y));
      CHECK(ce_is_zero(tm.h_hat(tm.i_hat(y))));
    }
  }

  auto cs = cs_theory();
  auto one = cs_one();
  auto th = cs_theta();
  std::vector<ChainElement> cs_samples = {one, th, ce_mul(one, th), ce_mul(one, one)};
  for (const auto& D : disks) {
    const auto& tm = cs.maps(D).tm;
    for (const auto& y : cs_samples) CHECK(ce_equal(tm.p_hat(tm.i_hat(y)), y));
  }
}

TEST_CASE("strict product on the line is the star product") {
  auto ctx = envelope_theory(1, lie_heisenberg3());
  auto X = lie_gen(TheoryKind::Envelope1, 0);
  auto Y = lie_gen(TheoryKind::Envelope1, 1);
  auto Z = lie_gen(TheoryKind::Envelope1, 2);
  PfaOperation op{disk_all(1), {seg(rat(0), rat(1)), seg(rat(2), rat(3))}};
  auto got = strict_mu(ctx, op, {X, Y});
  auto expected = ce_add(ce_mul(X, Y), ce_scale(Z, rat(1, 2)));
  CHECK(ce_equal(got, expected));

  // swapping the geometric order flips the correction
  PfaOperation swapped{disk_all(1), {seg(rat(2), rat(3)), seg(rat(0), rat(1))}};
  auto got2 = strict_mu(ctx, swapped, {X, Y});
  CHECK(ce_equal(got2, ce_sub(ce_mul(X, Y), ce_scale(Z, rat(1, 2)))));
  CHECK(ce_equal(ce_sub(got, got2), Z));

  // unary inclusions act as the identity, the empty operation gives the unit
  PfaOperation incl{disk_all(1), {seg(rat(0), rat(1))}};
  CHECK(ce_equal(strict_mu(ctx, incl, {ce_mul(X, Y)}), ce_mul(X, Y)));
  PfaOperation empty{disk_all(1), {}};
  CHECK(ce_equal(strict_mu(ctx, empty, {}), ctx.coh_unit()));
}

TEST_CASE("strict products in the plane are free and graded commutative") {
  auto ctx = envelope_theory(2, lie_heisenberg3());
  auto X = lie_gen(TheoryKind::Envelope2, 0);
  auto Y = lie_gen(TheoryKind::Envelope2, 1);
  auto Z = lie_gen(TheoryKind::Envelope2, 2);
  PfaOperation op{disk_all(2), {box(rat(0), rat(1), rat(0), rat(1)), box(rat(2), rat(3), rat(0), rat(1))}};
  CHECK(ce_equal(strict_mu(ctx, op, {X, Y}), ce_mul(X, Y)));
  CHECK(ce_equal(strict_mu(ctx, op, {Y, X}), ce_scale(ce_mul(X, Y), rat(-1))));
  CHECK(ce_equal(strict_mu(ctx, op, {ce_mul(X, Y), Z}), ce_mul(X, ce_mul(Y, Z))));
  CHECK(ce_is_zero(strict_mu(ctx, op, {X, X})));
}

TEST_CASE("first order products vanish on the line") {
  auto ctx = envelope_theory(1, lie_sl2());
  auto E = lie_gen(TheoryKind::Envelope1, 0);
  auto F = lie_gen(TheoryKind::Envelope1, 1);
  PfaOperation outer{disk_all(1), {seg(rat(0), rat(1)), seg(rat(4), rat(5))}};
  PfaOperation inner{seg(rat(0), rat(1)), {seg(rat(1, 4), rat(1, 2))}};
  auto tv = eval_transfer(ctx, two_vertex_tree(outer, 0, inner), {E, F});
  CHECK(ce_is_zero(tv.value));
  CHECK_FALSE(tv.degree.has_value());

  PfaOperation deepest{seg(rat(1, 4), rat(1, 2)), {seg(rat(5, 16), rat(3, 8))}};
  auto chain = graft(leaf_tree(outer), 0,
                     two_vertex_tree(inner, 0, deepest));
  auto tv3 = eval_transfer(ctx, chain, {E, F});
  CHECK(ce_is_zero(tv3.value));
}

TEST_CASE("argument validation in tree evaluation") {
  auto ctx = envelope_theory(1, lie_heisenberg3());
  PfaOperation op{disk_all(1), {seg(rat(0), rat(1)), seg(rat(2), rat(3))}};
  auto X = lie_gen(TheoryKind::Envelope1, 0);
  CHECK_THROWS_AS(eval_transfer(ctx, leaf_tree(op), {X}), std::invalid_argument);
  ChainElement chain_arg{TheoryKind::Envelope1,
                         {Monomial{rat(1), {env1_factor(0, bump1(Interval(rat(0), rat(1))))}}}};
  CHECK_THROWS_AS(eval_transfer(ctx, leaf_tree(op), {X, chain_arg}), std::invalid_argument);
}

TEST_CASE("improved product: degrees and root independence") {
  auto ctx = envelope_theory(2, lie_sl2());
  auto E = lie_gen(TheoryKind::Envelope2, 0);
  auto F = lie_gen(TheoryKind::Envelope2, 1);
  auto H = lie_gen(TheoryKind::Envelope2, 2);
  auto cfg = massey_rect_default();

  auto t_all = right_free_tree(cfg.root, cfg.d1p, cfg.d2, cfg.d1);
  auto tv = massey_beta2(ctx, t_all, {E, F});
  REQUIRE_FALSE(ce_is_zero(tv.value));
  CHECK(tv.degree == 1);  // two arguments of degree one, one homotopy

  auto tv2 = massey_beta2(ctx, t_all, {ce_mul(E, H), F});
  REQUIRE_FALSE(ce_is_zero(tv2.value));
  CHECK(tv2.degree == 2);

  // the root disk only enters through containment
  auto t_big = right_free_tree(box(rat(-10), rat(10), rat(-10), rat(10)), cfg.d1p, cfg.d2, cfg.d1);
  CHECK(ce_equal(massey_beta2(ctx, t_big, {E, F}).value, tv.value));

  // a fork (unary root) is constant in its disk, so the improvement kills it
  auto fork = fork_tree(disk_all(2), box(rat(0), rat(3), rat(0), rat(3)),
                        {box(rat(0), rat(1), rat(0), rat(1)), box(rat(2), rat(3), rat(0), rat(1))});
  auto tf = massey_beta2(ctx, fork, {E, F});
  CHECK(ce_is_zero(tf.value));
  CHECK_FALSE(tf.degree.has_value());
}

TEST_CASE("improved product wants exactly two vertices") {
  auto ctx = envelope_theory(2, lie_sl2());
  auto E = lie_gen(TheoryKind::Envelope2, 0);
  PfaOperation op{disk_all(2), {box(rat(0), rat(1), rat(0), rat(1))}};
  CHECK_THROWS_AS(massey_beta2(ctx, leaf_tree(op), {E}), std::invalid_argument);
}

TEST_CASE("gauge with the zero correction is inert") {
  auto ctx = envelope_theory(2, lie_heisenberg3());
  auto X = lie_gen(TheoryKind::Envelope2, 0);
  auto Y = lie_gen(TheoryKind::Envelope2, 1);
  auto cfg = massey_rect_default();
  auto t = right_free_tree(cfg.root, cfg.d1p, cfg.d2, cfg.d1);
  ZeroCochain zero = [](const TheoryContext& c, const PfaOperation&,
                        const std::vector<ChainElement>&) { return ce_zero(c.kind()); };
  CHECK(ce_equal(gauge_transform(ctx, t, {X, Y}, zero).value,
                 massey_beta2(ctx, t, {X, Y}).value));
}

TEST_CASE("disk configuration validation") {
  auto cfg = l_configuration_default();
  CHECK(validate_l_configuration(cfg).empty());
  CHECK(validate_l_configuration(l_configuration_small()).empty());

  auto bad1 = cfg;
  bad1.d2 = bad1.d1;
  auto v1 = validate_l_configuration(bad1);
  REQUIRE_FALSE(v1.empty());
  CHECK(v1.front() == "d1 and d2 must be disjoint");

  auto bad2 = cfg;
  bad2.up = bad2.down;  // both bars below: nothing is enclosed
  auto v2 = validate_l_configuration(bad2);
  REQUIRE_FALSE(v2.empty());
  CHECK(v2.front() == "the two bars must enclose a hole");

  auto bad3 = cfg;
  bad3.ambient = box(rat(0), rat(3), rat(0), rat(3));
  auto v3 = validate_l_configuration(bad3);
  REQUIRE_FALSE(v3.empty());
  CHECK(v3.front() == "the ambient disk must contain everything");

  auto bad4 = cfg;
  bad4.middle = box(rat(3), rat(4), rat(1), rat(2));  // same shape, not on the grid
  auto v4 = validate_l_configuration(bad4);
  REQUIRE_FALSE(v4.empty());
  CHECK(v4.front() == "LConfiguration: the middle disk must be a polyomino on the common grid");

  auto ctx = envelope_theory(2, lie_heisenberg3());
  auto X = lie_gen(TheoryKind::Envelope2, 0);
  auto Y = lie_gen(TheoryKind::Envelope2, 1);
  CHECK_THROWS_AS(l_invariant(ctx, bad1, X, Y), std::invalid_argument);
}

TEST_CASE("composition identity of the improved product, linear shape") {
  auto ctx = envelope_theory(2, lie_sl2());
  auto E = lie_gen(TheoryKind::Envelope2, 0);
  auto F = lie_gen(TheoryKind::Envelope2, 1);
  auto H = lie_gen(TheoryKind::Envelope2, 2);

  PfaOperation mu1{disk_all(2), {box(rat(0), rat(2), rat(0), rat(2)), box(rat(3), rat(4), rat(0), rat(1))}};
  PfaOperation mu2{box(rat(0), rat(2), rat(0), rat(2)), {box(rat(0), rat(3, 2), rat(0), rat(3, 2))}};
  PfaOperation mu3{box(rat(0), rat(3, 2), rat(0), rat(3, 2)),
                   {box(rat(1, 8), rat(3, 8), rat(1, 8), rat(3, 8)),
                    box(rat(9, 8), rat(11, 8), rat(1, 8), rat(3, 8))}};
  auto t = cocycle_linear_tree(mu1, 0, mu2, 0, mu3);
  auto res = cocycle_residual(ctx, t, {E, F, H});
  CHECK(ce_is_zero(res.value));
  auto corrupt = cocycle_residual(ctx, t, {E, F, H}, true);
  CHECK_FALSE(ce_is_zero(corrupt.value));
}

TEST_CASE("composition identity of the improved product, branched shape") {
  auto ctx = envelope_theory(2, lie_sl2());
  auto E = lie_gen(TheoryKind::Envelope2, 0);
  auto F = lie_gen(TheoryKind::Envelope2, 1);

  auto H = lie_gen(TheoryKind::Envelope2, 2);

  PfaOperation mu1{disk_all(2), {box(rat(3), rat(5), rat(0), rat(2)), box(rat(0), rat(2), rat(0), rat(2))}};
  PfaOperation mu21{box(rat(3), rat(5), rat(0), rat(2)),
                    {box(rat(7, 2), rat(9, 2), rat(1, 2), rat(3, 2))}};
  PfaOperation mu22{box(rat(0), rat(2), rat(0), rat(2)),
                    {box(rat(1, 4), rat(3, 4), rat(1, 4), rat(3, 4)),
                     box(rat(5, 4), rat(7, 4), rat(1, 4), rat(3, 4))}};
  auto t = cocycle_branched_tree(mu1, 0, mu21, 1, mu22);
  auto res = cocycle_residual(ctx, t, {E, F, H});
  CHECK(ce_is_zero(res.value));
  auto corrupt = cocycle_residual(ctx, t, {E, F, H}, true);
  CHECK_FALSE(ce_is_zero(corrupt.value));

  CHECK_THROWS_AS(cocycle_residual(ctx, leaf_tree(mu1), {E, F}), std::invalid_argument);
  CHECK_THROWS_AS(cocycle_residual(ctx, t, {E}), std::invalid_argument);
}
