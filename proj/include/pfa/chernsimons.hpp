#pragma once

#include <stdexcept>
#include <vector>

#include "pfa/theory.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Compactified linear theory on the plane
//
// Chains are symmetric words in plane forms tensored with circle classes; the
// pairing differential couples complementary circle classes through the
// integral of the wedge. The circle has unit circumference throughout.
// ---------------------------------------------------------------------------

inline TheoryContext build_cs(HomotopyBudget budget = {}) { return cs_theory(budget); }

// The two generating classes.
inline ChainElement cs_one() {
  return normalize(ChainElement{TheoryKind::ChernSimons, {Monomial{Rational(1), {cs_coh_factor(0)}}}});
}

inline ChainElement cs_theta() {
  return normalize(ChainElement{TheoryKind::ChernSimons, {Monomial{Rational(1), {cs_coh_factor(1)}}}});
}

// Degree -1 bracket on the generators: complementary circle classes pair to
// the unit, everything else to zero.
inline GeneratorBracket cs_generator_bracket() {
  return [](const Factor& fa, const Factor& fb) {
    if (!fa.coh || !fb.coh)
      throw std::invalid_argument("cs_generator_bracket: wants cohomology labels");
    if (fa.upow + fb.upow == 1) return ce_unit(TheoryKind::ChernSimons);
    return ce_zero(TheoryKind::ChernSimons);
  };
}

inline ChainElement cs_bracket(const ChainElement& a, const ChainElement& b) {
  if (a.kind != TheoryKind::ChernSimons || b.kind != TheoryKind::ChernSimons)
    throw std::invalid_argument("cs_bracket: wants circle theory elements");
  return poisson_extend(TheoryKind::ChernSimons, cs_generator_bracket(), a, b);
}

// Strict structure map of a single inclusion.
inline ChainElement cs_structure_maps(const TheoryContext& ctx, const PfaOperation& op,
                                      const std::vector<ChainElement>& args) {
  if (ctx.kind() != TheoryKind::ChernSimons)
    throw std::invalid_argument("cs_structure_maps: wants the circle theory");
  return strict_mu(ctx, op, args);
}

inline ChainElement cs_l_invariant(const TheoryContext& ctx, const LConfiguration& cfg,
                                   const ChainElement& a, const ChainElement& b) {
  if (ctx.kind() != TheoryKind::ChernSimons)
    throw std::invalid_argument("cs_l_invariant: wants the circle theory");
  return l_invariant(ctx, cfg, a, b);
}

}  // namespace pfa
