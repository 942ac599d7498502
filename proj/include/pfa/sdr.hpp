#pragma once

#include <functional>

#include "pfa/chains.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Contraction of a symmetric algebra, induced factor-wise
//
// p and i extend multiplicatively. The homotopy extends through the
// symmetrization of h (x) ip (x) ... (x) ip over all tensor orders; collected
// by which factor receives h and which subset stays untouched in front, the
// lift of h on an n-factor monomial is
//
//   h[f_1 ... f_n] = sum_k sum_{A subset of rest}
//       |A|! (n-1-|A|)! / n! * shuffle_sign * (-1)^{deg f_A}
//       * f_A . h(f_k) . prod_{b notin A, b != k} ip(f_b)
//
// with all degrees taken in the shifted complex.
// ---------------------------------------------------------------------------

struct ChainSdr {
  TheoryKind kind = TheoryKind::Envelope1;
  std::function<Rational(const Factor&)> factor_p;
  std::function<Factor(const Factor&)> factor_i;    // cohomology label -> chain factor
  std::function<Factor(const Factor&)> factor_coh;  // chain factor -> cohomology label
  std::function<Factor(const Factor&)> factor_ip;
  std::function<Factor(const Factor&)> factor_h;
  std::function<ChainElement(const ChainElement&)> dd;  // shifted de Rham differential

  ChainElement p(const ChainElement& e) const {
    ChainElement r{kind, {}};
    for (const auto& mon : e.mons) {
      Monomial m;
      m.coef = mon.coef;
      bool dead = false;
      for (const auto& f : mon.factors) {
        if (f.coh) throw std::invalid_argument("ChainSdr::p: already on the cohomology side");
        Rational v = factor_p(f);
        if (v == 0) {
          dead = true;
          break;
        }
        m.coef *= v;
        m.factors.push_back(factor_coh(f));
      }
      if (!dead) r.mons.push_back(std::move(m));
    }
    return normalize(r);
  }

  ChainElement i(const ChainElement& e) const {
    ChainElement r{kind, {}};
    for (const auto& mon : e.mons) {
      Monomial m;
      m.coef = mon.coef;
      for (const auto& f : mon.factors) {
        if (!f.coh) throw std::invalid_argument("ChainSdr::i: expects a cohomology element");
        m.factors.push_back(factor_i(f));
      }
      r.mons.push_back(std::move(m));
    }
    return normalize(r);
  }

  ChainElement h(const ChainElement& e) const {
    ChainElement r{kind, {}};
    for (const auto& mon : e.mons) {
      int n = static_cast<int>(mon.factors.size());
      if (n == 0) continue;
      std::vector<int> degs;
      for (const auto& f : mon.factors) {
        if (f.coh) throw std::invalid_argument("ChainSdr::h: cohomology factor in a chain");
        degs.push_back(factor_degree(kind, f));
      }
      for (int k = 0; k < n; ++k) {
        Factor hf = factor_h(mon.factors[static_cast<size_t>(k)]);
        if (factor_repr_zero(kind, hf)) continue;
        std::vector<int> rest;
        for (int a = 0; a < n; ++a)
          if (a != k) rest.push_back(a);
        int nrest = n - 1;
        for (unsigned mask = 0; mask < (1u << nrest); ++mask) {
          std::vector<int> A, B;
          for (int t = 0; t < nrest; ++t)
            ((mask >> t) & 1u ? A : B).push_back(rest[static_cast<size_t>(t)]);
          // target order: A, k, B; Koszul sign of the reshuffle
          std::vector<int> order = A;
          order.push_back(k);
          order.insert(order.end(), B.begin(), B.end());
          long flips = 0;
          for (size_t s = 0; s < order.size(); ++s)
            for (size_t t = s + 1; t < order.size(); ++t)
              if (order[s] > order[t] && degs[static_cast<size_t>(order[s])] % 2 != 0 &&
                  degs[static_cast<size_t>(order[t])] % 2 != 0)
                ++flips;
          long passA = 0;
          for (int a : A) passA += degs[static_cast<size_t>(a)];
          Rational sign((flips + passA) % 2 == 0 ? 1 : -1);
          Rational coef = mon.coef * sign * factorial(static_cast<int>(A.size())) *
                          factorial(nrest - static_cast<int>(A.size())) / factorial(n);
          Monomial m;
          m.coef = coef;
          bool dead = false;
          for (int a : A) m.factors.push_back(mon.factors[static_cast<size_t>(a)]);
          m.factors.push_back(hf);
          for (int b : B) {
            Factor g = factor_ip(mon.factors[static_cast<size_t>(b)]);
            if (factor_repr_zero(kind, g)) {
              dead = true;
              break;
            }
            m.factors.push_back(g);
          }
          if (!dead) r.mons.push_back(std::move(m));
        }
      }
    }
    return normalize(r);
  }
};

inline ChainSdr chain_sdr_env1(const FormSdr1D& s, const LieAlgebra* /*unused*/ = nullptr) {
  ChainSdr c;
  c.kind = TheoryKind::Envelope1;
  c.factor_p = [](const Factor& f) { return integrate1(f.f1); };
  c.factor_i = [s](const Factor& f) { return env1_factor(f.lie, s.omega); };
  c.factor_coh = [](const Factor& f) { return env_coh_factor(f.lie); };
  c.factor_ip = [s](const Factor& f) {
    return env1_factor(f.lie, f1_scale(s.omega, integrate1(f.f1)));
  };
  // odd shift: the homotopy of the shifted complex is +h^r
  c.factor_h = [s](const Factor& f) { return env1_factor(f.lie, s.hr(f.f1)); };
  c.dd = [](const ChainElement& e) { return d_dr(e); };
  return c;
}

inline ChainSdr chain_sdr_env2(const FormSdr2D& s) {
  ChainSdr c;
  c.kind = TheoryKind::Envelope2;
  c.factor_p = [s](const Factor& f) { return s.p(f.f2); };
  c.factor_i = [s](const Factor& f) { return env2_factor(f.lie, s.omega); };
  c.factor_coh = [](const Factor& f) { return env_coh_factor(f.lie); };
  c.factor_ip = [s](const Factor& f) { return env2_factor(f.lie, s.i(s.p(f.f2))); };
  // odd shift flips both d and h; the seven conditions are preserved
  c.factor_h = [s](const Factor& f) { return env2_factor(f.lie, f2_scale(s.h(f.f2), rat(-1))); };
  c.dd = [](const ChainElement& e) { return d_dr(e); };
  return c;
}

inline ChainSdr chain_sdr_cs(const FormSdr2D& s) {
  ChainSdr c;
  c.kind = TheoryKind::ChernSimons;
  c.factor_p = [s](const Factor& f) { return s.p(f.f2); };
  c.factor_i = [s](const Factor& f) { return cs_factor(s.omega, f.upow); };
  c.factor_coh = [](const Factor& f) { return cs_coh_factor(f.upow); };
  c.factor_ip = [s](const Factor& f) { return cs_factor(s.i(s.p(f.f2)), f.upow); };
  c.factor_h = [s](const Factor& f) { return cs_factor(s.h(f.f2), f.upow); };
  c.dd = [](const ChainElement& e) { return d_dr(e); };
  return c;
}

// ---------------------------------------------------------------------------
// Homological perturbation
//
// delta must lower the number of factors in every monomial; then the
// geometric series below are finite sums.
// ---------------------------------------------------------------------------

using ChainMap = std::function<ChainElement(const ChainElement&)>;

struct TransferMaps {
  ChainMap p_hat, i_hat, h_hat, lambda;
};

inline TransferMaps perturb(const ChainSdr& s, const ChainMap& delta, int guard = 64) {
  auto p_hat = [s, delta, guard](const ChainElement& x0) {
    ChainElement x = x0;
    ChainElement acc = s.p(x);
    for (int t = 0; t < guard; ++t) {
      if (x.repr_zero()) return acc;
      x = delta(s.h(x));
      acc = ce_add(acc, s.p(x));
    }
    throw std::runtime_error("perturb: series did not terminate");
  };
  auto i_hat = [s, delta, guard](const ChainElement& y) {
    ChainElement x = s.i(y);
    ChainElement acc = x;
    for (int t = 0; t < guard; ++t) {
      if (x.repr_zero()) return acc;
      x = s.h(delta(x));
      acc = ce_add(acc, x);
    }
    throw std::runtime_error("perturb: series did not terminate");
  };
  auto h_hat = [s, delta, guard](const ChainElement& x0) {
    ChainElement x = x0;
    ChainElement acc = s.h(x);
    for (int t = 0; t < guard; ++t) {
      if (x.repr_zero()) return acc;
      x = delta(s.h(x));
      acc = ce_add(acc, s.h(x));
    }
    throw std::runtime_error("perturb: series did not terminate");
  };
  auto lambda = [s, i_hat, delta](const ChainElement& y) { return s.p(delta(i_hat(y))); };
  return TransferMaps{p_hat, i_hat, h_hat, lambda};
}

// ---------------------------------------------------------------------------
// Conditions of a strong deformation retraction, checked on samples
// ---------------------------------------------------------------------------

struct SdrReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline SdrReport verify_sdr(const ChainMap& d_chain, const ChainMap& d_coh, const ChainMap& p,
                            const ChainMap& i, const ChainMap& h,
                            const std::vector<ChainElement>& chain_samples,
                            const std::vector<ChainElement>& coh_samples) {
  SdrReport rep;
  auto check = [&](bool okay, const std::string& what, size_t idx) {
    if (!okay) rep.failures.push_back(what + " fails on sample " + std::to_string(idx));
  };
  for (size_t t = 0; t < coh_samples.size(); ++t) {
    const auto& y = coh_samples[t];
    check(ce_is_zero(ce_sub(d_chain(i(y)), i(d_coh(y)))), "d i = i d'", t);
    check(ce_equal(p(i(y)), y), "p i = id", t);
    check(ce_is_zero(h(i(y))), "h i = 0", t);
  }
  for (size_t t = 0; t < chain_samples.size(); ++t) {
    const auto& x = chain_samples[t];
    check(ce_is_zero(ce_sub(d_coh(p(x)), p(d_chain(x)))), "d' p = p d", t);
    ChainElement lhs = ce_add(d_chain(h(x)), h(d_chain(x)));
    ChainElement rhs = ce_sub(i(p(x)), x);
    check(ce_equal(lhs, rhs), "d h + h d = i p - id", t);
    check(ce_is_zero(p(h(x))), "p h = 0", t);
    check(ce_is_zero(h(h(x))), "h h = 0", t);
  }
  return rep;
}

inline SdrReport verify_sdr(const ChainSdr& s, const std::vector<ChainElement>& chain_samples,
                            const std::vector<ChainElement>& coh_samples) {
  auto zero_map = [](const ChainElement& e) { return ce_zero(e.kind); };
  return verify_sdr(
      s.dd, zero_map, [&s](const ChainElement& e) { return s.p(e); },
      [&s](const ChainElement& e) { return s.i(e); },
      [&s](const ChainElement& e) { return s.h(e); }, chain_samples, coh_samples);
}

}  // namespace pfa
