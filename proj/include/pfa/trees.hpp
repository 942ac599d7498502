#pragma once

#include <map>

#include "pfa/forms2d.hpp"

namespace pfa {

// ---------------------------------------------------------------------------
// Inclusion operations and rooted operation trees
//
// An operation is an inclusion of finitely many pairwise disjoint disks into
// a bigger one, with ordered inputs. Operations compose strictly; a tree of
// operations remembers the composition order and is the index of a
// first-order product (one homotopy per internal edge).
// ---------------------------------------------------------------------------

struct PfaOperation {
  DiskRegion out;
  std::vector<DiskRegion> in;

  int arity() const { return static_cast<int>(in.size()); }
};

inline bool region_equal(const DiskRegion& a, const DiskRegion& b) {
  if (a.m != b.m) return false;
  bool aAll = a.kind == DiskRegion::Kind::All, bAll = b.kind == DiskRegion::Kind::All;
  if (aAll || bAll) return aAll && bAll;
  return region_contains(a, b) && region_contains(b, a);
}

inline void validate_operation(const PfaOperation& op) {
  if (!region_valid(op.out)) throw std::invalid_argument("operation: output region is not a disk");
  for (size_t t = 0; t < op.in.size(); ++t) {
    if (op.in[t].m != op.out.m) throw std::invalid_argument("operation: dimension mismatch");
    if (!region_valid(op.in[t])) throw std::invalid_argument("operation: input is not a disk");
    if (!region_contains(op.out, op.in[t]))
      throw std::invalid_argument("operation: input not contained in output");
    for (size_t u = t + 1; u < op.in.size(); ++u)
      if (!region_disjoint(op.in[t], op.in[u]))
        throw std::invalid_argument("operation: inputs overlap");
  }
}

// Strict operadic composition: plug g into the given slot of f. The slot disk
// of f must be the output disk of g.
inline PfaOperation compose_op(const PfaOperation& f, int slot, const PfaOperation& g) {
  if (slot < 0 || slot >= f.arity()) throw std::invalid_argument("compose_op: slot out of range");
  if (!region_equal(f.in[static_cast<size_t>(slot)], g.out))
    throw std::invalid_argument("compose_op: slot disk differs from the output of g");
  PfaOperation r;
  r.out = f.out;
  for (int t = 0; t < f.arity(); ++t) {
    if (t == slot)
      r.in.insert(r.in.end(), g.in.begin(), g.in.end());
    else
      r.in.push_back(f.in[static_cast<size_t>(t)]);
  }
  validate_operation(r);
  return r;
}

// Name used by the calculus layer for a single-slot composite.
inline PfaOperation infinitesimal_composite(const PfaOperation& f, int slot, const PfaOperation& g) {
  return compose_op(f, slot, g);
}

// Right action of a permutation on the inputs: the new slot k reads the old
// slot sigma[k]. sigma must be a permutation of 0..arity-1.
inline PfaOperation permute(const PfaOperation& op, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != op.arity())
    throw std::invalid_argument("permute: sigma length differs from the arity");
  std::vector<bool> seen(sigma.size(), false);
  PfaOperation r;
  r.out = op.out;
  for (int s : sigma) {
    if (s < 0 || s >= op.arity() || seen[static_cast<size_t>(s)])
      throw std::invalid_argument("permute: sigma is not a permutation");
    seen[static_cast<size_t>(s)] = true;
    r.in.push_back(op.in[static_cast<size_t>(s)]);
  }
  validate_operation(r);
  return r;
}

struct PfaTree {
  PfaOperation op;
  std::map<int, PfaTree> sub;  // grafted subtrees by slot; other slots are leaves

  int n_vertices() const {
    int n = 1;
    for (const auto& [slot, t] : sub) n += t.n_vertices();
    return n;
  }

  int n_leaves() const {
    int n = 0;
    for (int s = 0; s < op.arity(); ++s) {
      auto it = sub.find(s);
      n += (it == sub.end()) ? 1 : it->second.n_leaves();
    }
    return n;
  }

  // largest number of vertices on a root-to-leaf path
  int max_path_vertices() const {
    int best = 1;
    for (const auto& [slot, t] : sub) best = std::max(best, 1 + t.max_path_vertices());
    return best;
  }

  std::vector<DiskRegion> leaf_disks() const {
    std::vector<DiskRegion> out;
    for (int s = 0; s < op.arity(); ++s) {
      auto it = sub.find(s);
      if (it == sub.end()) {
        out.push_back(op.in[static_cast<size_t>(s)]);
      } else {
        auto inner = it->second.leaf_disks();
        out.insert(out.end(), inner.begin(), inner.end());
      }
    }
    return out;
  }
};

inline PfaTree leaf_tree(const PfaOperation& op) {
  validate_operation(op);
  return PfaTree{op, {}};
}

inline PfaTree graft(const PfaTree& f, int slot, const PfaTree& g) {
  if (slot < 0 || slot >= f.op.arity()) throw std::invalid_argument("graft: slot out of range");
  if (f.sub.count(slot)) throw std::invalid_argument("graft: slot already occupied");
  if (!region_equal(f.op.in[static_cast<size_t>(slot)], g.op.out))
    throw std::invalid_argument("graft: slot disk differs from the output of g");
  PfaTree r = f;
  r.sub.emplace(slot, g);
  return r;
}

inline PfaTree two_vertex_tree(const PfaOperation& outer, int slot, const PfaOperation& inner) {
  return graft(leaf_tree(outer), slot, leaf_tree(inner));
}

inline void validate_tree(const PfaTree& t) {
  validate_operation(t.op);
  for (const auto& [slot, s] : t.sub) {
    if (slot < 0 || slot >= t.op.arity())
      throw std::invalid_argument("tree: grafted slot out of range");
    if (!region_equal(t.op.in[static_cast<size_t>(slot)], s.op.out))
      throw std::invalid_argument("tree: grafted output disk mismatch");
    validate_tree(s);
  }
}

// Pure degree bookkeeping: the product indexed by the tree vanishes for
// degree reasons whenever every term of its perturbation expansion is killed
// by the de Rham degree count. On the line the target sits in a single
// degree, so every tree with at least two vertices dies; in dimension m >= 3
// a term needs m homotopies on one root-leaf chain before the first pairing,
// so trees whose longest chain has fewer than m vertices die.
inline bool degree_vanishing(int m, const PfaTree& t) {
  if (t.n_vertices() < 2) return false;
  if (m == 1) return true;
  return t.max_path_vertices() < m;
}

// Convenience builders for the tree shapes the calculus keeps coming back to.

// Root is 1-ary: the whole inner product is pushed through a single waist
// disk. waist must sit inside root; the feet sit inside waist.
inline PfaTree fork_tree(const DiskRegion& root, const DiskRegion& waist,
                         const std::vector<DiskRegion>& feet) {
  PfaOperation outer{root, {waist}};
  PfaOperation inner{waist, feet};
  return two_vertex_tree(outer, 0, inner);
}

// Two-vertex tree whose second input is free: the first input factors
// through the intermediate disk d1p, the second maps in directly.
inline PfaTree right_free_tree(const DiskRegion& root, const DiskRegion& d1p,
                               const DiskRegion& d2, const DiskRegion& d1) {
  PfaOperation outer{root, {d1p, d2}};
  PfaOperation inner{d1p, {d1}};
  return two_vertex_tree(outer, 0, inner);
}

// Three-vertex chain: mu3 plugged into slot s2 of mu2, plugged into slot s1
// of mu1.
inline PfaTree cocycle_linear_tree(const PfaOperation& mu1, int s1,
                                   const PfaOperation& mu2, int s2,
                                   const PfaOperation& mu3) {
  return graft(leaf_tree(mu1), s1, two_vertex_tree(mu2, s2, mu3));
}

// Three-vertex corolla pair: mu21 and mu22 plugged into two distinct slots
// of mu1.
inline PfaTree cocycle_branched_tree(const PfaOperation& mu1, int s1,
                                     const PfaOperation& mu21, int s2,
                                     const PfaOperation& mu22) {
  if (s1 == s2) throw std::invalid_argument("cocycle_branched_tree: slots must differ");
  return graft(graft(leaf_tree(mu1), s1, leaf_tree(mu21)), s2, leaf_tree(mu22));
}

// String-keyed catalog of the same shapes, for the command line layer.
// "fork" and "right-free" take two operations and no slots; "cocycle-linear"
// and "cocycle-branched" take three operations and two slots.
inline PfaTree standard_trees(const std::string& kind,
                              const std::vector<PfaOperation>& ops,
                              const std::vector<int>& slots = {}) {
  auto want = [&](size_t nops, size_t nslots) {
    if (ops.size() != nops || slots.size() != nslots)
      throw std::invalid_argument("standard_trees: wrong operation or slot count for " + kind);
  };
  if (kind == "fork") {
    want(2, 0);
    if (ops[0].arity() != 1) throw std::invalid_argument("standard_trees: fork root must be 1-ary");
    return two_vertex_tree(ops[0], 0, ops[1]);
  }
  if (kind == "right-free") {
    want(2, 0);
    if (ops[0].arity() != 2 || ops[1].arity() != 1)
      throw std::invalid_argument("standard_trees: right-free wants a 2-ary root and a 1-ary inner");
    return two_vertex_tree(ops[0], 0, ops[1]);
  }
  if (kind == "cocycle-linear") {
    want(3, 2);
    return cocycle_linear_tree(ops[0], slots[0], ops[1], slots[1], ops[2]);
  }
  if (kind == "cocycle-branched") {
    want(3, 2);
    return cocycle_branched_tree(ops[0], slots[0], ops[1], slots[1], ops[2]);
  }
  throw std::invalid_argument("standard_trees: unknown kind " + kind);
}

}  // namespace pfa
