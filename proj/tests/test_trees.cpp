#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "pfa/trees.hpp"

using namespace pfa;

namespace {

DiskRegion seg(long a, long b) { return disk_interval(Interval(rat(a), rat(b))); }

DiskRegion box(long ax, long bx, long ay, long by) {
  return disk_rect(Interval(rat(ax), rat(bx)), Interval(rat(ay), rat(by)));
}

}  // namespace

TEST_CASE("operation validation") {
  validate_operation({seg(0, 10), {seg(1, 2), seg(3, 4)}});
  CHECK_THROWS_AS(validate_operation({seg(0, 10), {seg(1, 3), seg(2, 4)}}),
                  std::invalid_argument);  // overlap
  CHECK_THROWS_AS(validate_operation({seg(0, 2), {seg(1, 3)}}),
                  std::invalid_argument);  // not contained
  CHECK_THROWS_AS(validate_operation({seg(0, 2), {box(0, 1, 0, 1)}}),
                  std::invalid_argument);  // dimension mismatch
  validate_operation({disk_all(2), {box(0, 1, 0, 1), box(2, 3, 0, 1)}});
  CHECK_THROWS_AS(
      validate_operation({disk_all(2), {disk_cells(rat(1), {{0, 0}, {1, 1}})}}),
      std::invalid_argument);  // input not a disk
}

TEST_CASE("region equality ignores the presentation") {
  auto r = box(0, 2, 0, 1);
  auto cells = disk_cells(rat(1), {{0, 0}, {1, 0}});
  CHECK(region_equal(r, cells));
  CHECK(region_equal(disk_all(2), disk_all(2)));
  CHECK_FALSE(region_equal(r, disk_all(2)));
  CHECK_FALSE(region_equal(r, box(0, 2, 0, 2)));
}

TEST_CASE("strict composition splices the inputs in place") {
  PfaOperation f{seg(0, 10), {seg(1, 4), seg(5, 6)}};
  PfaOperation g{seg(1, 4), {seg(1, 2), seg(3, 4)}};
  auto c = compose_op(f, 0, g);
  REQUIRE(c.arity() == 3);
  CHECK(region_equal(c.in[0], seg(1, 2)));
  CHECK(region_equal(c.in[1], seg(3, 4)));
  CHECK(region_equal(c.in[2], seg(5, 6)));
  CHECK_THROWS_AS(compose_op(f, 2, g), std::invalid_argument);
  CHECK_THROWS_AS(compose_op(f, 1, g), std::invalid_argument);  // slot disk mismatch
}

TEST_CASE("input permutation") {
  PfaOperation f{seg(0, 10), {seg(1, 2), seg(3, 4), seg(5, 6)}};
  auto p = permute(f, {2, 0, 1});
  CHECK(region_equal(p.in[0], seg(5, 6)));
  CHECK(region_equal(p.in[1], seg(1, 2)));
  CHECK_THROWS_AS(permute(f, {0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(permute(f, {0, 1}), std::invalid_argument);
}

TEST_CASE("tree bookkeeping") {
  PfaOperation root{seg(0, 10), {seg(1, 4), seg(5, 6)}};
  PfaOperation inner{seg(1, 4), {seg(1, 2), seg(3, 4)}};
  auto t = two_vertex_tree(root, 0, inner);
  validate_tree(t);
  CHECK(t.n_vertices() == 2);
  CHECK(t.n_leaves() == 3);
  CHECK(t.max_path_vertices() == 2);
  auto leaves = t.leaf_disks();
  REQUIRE(leaves.size() == 3);
  CHECK(region_equal(leaves[0], seg(1, 2)));
  CHECK(region_equal(leaves[2], seg(5, 6)));

  CHECK_THROWS_AS(graft(t, 0, leaf_tree(inner)), std::invalid_argument);  // occupied
  CHECK_THROWS_AS(graft(leaf_tree(root), 1, leaf_tree(inner)), std::invalid_argument);
  auto deep = graft(t, 1, leaf_tree(PfaOperation{seg(5, 6), {}}));
  CHECK(deep.n_vertices() == 3);
  CHECK(deep.n_leaves() == 2);  // nullary vertex closes one leaf
  CHECK(deep.max_path_vertices() == 2);
}

TEST_CASE("degree vanishing predicate") {
  PfaOperation root{seg(0, 10), {seg(1, 4)}};
  PfaOperation inner{seg(1, 4), {seg(2, 3)}};
  auto chain2 = two_vertex_tree(root, 0, inner);
  CHECK_FALSE(degree_vanishing(1, leaf_tree(root)));
  CHECK(degree_vanishing(1, chain2));

  PfaOperation r2{box(0, 8, 0, 8), {box(1, 4, 1, 4)}};
  PfaOperation i2{box(1, 4, 1, 4), {box(2, 3, 2, 3)}};
  auto chain2d = two_vertex_tree(r2, 0, i2);
  CHECK_FALSE(degree_vanishing(2, chain2d));  // a 2-chain can pair in the plane
  CHECK(degree_vanishing(3, chain2d));
  CHECK(degree_vanishing(4, chain2d));

  PfaOperation i3{box(2, 3, 2, 3), {}};
  auto chain3 = graft(leaf_tree(r2), 0, graft(leaf_tree(i2), 0, leaf_tree(i3)));
  CHECK(chain3.max_path_vertices() == 3);
  CHECK_FALSE(degree_vanishing(3, chain3));
  CHECK(degree_vanishing(4, chain3));

  // branching does not lengthen the homotopy chain
  PfaOperation wide{box(0, 8, 0, 8), {box(1, 2, 1, 2), box(3, 4, 3, 4)}};
  auto bush = graft(graft(leaf_tree(wide), 0, leaf_tree(PfaOperation{box(1, 2, 1, 2), {}})), 1,
                    leaf_tree(PfaOperation{box(3, 4, 3, 4), {}}));
  CHECK(bush.n_vertices() == 3);
  CHECK(bush.max_path_vertices() == 2);
  CHECK(degree_vanishing(3, bush));
}

TEST_CASE("standard shapes") {
  auto fork = standard_trees("fork", {{seg(0, 10), {seg(1, 6)}}, {seg(1, 6), {seg(2, 3), seg(4, 5)}}});
  CHECK(fork.n_vertices() == 2);
  CHECK(fork.n_leaves() == 2);

  auto rf = standard_trees(
      "right-free", {{seg(0, 10), {seg(1, 4), seg(5, 6)}}, {seg(1, 4), {seg(2, 3)}}});
  CHECK(rf.n_leaves() == 2);
  CHECK(region_equal(rf.leaf_disks()[1], seg(5, 6)));

  PfaOperation m1{seg(0, 20), {seg(1, 8), seg(9, 10)}};
  PfaOperation m2{seg(1, 8), {seg(2, 3), seg(4, 7)}};
  PfaOperation m3{seg(4, 7), {seg(5, 6)}};
  auto lin = standard_trees("cocycle-linear", {m1, m2, m3}, {0, 1});
  CHECK(lin.n_vertices() == 3);
  CHECK(lin.max_path_vertices() == 3);

  PfaOperation b1{seg(0, 20), {seg(1, 4), seg(5, 8)}};
  PfaOperation b21{seg(1, 4), {seg(2, 3)}};
  PfaOperation b22{seg(5, 8), {seg(6, 7)}};
  auto br = standard_trees("cocycle-branched", {b1, b21, b22}, {0, 1});
  CHECK(br.n_vertices() == 3);
  CHECK(br.max_path_vertices() == 2);

  CHECK_THROWS_AS(standard_trees("nosuch", {}), std::invalid_argument);
  CHECK_THROWS_AS(standard_trees("fork", {m1, m2}), std::invalid_argument);
  CHECK_THROWS_AS(
      cocycle_branched_tree(b1, 0, b21, 0, b22), std::invalid_argument);
}

TEST_CASE("fork and right-free builders") {
  auto f = fork_tree(box(0, 8, 0, 8), box(1, 6, 1, 6), {box(2, 3, 2, 3), box(4, 5, 4, 5)});
  validate_tree(f);
  CHECK(f.op.arity() == 1);
  CHECK(f.n_leaves() == 2);

  auto r = right_free_tree(box(0, 8, 0, 8), box(1, 4, 1, 4), box(5, 6, 1, 2), box(2, 3, 2, 3));
  validate_tree(r);
  CHECK(r.n_leaves() == 2);
  CHECK(region_equal(r.leaf_disks()[0], box(2, 3, 2, 3)));
}
