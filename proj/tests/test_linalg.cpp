#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <vector>

#include "pfa/linalg.hpp"

using namespace pfa;

namespace {

SparseMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  SparseMatrix A(static_cast<int>(rows.size()),
                 rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c)
      if (rows[r][c] != 0) A.set(r, c, rat(rows[r][c]));
  return A;
}

}  // namespace

TEST_CASE("sparse matrix storage and apply") {
  SparseMatrix A(2, 3);
  A.set(0, 0, rat(2));
  A.set(1, 2, rat(-1, 3));
  A.add(0, 0, rat(-2));
  CHECK(A.at(0, 0) == 0);
  CHECK(A.entries.size() == 1);
  CHECK_THROWS_AS(A.set(2, 0, rat(1)), std::out_of_range);
  auto y = A.apply({rat(1), rat(1), rat(3)});
  CHECK(y == std::vector<Rational>{rat(0), rat(-1)});
  CHECK(A.transposed().at(2, 1) == rat(-1, 3));
}

TEST_CASE("solver on an invertible matrix") {
  auto A = from_rows({{2, 1}, {1, 1}});
  GaussSolver g(A);
  CHECK(g.rank() == 2);
  auto x = g.solve({rat(3), rat(2)});
  REQUIRE(x.has_value());
  CHECK(*x == std::vector<Rational>{rat(1), rat(1)});
  CHECK(g.nullspace_basis().empty());
}

TEST_CASE("solver rejects vectors outside the image") {
  auto A = from_rows({{1, 2}, {2, 4}});
  GaussSolver g(A);
  CHECK(g.rank() == 1);
  CHECK_FALSE(g.solve({rat(0), rat(1)}).has_value());
  auto x = g.solve({rat(1), rat(2)});
  REQUIRE(x.has_value());
  CHECK(A.apply(*x) == std::vector<Rational>{rat(1), rat(2)});
  // Solutions are supported on the pivot columns.
  CHECK((*x)[1] == 0);
}

TEST_CASE("nullspace basis vectors actually lie in the kernel") {
  auto A = from_rows({{1, 1, 1}, {0, 1, 2}});
  auto ns = nullspace_basis(A);
  REQUIRE(ns.size() == 1);
  CHECK(A.apply(ns[0]) == std::vector<Rational>(2, rat(0)));
  CHECK(ns[0][2] == 1);
}

TEST_CASE("complement basis completes the column space") {
  auto A = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
  auto comp = complement_basis(A);
  GaussSolver g(A);
  REQUIRE(static_cast<int>(comp.size()) + g.rank() == 3);
  // Columns of A plus the complement span the whole target space.
  SparseMatrix S(3, 3 + static_cast<int>(comp.size()));
  for (const auto& [rc, v] : A.entries) S.set(rc.first, rc.second, v);
  for (std::size_t k = 0; k < comp.size(); ++k)
    for (int r = 0; r < 3; ++r) S.set(r, 3 + static_cast<int>(k), comp[k][r]);
  CHECK(GaussSolver(S).rank() == 3);
}

TEST_CASE("solve_in_image wrapper") {
  auto A = from_rows({{1, 0}, {0, 0}});
  CHECK(solve_in_image(A, {rat(5), rat(0)}).has_value());
  CHECK_FALSE(solve_in_image(A, {rat(0), rat(5)}).has_value());
}
