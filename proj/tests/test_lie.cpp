#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "pfa/io.hpp"
#include "pfa/lie.hpp"

using namespace pfa;

TEST_CASE("heisenberg structure") {
  auto g = lie_heisenberg3();
  CHECK(g.dim() == 3);
  CHECK(g.bracket(g.gen("X"), g.gen("Y")) == g.gen("Z"));
  auto mz = g.gen("Z");
  for (auto& c : mz) c = -c;
  CHECK(g.bracket(g.gen("Y"), g.gen("X")) == mz);
  // the center kills everything: ad is 2-step nilpotent
  CHECK(g.ad_power(g.gen("X"), 2, g.gen("Y")) == g.zero());
  CHECK(g.bracket(g.gen("Z"), g.gen("X")) == g.zero());
}

TEST_CASE("sl2 structure") {
  auto g = lie_sl2();
  CHECK(g.bracket(g.gen("E"), g.gen("F")) == g.gen("H"));
  auto twoE = g.gen("E");
  twoE[0] = 2;
  CHECK(g.bracket(g.gen("H"), g.gen("E")) == twoE);
  // ad(H)^3 E = 8 E
  auto v = g.ad_power(g.gen("H"), 3, g.gen("E"));
  auto eightE = g.zero();
  eightE[0] = 8;
  CHECK(v == eightE);
}

TEST_CASE("abelian and two dimensional nonabelian") {
  auto a = lie_abelian(4);
  CHECK(a.dim() == 4);
  CHECK(a.bracket(a.gen(0), a.gen(3)) == a.zero());
  auto n = lie_nonabelian2();
  CHECK(n.bracket(n.gen("A"), n.gen("B")) == n.gen("B"));
}

TEST_CASE("constructor validation") {
  using Table = std::map<std::pair<int, int>, std::vector<Rational>>;
  Table bad_diag;
  bad_diag[{0, 0}] = {rat(1), rat(0)};
  CHECK_THROWS_AS(LieAlgebra("g", {"a", "b"}, bad_diag), std::invalid_argument);
  Table bad_antisym;
  bad_antisym[{0, 1}] = {rat(0), rat(1)};
  bad_antisym[{1, 0}] = {rat(0), rat(1)};
  CHECK_THROWS_AS(LieAlgebra("g", {"a", "b"}, bad_antisym), std::invalid_argument);
  // [a,b]=c, [a,c]=-b, [b,c]=b breaks Jacobi
  Table bad_jacobi;
  bad_jacobi[{0, 1}] = {rat(0), rat(0), rat(1)};
  bad_jacobi[{0, 2}] = {rat(0), rat(-1), rat(0)};
  bad_jacobi[{1, 2}] = {rat(0), rat(1), rat(0)};
  CHECK_THROWS_AS(LieAlgebra("g", {"a", "b", "c"}, bad_jacobi), std::invalid_argument);
  CHECK_THROWS_AS(LieAlgebra("g", {"a", "a"}, Table{}), std::invalid_argument);
  CHECK_THROWS_AS(lie_by_name("nosuch"), std::invalid_argument);
  CHECK(lie_by_name("abelian3").dim() == 3);
}

TEST_CASE("json round trip") {
  for (const auto& g : {lie_heisenberg3(), lie_sl2(), lie_nonabelian2(), lie_abelian(2)}) {
    auto h = LieAlgebra::from_json(g.to_json());
    CHECK(h.name() == g.name());
    CHECK(h.basis() == g.basis());
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) CHECK(h.bracket_basis(i, j) == g.bracket_basis(i, j));
  }
}

TEST_CASE("bundled definition files match the builtins") {
  const std::string root = PFA_SOURCE_DIR;
  for (const std::string name : {"heisenberg3", "sl2", "nonabelian2", "abelian2"}) {
    auto g = LieAlgebra::from_json(load_json_file(root + "/data/lie/" + name + ".json"));
    auto b = lie_by_name(name);
    CHECK(g.name() == b.name());
    CHECK(g.basis() == b.basis());
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) CHECK(g.bracket_basis(i, j) == b.bracket_basis(i, j));
  }
}
