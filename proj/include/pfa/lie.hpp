#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfa/rational.hpp"

namespace pfa {

// Finite dimensional Lie algebra over Q, given by structure constants on a
// named basis. Elements are dense coefficient vectors.
class LieAlgebra {
 public:
  LieAlgebra(std::string name, std::vector<std::string> basis,
             std::map<std::pair<int, int>, std::vector<Rational>> table)
      : name_(std::move(name)), basis_(std::move(basis)), table_(std::move(table)) {
    for (int i = 0; i < dim(); ++i) index_[basis_[static_cast<size_t>(i)]] = i;
    if (static_cast<int>(index_.size()) != dim())
      throw std::invalid_argument("LieAlgebra: duplicate basis names");
    validate();
  }

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<std::string>& basis() const { return basis_; }
  int index(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw std::invalid_argument("LieAlgebra: unknown basis name " + n);
    return it->second;
  }

  std::vector<Rational> zero() const { return std::vector<Rational>(dim(), Rational(0)); }

  std::vector<Rational> gen(int i) const {
    auto v = zero();
    v[static_cast<size_t>(i)] = 1;
    return v;
  }

  std::vector<Rational> gen(const std::string& n) const { return gen(index(n)); }

  std::vector<Rational> bracket_basis(int i, int j) const {
    auto it = table_.find({i, j});
    if (it != table_.end()) return it->second;
    it = table_.find({j, i});
    if (it != table_.end()) {
      auto v = it->second;
      for (auto& c : v) c = -c;
      return v;
    }
    return zero();
  }

  std::vector<Rational> bracket(const std::vector<Rational>& u,
                                const std::vector<Rational>& v) const {
    auto r = zero();
    for (int i = 0; i < dim(); ++i) {
      if (u[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < dim(); ++j) {
        if (v[static_cast<size_t>(j)] == 0) continue;
        Rational c = u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
        auto w = bracket_basis(i, j);
        for (int k = 0; k < dim(); ++k) r[static_cast<size_t>(k)] += c * w[static_cast<size_t>(k)];
      }
    }
    return r;
  }

  // ad(u)^n applied to v
  std::vector<Rational> ad_power(const std::vector<Rational>& u, int n,
                                 std::vector<Rational> v) const {
    for (int t = 0; t < n; ++t) v = bracket(u, v);
    return v;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name_;
    j["basis"] = basis_;
    auto brs = nlohmann::json::array();
    for (const auto& [ij, v] : table_) {
      bool nonzero = false;
      for (const auto& c : v) nonzero = nonzero || c != 0;
      if (!nonzero) continue;
      nlohmann::json e;
      e["left"] = basis_[static_cast<size_t>(ij.first)];
      e["right"] = basis_[static_cast<size_t>(ij.second)];
      auto res = nlohmann::json::array();
      for (int k = 0; k < dim(); ++k)
        if (v[static_cast<size_t>(k)] != 0)
          res.push_back({{"basis", basis_[static_cast<size_t>(k)]},
                         {"coef", rat_str(v[static_cast<size_t>(k)])}});
      e["result"] = res;
      brs.push_back(e);
    }
    j["brackets"] = brs;
    return j;
  }

  static LieAlgebra from_json(const nlohmann::json& j) {
    std::string name = j.value("name", std::string("unnamed"));
    std::vector<std::string> basis = j.at("basis").get<std::vector<std::string>>();
    std::map<std::string, int> idx;
    for (size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = static_cast<int>(i);
    std::map<std::pair<int, int>, std::vector<Rational>> table;
    for (const auto& e : j.value("brackets", nlohmann::json::array())) {
      int a = idx.at(e.at("left").get<std::string>());
      int b = idx.at(e.at("right").get<std::string>());
      std::vector<Rational> v(basis.size(), Rational(0));
      for (const auto& r : e.at("result"))
        v[static_cast<size_t>(idx.at(r.at("basis").get<std::string>()))] +=
            rat_parse(r.at("coef").get<std::string>());
      table[{a, b}] = v;
    }
    return LieAlgebra(name, basis, table);
  }

 private:
  std::string name_;
  std::vector<std::string> basis_;
  std::map<std::string, int> index_;
  std::map<std::pair<int, int>, std::vector<Rational>> table_;

  void validate() const {
    for (const auto& [ij, v] : table_) {
      if (ij.first < 0 || ij.first >= dim() || ij.second < 0 || ij.second >= dim())
        throw std::invalid_argument("LieAlgebra: bracket index out of range");
      if (static_cast<int>(v.size()) != dim())
        throw std::invalid_argument("LieAlgebra: bracket value has wrong dimension");
    }
    for (int i = 0; i < dim(); ++i) {
      for (const auto& c : bracket_basis(i, i))
        if (c != 0) throw std::invalid_argument("LieAlgebra: [x,x] must vanish");
      for (int j = 0; j < dim(); ++j) {
        auto it = table_.find({i, j});
        auto jt = table_.find({j, i});
        if (it != table_.end() && jt != table_.end())
          for (int k = 0; k < dim(); ++k)
            if (it->second[static_cast<size_t>(k)] + jt->second[static_cast<size_t>(k)] != 0)
              throw std::invalid_argument("LieAlgebra: bracket table not antisymmetric");
      }
    }
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        for (int k = j + 1; k < dim(); ++k) {
          auto s = bracket(bracket_basis(i, j), gen(k));
          auto t = bracket(bracket_basis(j, k), gen(i));
          auto u = bracket(bracket_basis(k, i), gen(j));
          for (int a = 0; a < dim(); ++a)
            if (s[static_cast<size_t>(a)] + t[static_cast<size_t>(a)] +
                    u[static_cast<size_t>(a)] !=
                0)
              throw std::invalid_argument("LieAlgebra: Jacobi identity fails");
        }
  }
};

// Built-in examples.

inline LieAlgebra lie_heisenberg3() {
  std::map<std::pair<int, int>, std::vector<Rational>> t;
  t[{0, 1}] = {Rational(0), Rational(0), Rational(1)};  // [X,Y] = Z
  return LieAlgebra("heisenberg3", {"X", "Y", "Z"}, t);
}

inline LieAlgebra lie_sl2() {
  std::map<std::pair<int, int>, std::vector<Rational>> t;
  // basis E, F, H
  t[{0, 1}] = {Rational(0), Rational(0), Rational(1)};   // [E,F] = H
  t[{2, 0}] = {Rational(2), Rational(0), Rational(0)};   // [H,E] = 2E
  t[{2, 1}] = {Rational(0), Rational(-2), Rational(0)};  // [H,F] = -2F
  return LieAlgebra("sl2", {"E", "F", "H"}, t);
}

inline LieAlgebra lie_abelian(int n) {
  std::vector<std::string> basis;
  for (int i = 0; i < n; ++i) basis.push_back("A" + std::to_string(i + 1));
  return LieAlgebra("abelian" + std::to_string(n), basis, {});
}

inline LieAlgebra lie_nonabelian2() {
  std::map<std::pair<int, int>, std::vector<Rational>> t;
  t[{0, 1}] = {Rational(0), Rational(1)};  // [A,B] = B
  return LieAlgebra("nonabelian2", {"A", "B"}, t);
}

inline LieAlgebra lie_by_name(const std::string& name) {
  if (name == "heisenberg3") return lie_heisenberg3();
  if (name == "sl2") return lie_sl2();
  if (name == "nonabelian2") return lie_nonabelian2();
  if (name.rfind("abelian", 0) == 0 && name.size() > 7)
    return lie_abelian(std::stoi(name.substr(7)));
  throw std::invalid_argument("unknown Lie algebra: " + name);
}

}  // namespace pfa
