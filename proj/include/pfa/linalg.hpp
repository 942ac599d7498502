#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pfa/rational.hpp"

namespace pfa {

// Sparse rational matrix. Zero entries are never stored.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::map<std::pair<int, int>, Rational> entries;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c) {}

  Rational at(int r, int c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? Rational(0) : it->second;
  }

  void set(int r, int c, const Rational& v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::out_of_range("SparseMatrix::set: index out of range");
    if (v == 0)
      entries.erase({r, c});
    else
      entries[{r, c}] = v;
  }

  void add(int r, int c, const Rational& v) { set(r, c, at(r, c) + v); }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != cols)
      throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    std::vector<Rational> y(rows, Rational(0));
    for (const auto& [rc, v] : entries) y[rc.first] += v * x[rc.second];
    return y;
  }

  SparseMatrix transposed() const {
    SparseMatrix t(cols, rows);
    for (const auto& [rc, v] : entries) t.entries[{rc.second, rc.first}] = v;
    return t;
  }
};

// Reusable Gauss-Jordan eliminator with the deterministic pivot rule:
// columns are visited left to right and the topmost available row with a
// nonzero entry becomes the pivot. Stores R = T * A in reduced row echelon
// form together with T, so repeated solves against the same matrix are
// back-substitutions only.
class GaussSolver {
 public:
  explicit GaussSolver(const SparseMatrix& A) : rows_(A.rows), cols_(A.cols) {
    R_.assign(rows_, std::vector<Rational>(cols_, Rational(0)));
    for (const auto& [rc, v] : A.entries) R_[rc.first][rc.second] = v;
    T_.assign(rows_, std::vector<Rational>(rows_, Rational(0)));
    for (int r = 0; r < rows_; ++r) T_[r][r] = 1;

    int cur = 0;
    for (int c = 0; c < cols_ && cur < rows_; ++c) {
      int piv = -1;
      for (int r = cur; r < rows_; ++r)
        if (R_[r][c] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(R_[cur], R_[piv]);
      std::swap(T_[cur], T_[piv]);
      Rational inv = Rational(1) / R_[cur][c];
      for (auto& x : R_[cur]) x *= inv;
      for (auto& x : T_[cur]) x *= inv;
      for (int r = 0; r < rows_; ++r) {
        if (r == cur || R_[r][c] == 0) continue;
        Rational f = R_[r][c];
        for (int j = 0; j < cols_; ++j)
          if (R_[cur][j] != 0) R_[r][j] -= f * R_[cur][j];
        for (int j = 0; j < rows_; ++j)
          if (T_[cur][j] != 0) T_[r][j] -= f * T_[cur][j];
      }
      pivots_.push_back(c);
      ++cur;
    }
    rank_ = cur;
  }

  int rank() const { return rank_; }
  const std::vector<int>& pivot_columns() const { return pivots_; }

  // Solves A x = b with x supported on the pivot columns (the fixed
  // complement of ker A); returns nothing when b is outside the image.
  std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const {
    if (static_cast<int>(b.size()) != rows_)
      throw std::invalid_argument("GaussSolver::solve: size mismatch");
    std::vector<Rational> y(rows_, Rational(0));
    for (int r = 0; r < rows_; ++r)
      for (int j = 0; j < rows_; ++j)
        if (T_[r][j] != 0 && b[j] != 0) y[r] += T_[r][j] * b[j];
    for (int r = rank_; r < rows_; ++r)
      if (y[r] != 0) return std::nullopt;
    std::vector<Rational> x(cols_, Rational(0));
    for (int k = 0; k < rank_; ++k) x[pivots_[k]] = y[k];
    return x;
  }

  // Basis of ker A, one vector per non-pivot column, that column set to 1.
  std::vector<std::vector<Rational>> nullspace_basis() const {
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots_) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols_; ++f) {
      if (is_pivot[f]) continue;
      std::vector<Rational> v(cols_, Rational(0));
      v[f] = 1;
      for (int k = 0; k < rank_; ++k) v[pivots_[k]] = -R_[k][f];
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  int rows_, cols_, rank_ = 0;
  std::vector<std::vector<Rational>> R_, T_;
  std::vector<int> pivots_;
};

inline std::optional<std::vector<Rational>> solve_in_image(const SparseMatrix& A,
                                                           const std::vector<Rational>& b) {
  return GaussSolver(A).solve(b);
}

inline std::vector<std::vector<Rational>> nullspace_basis(const SparseMatrix& A) {
  return GaussSolver(A).nullspace_basis();
}

// Basis of a complement of the column space of A inside Q^rows: the standard
// basis vectors sitting at the non-pivot coordinates of rref(A^T).
inline std::vector<std::vector<Rational>> complement_basis(const SparseMatrix& A) {
  GaussSolver g(A.transposed());
  std::vector<bool> is_pivot(A.rows, false);
  for (int c : g.pivot_columns()) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int j = 0; j < A.rows; ++j) {
    if (is_pivot[j]) continue;
    std::vector<Rational> v(A.rows, Rational(0));
    v[j] = 1;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace pfa
