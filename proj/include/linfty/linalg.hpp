#pragma once

// Exact dense linear algebra over Q: reduced row echelon form, kernels,
// column spaces and linear solves.  Kernel bases are the free-column basis of
// the RREF, so representatives are deterministic in column order.

#include "linfty/core.hpp"

#include <optional>
#include <vector>

namespace linfty {

using Vec = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), Scalar(0)) {}

  static Matrix from_columns(int rows, const std::vector<Vec>& columns) {
    Matrix m(rows, static_cast<int>(columns.size()));
    for (int c = 0; c < m.cols_; ++c) {
      for (int r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Scalar& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  Vec column(int c) const {
    Vec v(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  Vec apply(const Vec& x) const {
    Vec y(static_cast<std::size_t>(rows_), Scalar(0));
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) {
        if ((*this)(r, c) != 0 && x[c] != 0) y[r] += (*this)(r, c) * x[c];
      }
    }
    return y;
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> data_;
};

struct Echelon {
  Matrix reduced;
  std::vector<int> pivots;  // pivot column of row i
};

/// Gauss-Jordan elimination to reduced row echelon form.
inline Echelon rref(Matrix m) {
  Echelon e;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    m.swap_rows(row, p);
    Scalar inv = 1 / m(row, col);
    for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Scalar f = m(r, col);
      for (int c = col; c < m.cols(); ++c) {
        if (m(row, c) != 0) m(r, c) -= f * m(row, c);
      }
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

inline int rank(const Matrix& m) { return static_cast<int>(rref(m).pivots.size()); }

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<Vec> kernel_basis(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> out;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(static_cast<std::size_t>(m.cols()), Scalar(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(static_cast<int>(r), free);
    out.push_back(std::move(v));
  }
  return out;
}

/// Columns of m that form a basis of its column space (first-pivot choice).
inline std::vector<int> independent_columns(const Matrix& m) { return rref(m).pivots; }

/// Any solution of m x = b, or nullopt when inconsistent.  Free variables are
/// set to zero.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  Matrix aug(m.rows(), m.cols() + 1);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  Echelon e = rref(std::move(aug));
  Vec x(static_cast<std::size_t>(m.cols()), Scalar(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == m.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(static_cast<int>(r), m.cols());
  }
  return x;
}

inline bool is_zero(const Vec& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

inline Vec dense(const SparseVec& v, const std::vector<int>& indices) {
  Vec out(indices.size(), Scalar(0));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto it = v.find(indices[k]);
    if (it != v.end()) out[k] = it->second;
  }
  return out;
}

inline SparseVec sparse(const Vec& v, const std::vector<int>& indices) {
  SparseVec out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (v[k] != 0) out.emplace(indices[k], v[k]);
  }
  return out;
}

}  // namespace linfty
