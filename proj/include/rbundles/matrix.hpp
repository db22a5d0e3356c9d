#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rbundles/errors.hpp"
#include "rbundles/scalar.hpp"

namespace rbundles {

// Dense matrix over an exact field. Elimination never needs pivot-magnitude
// heuristics: any nonzero entry is a valid pivot.
template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = K(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const K& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError(ErrorCode::Precondition, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return c;
  }

  std::vector<K> apply(const std::vector<K>& v) const {
    if (v.size() != cols_) throw DomainError(ErrorCode::Precondition, "matrix apply shape mismatch");
    std::vector<K> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  // Reduced row echelon form; pivot column indices appended to `pivots`.
  Matrix rref(std::vector<std::size_t>* pivots = nullptr) const {
    Matrix m = *this;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t sel = row;
      while (sel < rows_ && m.at(sel, col).is_zero()) ++sel;
      if (sel == rows_) continue;
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m.at(sel, j), m.at(row, j));
      K inv = m.at(row, col).inv();
      for (std::size_t j = col; j < cols_; ++j) m.at(row, j) = m.at(row, j) * inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == row || m.at(i, col).is_zero()) continue;
        K f = m.at(i, col);
        for (std::size_t j = col; j < cols_; ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
      }
      if (pivots) pivots->push_back(col);
      ++row;
    }
    return m;
  }

  std::size_t rank() const {
    std::vector<std::size_t> pivots;
    rref(&pivots);
    return pivots.size();
  }

  // Basis of the right kernel {v : M v = 0}, one vector per free column.
  std::vector<std::vector<K>> kernel_basis() const {
    std::vector<std::size_t> pivots;
    Matrix r = rref(&pivots);
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<K> v(cols_);
      v[free] = K(1);
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(i, free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  std::optional<Matrix> inverse() const {
    if (rows_ != cols_) throw DomainError(ErrorCode::Precondition, "inverse of non-square matrix");
    Matrix aug(rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
      aug.at(i, cols_ + i) = K(1);
    }
    std::vector<std::size_t> pivots;
    Matrix r = aug.rref(&pivots);
    if (pivots.size() != rows_ || pivots.back() >= cols_) return std::nullopt;
    Matrix inv(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = r.at(i, cols_ + j);
    return inv;
  }

  // One solution of M x = rhs, if consistent.
  std::optional<std::vector<K>> solve(const std::vector<K>& rhs) const {
    if (rhs.size() != rows_) throw DomainError(ErrorCode::Precondition, "solve shape mismatch");
    Matrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
      aug.at(i, cols_) = rhs[i];
    }
    std::vector<std::size_t> pivots;
    Matrix r = aug.rref(&pivots);
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<K> x(cols_);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r.at(i, cols_);
    return x;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> a_;
};

// Rank of the matrix whose rows are the given vectors.
template <class K>
std::size_t row_space_rank(const std::vector<std::vector<K>>& rows) {
  if (rows.empty()) return 0;
  Matrix<K> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  return m.rank();
}

}  // namespace rbundles
