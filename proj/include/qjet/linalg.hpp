#pragma once

#include <optional>
#include <vector>

#include "qjet/rational.hpp"

namespace qjet {

/// Dense rational matrix with exact row reduction. Desk-scale only.
class QMatrix {
public:
  QMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), Rational(0)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int r, int c) { return data_[static_cast<size_t>(r * cols_ + c)]; }
  const Rational& at(int r, int c) const { return data_[static_cast<size_t>(r * cols_ + c)]; }

  int rank() const;
  /// Basis of the right kernel {v : A v = 0}.
  std::vector<std::vector<Rational>> kernel_basis() const;

private:
  int rows_, cols_;
  std::vector<Rational> data_;
};

/// Inverse of a square matrix, or nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& m);

inline int QMatrix::rank() const {
  QMatrix m = *this;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (!m.at(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int cc = 0; cc < cols_; ++cc) std::swap(m.at(pivot, cc), m.at(rank, cc));
    Rational inv = Rational(1) / m.at(rank, c);
    for (int cc = 0; cc < cols_; ++cc) m.at(rank, cc) *= inv;
    for (int r = 0; r < rows_; ++r) {
      if (r == rank || m.at(r, c).is_zero()) continue;
      Rational f = m.at(r, c);
      for (int cc = 0; cc < cols_; ++cc) m.at(r, cc) -= f * m.at(rank, cc);
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<Rational>> QMatrix::kernel_basis() const {
  QMatrix m = *this;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (!m.at(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int cc = 0; cc < cols_; ++cc) std::swap(m.at(pivot, cc), m.at(rank, cc));
    Rational inv = Rational(1) / m.at(rank, c);
    for (int cc = 0; cc < cols_; ++cc) m.at(rank, cc) *= inv;
    for (int r = 0; r < rows_; ++r) {
      if (r == rank || m.at(r, c).is_zero()) continue;
      Rational f = m.at(r, c);
      for (int cc = 0; cc < cols_; ++cc) m.at(r, cc) -= f * m.at(rank, cc);
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(static_cast<size_t>(cols_), false);
  for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols_; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<size_t>(cols_), Rational(0));
    v[static_cast<size_t>(free)] = Rational(1);
    for (int r = 0; r < rank; ++r)
      v[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] = -m.at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}



inline std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  int n = m.rows();
  QMatrix aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = Rational(1);
  }
  int rank = 0;
  for (int c = 0; c < n && rank < n; ++c) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if (!aug.at(r, c).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return std::nullopt;
    for (int cc = 0; cc < 2 * n; ++cc) std::swap(aug.at(pivot, cc), aug.at(rank, cc));
    Rational s = Rational(1) / aug.at(rank, c);
    for (int cc = 0; cc < 2 * n; ++cc) aug.at(rank, cc) *= s;
    for (int r = 0; r < n; ++r) {
      if (r == rank || aug.at(r, c).is_zero()) continue;
      Rational f = aug.at(r, c);
      for (int cc = 0; cc < 2 * n; ++cc) aug.at(r, cc) -= f * aug.at(rank, cc);
    }
    ++rank;
  }
  if (rank < n) return std::nullopt;
  QMatrix inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
  return inv;
}

}  // namespace qjet
