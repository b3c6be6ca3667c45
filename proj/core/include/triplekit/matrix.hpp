#ifndef TRIPLEKIT_MATRIX_HPP
#define TRIPLEKIT_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

#include "triplekit/rational.hpp"

namespace triplekit {

/// Dense matrix over an exact field K.
template <class K>
class MatT {
 public:
  MatT() : rows_(0), cols_(0) {}
  MatT(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}
  MatT(std::initializer_list<std::initializer_list<K>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("MatT: ragged initializer");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static MatT identity(std::size_t n) {
    MatT m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t i, std::size_t j) {
    check(i, j);
    return data_[i * cols_ + j];
  }
  const K& operator()(std::size_t i, std::size_t j) const {
    check(i, j);
    return data_[i * cols_ + j];
  }

  bool operator==(const MatT& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const MatT& o) const { return !(*this == o); }

  MatT operator+(const MatT& o) const {
    require_same_shape(o);
    MatT r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
  }
  MatT operator-(const MatT& o) const {
    require_same_shape(o);
    MatT r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
  }
  MatT operator-() const {
    MatT r = *this;
    for (auto& v : r.data_) v = -v;
    return r;
  }
  MatT operator*(const MatT& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("MatT: dimension mismatch in product");
    MatT r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const K& a = (*this)(i, k);
        if (a == K(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  MatT operator*(const K& s) const {
    MatT r = *this;
    for (auto& v : r.data_) v = v * s;
    return r;
  }

  MatT transpose() const {
    MatT r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!(v == K(0))) return false;
    return true;
  }
  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }
  bool is_skew() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (!((*this)(i, j) == -(*this)(j, i))) return false;
    return true;
  }

  std::vector<K> column(std::size_t j) const {
    std::vector<K> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const std::vector<K>& c) {
    if (c.size() != rows_) throw std::invalid_argument("MatT: bad column length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  static MatT from_columns(std::size_t rows, const std::vector<std::vector<K>>& cols) {
    MatT m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
    return m;
  }

  std::vector<K> apply(const std::vector<K>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("MatT: dimension mismatch in apply");
    std::vector<K> r(rows_, K(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!((*this)(i, j) == K(0))) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  /// In-place Gauss-Jordan; returns pivot column indices.
  std::vector<std::size_t> reduce_to_rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t p = row;
      while (p < rows_ && (*this)(p, col) == K(0)) ++p;
      if (p == rows_) continue;
      swap_rows(p, row);
      K inv = K(1) / (*this)(row, col);
      for (std::size_t j = col; j < cols_; ++j) (*this)(row, j) = (*this)(row, j) * inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == row) continue;
        K f = (*this)(i, col);
        if (f == K(0)) continue;
        for (std::size_t j = col; j < cols_; ++j)
          (*this)(i, j) = (*this)(i, j) - f * (*this)(row, j);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  std::size_t rank() const {
    MatT copy = *this;
    return copy.reduce_to_rref().size();
  }

  /// Basis of the right kernel, as columns.
  MatT kernel() const {
    MatT r = *this;
    std::vector<std::size_t> pivots = r.reduce_to_rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<K> v(cols_, K(0));
      v[free] = K(1);
      for (std::size_t prow = 0; prow < pivots.size(); ++prow) v[pivots[prow]] = -r(prow, free);
      basis.push_back(std::move(v));
    }
    return MatT::from_columns(cols_, basis);
  }

  /// One solution of A x = b, or nullopt if inconsistent.
  std::optional<std::vector<K>> solve(const std::vector<K>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("MatT: dimension mismatch in solve");
    MatT aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_) = b[i];
    }
    std::vector<std::size_t> pivots = aug.reduce_to_rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<K> x(cols_, K(0));
    for (std::size_t prow = 0; prow < pivots.size(); ++prow) x[pivots[prow]] = aug(prow, cols_);
    return x;
  }

  std::optional<MatT> inverse() const {
    if (rows_ != cols_) return std::nullopt;
    MatT aug(rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = K(1);
    }
    if (aug.reduce_to_rref().size() != rows_) return std::nullopt;
    MatT inv(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

  K determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("MatT: determinant of non-square matrix");
    MatT a = *this;
    K det = K(1);
    for (std::size_t col = 0; col < cols_; ++col) {
      std::size_t p = col;
      while (p < rows_ && a(p, col) == K(0)) ++p;
      if (p == rows_) return K(0);
      if (p != col) {
        a.swap_rows(p, col);
        det = -det;
      }
      det = det * a(col, col);
      K inv = K(1) / a(col, col);
      for (std::size_t i = col + 1; i < rows_; ++i) {
        K f = a(i, col) * inv;
        if (f == K(0)) continue;
        for (std::size_t j = col; j < cols_; ++j) a(i, j) = a(i, j) - f * a(col, j);
      }
    }
    return det;
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("MatT: index out of range");
  }
  void require_same_shape(const MatT& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("MatT: shape mismatch");
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  std::size_t rows_, cols_;
  std::vector<K> data_;
};

using Matrix = MatT<Rational>;
using Vector = std::vector<Rational>;

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);
bool is_zero_vector(const Vector& v);

}  // namespace triplekit

#endif
