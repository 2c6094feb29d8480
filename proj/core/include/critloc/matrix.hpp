#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "critloc/error.hpp"
#include "critloc/polynomial.hpp"
#include "critloc/rational.hpp"

namespace critloc {

// Row-major dense matrix. T is Rational, double, Polynomial or LinearForm.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorCode::InvalidParams, "ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return out;
  }
  void set_row(std::size_t r, const std::vector<T>& v) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = v[c];
  }
  void set_col(std::size_t c, const std::vector<T>& v) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Matrix s(rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) s(i, j) = (*this)(rs[i], cs[j]);
    return s;
  }

  Matrix without_row(std::size_t skip) const {
    std::vector<std::size_t> rs, cs;
    for (std::size_t r = 0; r < rows_; ++r)
      if (r != skip) rs.push_back(r);
    for (std::size_t c = 0; c < cols_; ++c) cs.push_back(c);
    return submatrix(rs, cs);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class A, class B>
auto multiply(const Matrix<A>& a, const Matrix<B>& b) {
  using R = decltype(std::declval<A>() * std::declval<B>());
  using Out = std::conditional_t<std::is_same_v<A, double> || std::is_same_v<B, double>, double,
                                 std::conditional_t<std::is_same_v<R, Polynomial>, Polynomial,
                                                    std::conditional_t<std::is_same_v<A, LinearForm> ||
                                                                           std::is_same_v<B, LinearForm>,
                                                                       LinearForm, Rational>>>;
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidParams, "matrix shape mismatch");
  Matrix<Out> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Out s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  return multiply(a, b);
}

using QMatrix = Matrix<Rational>;
using DMatrix = Matrix<double>;
using PolyMatrix = Matrix<Polynomial>;

// Exact linear algebra over Q.
struct RowEchelon {
  QMatrix reduced;
  std::vector<std::size_t> pivots;
};

RowEchelon rref(QMatrix m);
std::size_t rank(const QMatrix& m);
Rational determinant(const QMatrix& m);
std::vector<QVector> kernel_basis(const QMatrix& m);
std::vector<QVector> left_kernel_basis(const QMatrix& m);
std::optional<QVector> linear_solve(const QMatrix& a, const QVector& b);
std::optional<QMatrix> inverse(const QMatrix& m);
// n×n invertible matrix whose first columns are `given` (which must be independent).
QMatrix complete_basis(const std::vector<QVector>& given, std::size_t n);
QVector mat_vec(const QMatrix& m, const QVector& v);

// Floating counterparts.
double determinant(const DMatrix& m);
std::size_t numerical_rank(const DMatrix& m, double relative_tol = 1e-8);
std::vector<double> singular_values(const DMatrix& m);
DMatrix to_double(const QMatrix& m);

// Cofactor expansion over column subsets; exact for polynomial entries.
Polynomial determinant(const PolyMatrix& m);
PolyMatrix to_poly(const QMatrix& m);
PolyMatrix to_poly(const Matrix<LinearForm>& m);

}  // namespace critloc
