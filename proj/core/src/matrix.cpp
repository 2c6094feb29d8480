#include "critloc/matrix.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>

namespace critloc {

RowEchelon rref(QMatrix m) {
  RowEchelon out;
  std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(p, k), m(r, k));
    }
    Rational inv = 1 / m(r, c);
    for (std::size_t k = c; k < cols; ++k) m(r, k) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t k = c; k < cols; ++k) m(i, k) -= f * m(r, k);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidParams, "determinant of non-square matrix");
  QMatrix a = m;
  std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a(i, c)) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(i, k) -= f * a(c, k);
    }
  }
  return det;
}

std::vector<QVector> kernel_basis(const QMatrix& m) {
  RowEchelon e = rref(m);
  std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<QVector> left_kernel_basis(const QMatrix& m) { return kernel_basis(m.transpose()); }

std::optional<QVector> linear_solve(const QMatrix& a, const QVector& b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::InvalidParams, "rhs size mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RowEchelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  QVector x(a.cols(), Rational(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, a.cols());
  return x;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorCode::InvalidParams, "inverse of non-square matrix");
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

QMatrix complete_basis(const std::vector<QVector>& given, std::size_t n) {
  QMatrix out(n, n);
  std::size_t k = given.size();
  for (std::size_t j = 0; j < k; ++j) out.set_col(j, given[j]);
  std::size_t filled = k;
  for (std::size_t unit = 0; unit < n && filled < n; ++unit) {
    QMatrix trial = out;
    QVector e(n, Rational(0));
    e[unit] = 1;
    trial.set_col(filled, e);
    QMatrix leading(n, filled + 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= filled; ++j) leading(i, j) = trial(i, j);
    if (rank(leading) == filled + 1) {
      out = std::move(trial);
      ++filled;
    }
  }
  if (filled != n) throw Error(ErrorCode::InvalidParams, "vectors are not independent");
  return out;
}

QVector mat_vec(const QMatrix& m, const QVector& v) {
  QVector out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const DMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace

double determinant(const DMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidParams, "determinant of non-square matrix");
  if (m.rows() == 0) return 1.0;
  return to_eigen(m).partialPivLu().determinant();
}

std::vector<double> singular_values(const DMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::size_t numerical_rank(const DMatrix& m, double relative_tol) {
  auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double v : s) {
    if (v > relative_tol * s.front()) ++r;
  }
  return r;
}

DMatrix to_double(const QMatrix& m) {
  DMatrix d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

Polynomial determinant(const PolyMatrix& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorCode::InvalidParams, "determinant of non-square matrix");
  if (n == 0) return Polynomial(1);
  if (n > 16) throw Error(ErrorCode::InvalidParams, "polynomial determinant too large");
  // partial[mask]: signed sum over assignments of the first popcount(mask)
  // rows to the columns in mask.
  std::vector<Polynomial> partial(std::size_t(1) << n);
  partial[0] = Polynomial(1);
  for (std::size_t mask = 0; mask < partial.size(); ++mask) {
    if (partial[mask].is_zero()) continue;
    std::size_t row = std::popcount(mask);
    if (row == n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (std::size_t(1) << c)) continue;
      const Polynomial& entry = m(row, c);
      if (entry.is_zero()) continue;
      int above = std::popcount(mask >> (c + 1));
      Polynomial term = partial[mask] * entry;
      if (above % 2) partial[mask | (std::size_t(1) << c)] -= term;
      else partial[mask | (std::size_t(1) << c)] += term;
    }
  }
  return partial.back();
}

PolyMatrix to_poly(const QMatrix& m) {
  PolyMatrix p(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) p(i, j) = Polynomial(m(i, j));
  return p;
}

PolyMatrix to_poly(const Matrix<LinearForm>& m) {
  PolyMatrix p(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) p(i, j) = m(i, j).to_polynomial();
  return p;
}

}  // namespace critloc
