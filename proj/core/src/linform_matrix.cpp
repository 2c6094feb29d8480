#include "critloc/linform_matrix.hpp"

#include <Eigen/Dense>

#include "critloc/poly_algebra.hpp"

namespace critloc {

LinFormMatrix make_linform_matrix(std::size_t rows, std::size_t cols) { return LinFormMatrix(rows, cols); }

LinFormMatrix transform(const QMatrix& r, const LinFormMatrix& n, const QMatrix& c) {
  return multiply(multiply(r, n), c);
}

LinFormMatrix from_polynomials(const PolyMatrix& m) {
  LinFormMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = LinearForm::from_polynomial(m(i, j));
  return out;
}

QMatrix evaluate(const LinFormMatrix& n, const QVector& point) {
  QMatrix out(n.rows(), n.cols());
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) out(i, j) = n(i, j).evaluate(point);
  return out;
}

DMatrix evaluate(const LinFormMatrix& n, const std::vector<double>& point) {
  DMatrix out(n.rows(), n.cols());
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) out(i, j) = n(i, j).evaluate(std::span<const double>(point));
  return out;
}

LinearForm reduce_mod(const LinearForm& f, const LinearForm& ell) {
  int pivot = -1;
  for (int i = 0; i < kNumVars; ++i) {
    if (sgn(ell[i]) != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) throw Error(ErrorCode::InvalidParams, "reduction modulo the zero form");
  if (sgn(f[pivot]) == 0) return f;
  return f - ell * (f[pivot] / ell[pivot]);
}

std::vector<Polynomial> maximal_minors_signed(const PolyMatrix& m) {
  if (m.rows() != m.cols() + 1) throw Error(ErrorCode::InvalidParams, "need one more row than columns");
  std::vector<Polynomial> d;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Polynomial det = determinant(m.without_row(i));
    d.push_back(i % 2 ? -det : det);
  }
  return d;
}

std::vector<Polynomial> maximal_minors_signed(const LinFormMatrix& m) { return maximal_minors_signed(to_poly(m)); }

PolyMatrix skew_syzygy_matrix(const LinFormMatrix& m) {
  std::size_t n = m.cols();
  if (m.rows() != n + 2 || n == 0 || n > 2) {
    throw Error(ErrorCode::InvalidParams, "skew syzygy matrix needs an (n+2) x n matrix with n <= 2");
  }
  PolyMatrix pm = to_poly(m);
  for (std::size_t skip = 0; skip < m.rows(); ++skip) {
    auto minors = maximal_minors_signed(pm.without_row(skip));
    Polynomial g = gcd_many_unchecked(minors);
    if (g.is_zero() || !g.is_constant()) {
      throw Error(ErrorCode::HypothesisViolated,
                  "submatrix without row " + std::to_string(skip + 1) + " drops rank in codimension 1");
    }
  }
  PolyMatrix d(n + 2, n + 2);
  for (std::size_t i = 0; i < n + 2; ++i) {
    for (std::size_t j = i + 1; j < n + 2; ++j) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t r = 0; r < n + 2; ++r)
        if (r != i && r != j) rows.push_back(r);
      for (std::size_t c = 0; c < n; ++c) cols.push_back(c);
      Polynomial det = determinant(pm.submatrix(rows, cols));
      if ((i + j) % 2) det = -det;
      d(i, j) = det;
      d(j, i) = -det;
    }
  }
  return d;
}

namespace {

// Pencil entry s*a + t*b as a polynomial in x1 = s, x2 = t.
Polynomial pencil_entry(const Rational& a, const Rational& b) {
  return a * Polynomial::variable(0) + b * Polynomial::variable(1);
}

void minors_of_size(const PolyMatrix& m, std::size_t k, std::vector<Polynomial>& out) {
  std::vector<std::size_t> rows(k), cols(k);
  std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
  std::fill(rsel.begin(), rsel.begin() + k, true);
  do {
    rows.clear();
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (rsel[i]) rows.push_back(i);
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + k, true);
    do {
      cols.clear();
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (csel[j]) cols.push_back(j);
      out.push_back(determinant(m.submatrix(rows, cols)));
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
}

}  // namespace

PencilDirections pencil_low_span(const std::vector<LinearForm>& u, const std::vector<LinearForm>& v,
                                 std::size_t max_span) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidParams, "pencil columns differ in length");
  PencilDirections out;
  std::size_t k = max_span + 1;
  if (k > u.size() || k > static_cast<std::size_t>(kNumVars)) {
    out.all = true;
    return out;
  }
  PolyMatrix p(u.size(), kNumVars);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int j = 0; j < kNumVars; ++j) p(i, j) = pencil_entry(u[i][j], v[i][j]);
  std::vector<Polynomial> minors;
  minors_of_size(p, k, minors);
  Polynomial g = gcd_many_unchecked(minors);
  if (g.is_zero()) {
    out.all = true;
    return out;
  }
  if (g.is_constant()) return out;
  BinaryRoots roots = binary_form_roots(g);
  out.complete = roots.complete;
  out.directions = roots.roots;
  return out;
}

Polynomial column_span_locus(const LinFormMatrix& n, std::size_t max_span) {
  if (n.cols() > static_cast<std::size_t>(kNumVars)) throw Error(ErrorCode::InvalidParams, "too many columns");
  std::size_t k = max_span + 1;
  if (k > n.rows() || k > static_cast<std::size_t>(kNumVars)) return Polynomial();
  PolyMatrix p(n.rows(), kNumVars);
  for (std::size_t i = 0; i < n.rows(); ++i) {
    for (int m = 0; m < kNumVars; ++m) {
      Polynomial e;
      for (std::size_t j = 0; j < n.cols(); ++j) e += Polynomial::variable(static_cast<int>(j)) * n(i, j)[m];
      p(i, m) = e;
    }
  }
  std::vector<Polynomial> minors;
  minors_of_size(p, k, minors);
  return gcd_many_unchecked(minors);
}

std::optional<std::pair<LinearForm, LinearForm>> split_quadric(const Polynomial& q) {
  QMatrix s = quadric_matrix(q);
  RowEchelon e = rref(s);
  std::size_t r = e.pivots.size();
  if (r == 0 || r > 2) return std::nullopt;
  if (r == 1) {
    for (int k = 0; k < kNumVars; ++k) {
      if (sgn(s(k, k)) == 0) continue;
      LinearForm l;
      for (int j = 0; j < kNumVars; ++j) l[j] = s(k, j);
      return std::make_pair(l * (1 / s(k, k)), l);
    }
    return std::nullopt;
  }
  LinearForm u, v;
  for (int j = 0; j < kNumVars; ++j) {
    u[j] = e.reduced(0, j);
    v[j] = e.reduced(1, j);
  }
  // q = a u^2 + b u v + c v^2, solved by comparing coefficients.
  Polynomial pu = u.to_polynomial(), pv = v.to_polynomial();
  std::vector<Polynomial> basis = {pu * pu, pu * pv, pv * pv};
  std::vector<Exponent> monos;
  for (const auto& b : basis)
    for (const auto& [ex, c] : b.terms()) monos.push_back(ex);
  for (const auto& [ex, c] : q.terms()) monos.push_back(ex);
  std::sort(monos.begin(), monos.end());
  monos.erase(std::unique(monos.begin(), monos.end()), monos.end());
  QMatrix a(monos.size(), 3);
  QVector rhs(monos.size());
  for (std::size_t i = 0; i < monos.size(); ++i) {
    for (int j = 0; j < 3; ++j) a(i, j) = basis[j].coefficient(monos[i]);
    rhs[i] = q.coefficient(monos[i]);
  }
  auto sol = linear_solve(a, rhs);
  if (!sol) return std::nullopt;
  const Rational &qa = (*sol)[0], &qb = (*sol)[1], &qc = (*sol)[2];
  if (sgn(qa) == 0) return std::make_pair(v, u * qb + v * qc);
  Rational root;
  if (!rational_sqrt(qb * qb - 4 * qa * qc, root)) return std::nullopt;
  Rational r1 = (-qb + root) / (2 * qa), r2 = (-qb - root) / (2 * qa);
  return std::make_pair((u - v * r1) * qa, u - v * r2);
}

Reduce2x2Result reduce_2x2(const LinFormMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorCode::InvalidParams, "reduce_2x2 needs a 2x2 matrix");
  Polynomial det = determinant(to_poly(a));
  Reduce2x2Result out;
  if (det.is_zero()) {
    out.u = Polynomial();
    out.v = Polynomial();
  } else {
    QMatrix s = quadric_matrix(det);
    if (rank(s) > 2) throw Error(ErrorCode::NotReducible, "det " + det.to_string() + " is irreducible");
    auto factors = split_quadric(det);
    if (!factors) throw Error(ErrorCode::NotReducibleOverQ, "det " + det.to_string() + " splits only over an extension");
    out.u = factors->first.to_polynomial();
    out.v = factors->second.to_polynomial();
  }
  std::vector<LinearForm> c0 = {a(0, 0), a(1, 0)}, c1 = {a(0, 1), a(1, 1)};
  PencilDirections dirs = pencil_low_span(c0, c1, 1);
  QVector dir;
  if (dirs.all || span_dimension(c1) <= 1) {
    dir = {Rational(0), Rational(1)};
  } else if (!dirs.directions.empty()) {
    dir = dirs.directions.front();
  } else {
    throw Error(ErrorCode::NotReducible, "no column combination with dependent entries");
  }
  QVector other = sgn(dir[1]) != 0 ? QVector{Rational(1), Rational(0)} : QVector{Rational(0), Rational(1)};
  out.column_op = QMatrix(2, 2);
  out.column_op.set_col(0, other);
  out.column_op.set_col(1, dir);
  out.reduced = multiply(a, out.column_op);
  return out;
}

}  // namespace critloc
