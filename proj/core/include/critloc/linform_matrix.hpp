#pragma once

#include <optional>
#include <vector>

#include "critloc/matrix.hpp"
#include "critloc/polynomial.hpp"

namespace critloc {

using LinFormMatrix = Matrix<LinearForm>;

LinFormMatrix make_linform_matrix(std::size_t rows, std::size_t cols);
LinFormMatrix transform(const QMatrix& r, const LinFormMatrix& n, const QMatrix& c);  // R*N*C
LinFormMatrix from_polynomials(const PolyMatrix& m);  // entries must be linear

QMatrix evaluate(const LinFormMatrix& n, const QVector& point);
DMatrix evaluate(const LinFormMatrix& n, const std::vector<double>& point);

// Reduction modulo a nonzero linear form: eliminates the first variable with a
// nonzero coefficient in `ell`, so the result lives in the remaining four.
LinearForm reduce_mod(const LinearForm& f, const LinearForm& ell);

// D_i = (-1)^i det(M without row i), 0-based; D*M = 0.
std::vector<Polynomial> maximal_minors_signed(const LinFormMatrix& m);
std::vector<Polynomial> maximal_minors_signed(const PolyMatrix& m);

// D_ij = (-1)^(i+j) det(M without rows i, j) for i < j, skew; D*M = 0.
PolyMatrix skew_syzygy_matrix(const LinFormMatrix& m);

// Directions (s, t) of the column pencil s*u + t*v along which the entries
// span at most `max_span` dimensions.
struct PencilDirections {
  bool all = false;      // every direction qualifies
  bool complete = true;  // false if some qualifying directions are irrational
  std::vector<QVector> directions;
};
PencilDirections pencil_low_span(const std::vector<LinearForm>& u, const std::vector<LinearForm>& v,
                                 std::size_t max_span);

// Column vectors c (as x1..x_cols) for which the entries of N*c span at most
// max_span dimensions lie on the zero set of the returned gcd. Zero means all c.
Polynomial column_span_locus(const LinFormMatrix& n, std::size_t max_span);

struct Reduce2x2Result {
  QMatrix column_op;      // 2x2 invertible C
  LinFormMatrix reduced;  // A*C; its second column spans <= 1 dimension
  Polynomial u, v;        // linear factors of det(A)
};
// det(A) must split into two linear forms over Q.
Reduce2x2Result reduce_2x2(const LinFormMatrix& a);

// Product of two rational linear forms, if the quadratic form splits over Q.
std::optional<std::pair<LinearForm, LinearForm>> split_quadric(const Polynomial& q);

}  // namespace critloc
