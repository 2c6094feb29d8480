#pragma once

#include <vector>

#include "critloc/matrix.hpp"
#include "critloc/polynomial.hpp"

namespace critloc {

inline constexpr int kMaxGcdDegree = 3;

// Monic gcd under grlex; gcd(0, 0) = 0. Inputs must have total degree <= 3.
Polynomial gcd(const Polynomial& f, const Polynomial& g);
Polynomial gcd_many(const std::vector<Polynomial>& polys);

// Same algorithm without the degree guard; used internally on inputs whose
// degree is known to be small.
Polynomial gcd_unchecked(const Polynomial& f, const Polynomial& g);
Polynomial gcd_many_unchecked(const std::vector<Polynomial>& polys);

// h with f = g*h; throws NotDivisible otherwise.
Polynomial divide_exact(const Polynomial& f, const Polynomial& g);
bool divides(const Polynomial& g, const Polynomial& f);

// Pseudo-remainder of a by b with respect to `var`.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int var);

std::size_t span_dimension(const std::vector<LinearForm>& forms);
QMatrix coefficient_matrix(const std::vector<LinearForm>& forms);  // one row per form

// Rational roots of a binary form in the first two variables (x1 = s, x2 = t).
// `complete` is false when some roots could not be expressed over Q.
struct BinaryRoots {
  bool identically_zero = false;
  bool complete = true;
  std::vector<QVector> roots;  // each (s, t), distinct projective points
  int degree = 0;
};
BinaryRoots binary_form_roots(const Polynomial& f);

// Restriction of a homogeneous polynomial to the line a + t*b, as
// coefficients c0 + c1 t + ... (index = power of t).
std::vector<Rational> restrict_to_line(const Polynomial& f, const QVector& a, const QVector& b);

// 5x5 symmetric matrix S with f(x) = x^T S x for a quadratic form f.
QMatrix quadric_matrix(const Polynomial& f);

}  // namespace critloc
