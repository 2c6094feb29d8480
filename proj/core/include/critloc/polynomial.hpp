#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/rational.hpp"

namespace critloc {

inline constexpr int kNumVars = 5;

using Exponent = std::array<std::uint8_t, kNumVars>;

int total_degree(const Exponent& e);

// Graded lex, x1 > x2 > ... > x5. Used as a "greater" comparator so that
// iteration starts at the leading term.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class LinearForm;

class Polynomial {
 public:
  using Terms = std::map<Exponent, Rational, GrlexGreater>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT

  static Polynomial variable(int index);  // 0-based: variable(0) is x1
  static Polynomial monomial(const Exponent& e, const Rational& c);

  const Terms& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  // -1 for the zero polynomial.
  int total_degree() const;
  // Degree if every term has the same total degree; zero maps to 0.
  std::optional<int> homogeneous_degree() const;
  int degree_in(int var) const;
  bool contains_variable(int var) const { return degree_in(var) > 0; }

  const Exponent& leading_exponent() const;
  const Rational& leading_coefficient() const;
  Rational coefficient(const Exponent& e) const;

  // Coefficients of f as a polynomial in `var`; index = power of var.
  std::vector<Polynomial> coefficients_in(int var) const;

  // Scales so the leading coefficient is 1; zero stays zero.
  Polynomial normalized() const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  // Substitutes x_i -> images[i] for every variable.
  Polynomial compose(const std::array<Polynomial, kNumVars>& images) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  // Canonical text: "c*x1^a1*...*x5^a5" terms joined by " + " in grlex order,
  // zero exponents omitted, coefficient omitted when it is 1.
  std::string to_string() const;
  static Polynomial parse(std::string_view text);

 private:
  void add_term(const Exponent& e, const Rational& c);

  Terms terms_;
};

class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(const std::array<Rational, kNumVars>& coeffs) : coeffs_(coeffs) {}
  LinearForm(std::initializer_list<Rational> coeffs);

  static LinearForm variable(int index);
  // Throws InvalidParams unless p is homogeneous of degree 1 or zero.
  static LinearForm from_polynomial(const Polynomial& p);

  const Rational& operator[](int i) const { return coeffs_[i]; }
  Rational& operator[](int i) { return coeffs_[i]; }
  const std::array<Rational, kNumVars>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  Polynomial to_polynomial() const;
  QVector to_vector() const { return QVector(coeffs_.begin(), coeffs_.end()); }

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(const Rational& c);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& c) { return a *= c; }
  friend LinearForm operator*(const Rational& c, LinearForm a) { return a *= c; }
  friend LinearForm operator-(LinearForm a) { return a *= Rational(-1); }
  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const { return to_polynomial().to_string(); }

 private:
  std::array<Rational, kNumVars> coeffs_{};
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const LinearForm& f) { return os << f.to_string(); }

}  // namespace critloc
