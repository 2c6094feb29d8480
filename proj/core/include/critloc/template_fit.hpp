#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "critloc/linform_matrix.hpp"
#include "critloc/random.hpp"

namespace critloc {

// Linear system whose unknowns are scalars multiplied by linear forms. An
// equation "expr = 0" between forms contributes one scalar equation per
// variable x1..x5.
class FormSystem {
 public:
  struct Expr {
    LinearForm constant;
    std::map<int, LinearForm> terms;  // unknown index -> coefficient form

    Expr& add(const Expr& o, const Rational& scale = Rational(1));
  };

  int add_scalar();
  // Five scalars forming the coefficients of an unknown linear form; returns the first index.
  int add_form();
  int num_unknowns() const { return num_unknowns_; }

  // c * (unknown linear form starting at `base`).
  static Expr form(int base, const Rational& c = Rational(1));
  // f * (unknown scalar `index`).
  static Expr scalar(int index, const LinearForm& f);
  static Expr constant(const LinearForm& f);

  void require_zero(const Expr& e);

  // Any solution of the affine system, or nullopt.
  std::optional<QVector> solve() const;
  // Kernel of the homogeneous part.
  std::vector<QVector> homogeneous_kernel() const;

  static LinearForm read_form(const QVector& sol, int base);

 private:
  int num_unknowns_ = 0;
  std::vector<std::map<int, Rational>> rows_;
  std::vector<Rational> rhs_;
};

struct TemplateTerm {
  int symbol;
  Rational coeff;
};

// Pattern of a matrix of forms: each entry is a combination of symbols.
struct FormTemplate {
  std::string name;
  std::size_t rows = 0, cols = 0;
  std::vector<std::string> symbols;
  std::vector<std::vector<TemplateTerm>> entries;  // row-major
  int key_symbol = -1;                             // entry that carries the common factor

  const std::vector<TemplateTerm>& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

// Symbol values making `m` equal the template, if any.
std::optional<std::vector<LinearForm>> match_template(const LinFormMatrix& m, const FormTemplate& t);

// Searches an invertible R such that R*M matches t. `accept` can reject
// candidates (e.g. when the key symbol vanishes); draws are seeded by `rng`.
std::optional<QMatrix> fit_row_operation(const LinFormMatrix& m, const FormTemplate& t, Rng& rng,
                                         int attempts = 24);

struct Equivalence {
  QMatrix R, C;  // R * a = b * C
};
// Invertible constant R and C with R * a = b * C, if a random point of the
// solution space provides them. A nullopt after `attempts` draws means no
// equivalence exists with overwhelming probability.
std::optional<Equivalence> find_equivalence(const LinFormMatrix& a, const LinFormMatrix& b, Rng& rng,
                                            int attempts = 24);

}  // namespace critloc
