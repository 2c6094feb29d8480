#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/linform_matrix.hpp"
#include "critloc/random.hpp"
#include "critloc/template_fit.hpp"

namespace critloc {

enum class Family {
  A,
  B,
  C,
  D,
  S1X1,
  S2X2,
  S3X3,
  NonDegenerate,
  Left3x2,   // 3x2 with a single nonzero entry in the first column
  Right3x2,  // 3x2 with the repeated anti-diagonal form
  Unresolved,
};

enum class ClassFlag {
  None,
  Specialized,    // degree tests passed but no template could be fitted
  RankDeficient,  // minors vanish identically or the S3 block is singular
};

std::string_view to_string(Family f);
std::string_view to_string(ClassFlag f);
std::optional<Family> family_from_string(std::string_view s);

struct Canonicalization {
  Family family = Family::Unresolved;
  ClassFlag flag = ClassFlag::None;
  QMatrix R;
  QMatrix C;
  LinFormMatrix canonical;  // R * N * C
  Polynomial common_factor;
  int factor_degree = 0;
  std::string note;

  // Family C.
  Rational alpha = 0, beta = 0;
  // S families: canonical = S_i(ell, z) * X.
  std::vector<LinearForm> ell;  // ell_1..ell_4
  std::vector<Rational> z;      // S2: z2, z3, z4; S3: z31, z32, z41, z42
  PolyMatrix X;                 // constants and linear forms
};

// Template for families A..D (C needs alpha, beta) and the two 3x2 shapes.
FormTemplate family_template(Family f, const Rational& alpha = 1, const Rational& beta = 1);

struct FamilyParams {
  std::vector<LinearForm> forms;  // template symbols, in template order (A..D)
  Rational alpha = 1, beta = 1;   // family C
  std::vector<LinearForm> ell;    // S1: ell1..ell4; S2: ell2..ell4; S3: ell3, ell4
  std::vector<Rational> z;        // S2: z2, z3, z4; S3: z31, z32, z41, z42
  PolyMatrix X;                   // S1: 6x3 constants; S2: 4x3; S3: 3x3
};

// S-family matrices; `ell` holds ell1..ell4 (unused ones may be zero).
PolyMatrix s1_matrix(const std::vector<LinearForm>& ell);
PolyMatrix s2_matrix(const std::vector<LinearForm>& ell, const std::vector<Rational>& z);
PolyMatrix s3_matrix(const std::vector<LinearForm>& ell, const std::vector<Rational>& z);

LinFormMatrix build_family(Family f, const FamilyParams& params);
FamilyParams random_family_params(Family f, Rng& rng);
// Draws until build_family succeeds with the expected common-factor degree.
LinFormMatrix random_family_instance(Family f, Rng& rng, int* draws = nullptr);
LinFormMatrix random_generic_4x3(Rng& rng);

bool family_realizable(Family f);
int expected_factor_degree(Family f);

Canonicalization classify_3x2(const LinFormMatrix& n);
Canonicalization classify_4x3(const LinFormMatrix& n);

// Checks R, C invertible, canonical = R*N*C, template match and common factor.
bool certificate_valid(const LinFormMatrix& n, const Canonicalization& c, std::string* why = nullptr);

}  // namespace critloc
