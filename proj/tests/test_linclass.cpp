#include <gtest/gtest.h>

#include "critloc/classify.hpp"
#include "critloc/critical.hpp"
#include "critloc/poly_algebra.hpp"
#include "critloc/template_fit.hpp"

using namespace critloc;

namespace {

LinearForm L(int i) { return LinearForm::variable(i - 1); }
Polynomial P(const char* s) { return Polynomial::parse(s); }

bool annihilates(const std::vector<Polynomial>& d, const LinFormMatrix& m) {
  PolyMatrix pm = to_poly(m);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Polynomial s;
    for (std::size_t i = 0; i < m.rows(); ++i) s += d[i] * pm(i, c);
    if (!s.is_zero()) return false;
  }
  return true;
}

LinFormMatrix random_matrix_forms(Rng& rng, std::size_t r, std::size_t c) {
  LinFormMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_linear_form(rng);
  return m;
}

LinFormMatrix s1_instance(const QMatrix& x1) {
  FamilyParams p;
  p.ell = {L(1), L(2), L(3), L(4)};
  p.X = to_poly(x1);
  return build_family(Family::S1X1, p);
}

Polynomial s1_locus(const QMatrix& x1) { return gcd_many(maximal_minors_signed(s1_instance(x1))); }

}  // namespace

TEST(MaximalMinors, Koszul2x1) {
  LinFormMatrix m(2, 1);
  m(0, 0) = L(1);
  m(1, 0) = L(2);
  auto d = maximal_minors_signed(m);
  EXPECT_EQ(d[0], P("x2"));
  EXPECT_EQ(d[1], P("-x1"));
  EXPECT_TRUE(annihilates(d, m));
}

TEST(MaximalMinors, RandomMatricesAreAnnihilated) {
  Rng rng = make_rng(21);
  for (int t = 0; t < 10; ++t) {
    auto m43 = random_matrix_forms(rng, 4, 3);
    EXPECT_TRUE(annihilates(maximal_minors_signed(m43), m43));
    auto m32 = random_matrix_forms(rng, 3, 2);
    EXPECT_TRUE(annihilates(maximal_minors_signed(m32), m32));
  }
}

TEST(MaximalMinors, FamilyBShareN13) {
  Rng rng = make_rng(22);
  FamilyParams p = random_family_params(Family::B, rng);
  auto n = build_family(Family::B, p);
  Polynomial n13 = p.forms[0].to_polynomial();
  for (const auto& d : maximal_minors_signed(n)) EXPECT_TRUE(divides(n13, d));
  EXPECT_EQ(gcd_many(maximal_minors_signed(n)), n13.normalized());
}

TEST(SkewSyzygy, SkewAndAnnihilating) {
  Rng rng = make_rng(23);
  for (std::size_t n : {1u, 2u}) {
    for (int t = 0; t < 5; ++t) {
      auto m = random_matrix_forms(rng, n + 2, n);
      PolyMatrix d = skew_syzygy_matrix(m);
      PolyMatrix pm = to_poly(m);
      for (std::size_t i = 0; i < n + 2; ++i) {
        for (std::size_t j = 0; j < n + 2; ++j) {
          EXPECT_EQ(d(i, j), -d(j, i));
          if (i != j) EXPECT_EQ(d(i, j).homogeneous_degree(), static_cast<int>(n));
        }
      }
      auto prod = multiply(d, pm);
      for (const auto& e : prod.data()) EXPECT_TRUE(e.is_zero());
    }
  }
}

TEST(SkewSyzygy, RepeatedColumnViolatesHypothesis) {
  LinFormMatrix m(4, 2);
  Rng rng = make_rng(24);
  for (std::size_t i = 0; i < 4; ++i) {
    m(i, 0) = random_linear_form(rng);
    m(i, 1) = m(i, 0) * Rational(3);
  }
  try {
    skew_syzygy_matrix(m);
    FAIL() << "expected HypothesisViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
  }
}

TEST(Reduce2x2, AlreadyDependent) {
  LinFormMatrix a(2, 2);
  a(0, 0) = L(1);
  a(1, 0) = L(2);
  a(1, 1) = L(1);
  auto r = reduce_2x2(a);
  EXPECT_LE(span_dimension(r.reduced.col(1)), 1u);
  EXPECT_NE(determinant(r.column_op), 0);
}

TEST(Reduce2x2, SplitDeterminant) {
  // A = R0 * [[x1, 0], [f, x2]] * C0 has det proportional to x1*x2.
  Rng rng = make_rng(25);
  for (int t = 0; t < 10; ++t) {
    LinFormMatrix base(2, 2);
    base(0, 0) = L(1);
    base(1, 0) = random_linear_form(rng);
    base(1, 1) = L(2);
    auto a = transform(random_invertible(rng, 2), base, random_invertible(rng, 2));
    auto r = reduce_2x2(a);
    EXPECT_LE(span_dimension(r.reduced.col(1)), 1u);
    EXPECT_EQ(multiply(a, r.column_op), r.reduced);
    EXPECT_EQ((r.u * r.v).normalized(), determinant(to_poly(a)).normalized());
  }
}

TEST(Reduce2x2, IrreducibleDeterminant) {
  LinFormMatrix a(2, 2);
  a(0, 0) = L(1);
  a(0, 1) = L(2);
  a(1, 0) = L(3);
  a(1, 1) = L(4);
  try {
    reduce_2x2(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotReducible);
  }
  LinFormMatrix b(2, 2);  // det = x1^2 - 2 x2^2
  b(0, 0) = L(1);
  b(0, 1) = L(2) * Rational(2);
  b(1, 0) = L(2);
  b(1, 1) = L(1);
  try {
    reduce_2x2(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotReducibleOverQ);
  }
}

TEST(Classify3x2, LeftTemplate) {
  LinFormMatrix n(3, 2);
  n(0, 1) = L(2);
  n(1, 1) = L(3);
  n(2, 0) = L(1);
  n(2, 1) = L(4);
  auto c = classify_3x2(n);
  EXPECT_EQ(c.family, Family::Left3x2);
  EXPECT_EQ(c.common_factor, P("x1"));
  std::string why;
  EXPECT_TRUE(certificate_valid(n, c, &why)) << why;
}

TEST(Classify3x2, RightTemplate) {
  LinFormMatrix n(3, 2);
  n(0, 1) = L(1);
  n(1, 0) = L(1);
  n(2, 0) = L(2);
  n(2, 1) = L(3);
  auto c = classify_3x2(n);
  EXPECT_EQ(c.family, Family::Right3x2);
  EXPECT_EQ(c.factor_degree, 1);
  std::string why;
  EXPECT_TRUE(certificate_valid(n, c, &why)) << why;
}

TEST(Classify3x2, ScrambledAndGeneric) {
  Rng rng = make_rng(26);
  for (Family f : {Family::Left3x2, Family::Right3x2}) {
    for (int t = 0; t < 10; ++t) {
      auto base = build_family(f, random_family_params(f, rng));
      auto n = transform(random_invertible(rng, 3), base, random_invertible(rng, 2));
      auto c = classify_3x2(n);
      EXPECT_EQ(c.family, f);
      std::string why;
      EXPECT_TRUE(certificate_valid(n, c, &why)) << why;
    }
  }
  for (int t = 0; t < 10; ++t) EXPECT_EQ(classify_3x2(random_matrix_forms(rng, 3, 2)).family, Family::NonDegenerate);
}

TEST(BuildFamily, CWithBetaZeroSharesN31) {
  Rng rng = make_rng(27);
  FamilyParams p = random_family_params(Family::C, rng);
  p.alpha = 1;
  p.beta = 0;
  auto n = build_family(Family::C, p);
  Polynomial n31 = p.forms[0].to_polynomial();
  for (const auto& d : maximal_minors_signed(n)) EXPECT_TRUE(divides(n31, d));
  p.alpha = 0;
  EXPECT_THROW(build_family(Family::C, p), Error);
}

TEST(BuildFamily, AThirdColumnFactor) {
  Rng rng = make_rng(28);
  FamilyParams p = random_family_params(Family::A, rng);
  auto n = build_family(Family::A, p);
  EXPECT_TRUE(n(0, 2).is_zero() && n(1, 2).is_zero() && n(2, 2).is_zero());
  for (const auto& d : maximal_minors_signed(n)) EXPECT_TRUE(divides(n(3, 2).to_polynomial(), d));
}

// The stated X1 gives the cone with x2 -> -x2; flipping the sign of entry
// (0, 1) gives the cone through the fixture centers.
TEST(BuildFamily, ConeFixtureMatrix) {
  EXPECT_EQ(s1_locus(cone_x1_stated()), P("x1^2+2*x1*x2+3*x3*x1+x1*x4+6*x3*x2").normalized());
  EXPECT_EQ(s1_locus(cone_x1_realized()), cone_equation().normalized());
  EXPECT_EQ(cone_equation().normalized(), P("x1^2-2*x1*x2+3*x3*x1+x1*x4-6*x3*x2").normalized());
}

TEST(FamilyRealizable, OnlyCIsExcluded) {
  EXPECT_FALSE(family_realizable(Family::C));
  for (Family f : {Family::A, Family::B, Family::D, Family::S1X1, Family::S2X2, Family::S3X3})
    EXPECT_TRUE(family_realizable(f));
}

class RoundTrip : public ::testing::TestWithParam<Family> {};

TEST_P(RoundTrip, ScrambledInstancesClassifyBack) {
  Family f = GetParam();
  Rng rng = make_rng(100 + static_cast<int>(f));
  for (int t = 0; t < 8; ++t) {
    auto base = random_family_instance(f, rng);
    auto n = transform(random_invertible(rng, 4), base, random_invertible(rng, 3));
    auto c = classify_4x3(n);
    ASSERT_EQ(c.family, f) << "trial " << t << ": " << c.note;
    EXPECT_EQ(c.factor_degree, expected_factor_degree(f));
    std::string why;
    EXPECT_TRUE(certificate_valid(n, c, &why)) << why;
  }
}

INSTANTIATE_TEST_SUITE_P(Families, RoundTrip,
                         ::testing::Values(Family::A, Family::B, Family::C, Family::D, Family::S1X1, Family::S2X2,
                                           Family::S3X3),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Classify4x3, GenericIsNonDegenerate) {
  Rng rng = make_rng(29);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(classify_4x3(random_generic_4x3(rng)).family, Family::NonDegenerate);
}

TEST(Classify4x3, SFamiliesSpanDimension) {
  Rng rng = make_rng(30);
  for (auto [f, want] : {std::pair{Family::S1X1, 4u}, {Family::S2X2, 3u}, {Family::S3X3, 2u}}) {
    auto c = classify_4x3(random_family_instance(f, rng));
    ASSERT_EQ(c.family, f);
    EXPECT_EQ(span_dimension(c.ell), want);
  }
}

TEST(Classify4x3, ZeroMatrixIsFlagged) {
  auto c = classify_4x3(LinFormMatrix(4, 3));
  EXPECT_EQ(c.family, Family::Unresolved);
  EXPECT_EQ(c.flag, ClassFlag::RankDeficient);
}

TEST(Equivalence, RecoversScramblingOperations) {
  Rng rng = make_rng(60);
  for (Family f : {Family::A, Family::D, Family::S1X1, Family::S3X3}) {
    auto base = random_family_instance(f, rng);
    auto n = transform(random_invertible(rng, 4), base, random_invertible(rng, 3));
    auto eq = find_equivalence(n, base, rng);
    ASSERT_TRUE(eq.has_value()) << to_string(f);
    EXPECT_TRUE(transform(eq->R, n, QMatrix::identity(3)) == transform(QMatrix::identity(4), base, eq->C));
  }
}

TEST(Equivalence, GenericIsNotEquivalentToAFamily) {
  Rng rng = make_rng(61);
  EXPECT_FALSE(find_equivalence(random_generic_4x3(rng), random_family_instance(Family::A, rng), rng).has_value());
}

TEST(Equivalence, ConeFixtureMatchesTheRealizedX1Only) {
  Rng rng = make_rng(62);
  LinFormMatrix n = reduce_to_N(fixture(FixtureCase::ConeIV)).N;
  EXPECT_TRUE(find_equivalence(n, s1_instance(cone_x1_realized()), rng).has_value());
  EXPECT_FALSE(find_equivalence(n, s1_instance(cone_x1_stated()), rng).has_value());
}
