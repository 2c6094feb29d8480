#include <gtest/gtest.h>

#include "critloc/linform_matrix.hpp"
#include "critloc/poly_algebra.hpp"
#include "critloc/random.hpp"

using namespace critloc;

namespace {

Polynomial P(const char* s) { return Polynomial::parse(s); }
Polynomial x(int i) { return Polynomial::variable(i - 1); }

// Plain recursive cofactor expansion along row `row`.
Polynomial cofactor_det(const PolyMatrix& m, std::size_t row) {
  std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Polynomial sum;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < n; ++i)
      if (i != row) rs.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != c) cs.push_back(j);
    Polynomial minor = cofactor_det(m.submatrix(rs, cs), 0);
    Polynomial term = m(row, c) * minor;
    if ((row + c) % 2) sum -= term;
    else sum += term;
  }
  return sum;
}

Polynomial random_homogeneous(Rng& rng, int degree, int terms) {
  Polynomial p;
  std::uniform_int_distribution<int> var(0, kNumVars - 1);
  for (int t = 0; t < terms; ++t) {
    Exponent e{};
    for (int k = 0; k < degree; ++k) e[var(rng)]++;
    p += Polynomial::monomial(e, random_int(rng));
  }
  return p;
}

Polynomial random_linear(Rng& rng) { return random_linear_form(rng).to_polynomial(); }

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("10158/25"), Rational(10158, 25));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Polynomial, DifferenceOfSquares) {
  EXPECT_EQ((x(1) + x(2)) * (x(1) - x(2)), x(1) * x(1) - x(2) * x(2));
}

TEST(Polynomial, AdditiveIdentityAndMonomialProduct) {
  Polynomial f = P("3*x1^2 - x2*x5 + 7/2");
  EXPECT_EQ(f + Polynomial(), f);
  EXPECT_EQ(x(1) * (x(2) * x(3)), P("x1*x2*x3"));
  EXPECT_TRUE((f - f).is_zero());
}

TEST(Polynomial, TextRoundTrip) {
  Polynomial f = P("x1^2-2*x1*x2+3*x3*x1+x1*x4-6*x3*x2");
  EXPECT_EQ(f.to_string(), "x1^2 - 2*x1*x2 + 3*x1*x3 + x1*x4 - 6*x2*x3");
  EXPECT_EQ(P(f.to_string().c_str()), f);
  EXPECT_EQ(P("-1/2*x5^3").to_string(), "-1/2*x5^3");
  EXPECT_EQ(Polynomial().to_string(), "0");
  EXPECT_THROW(P("x6"), Error);
}

TEST(Polynomial, Evaluate) {
  QVector p1 = {1, 1, 0, 0, 0};
  EXPECT_EQ(P("x1^2 - x2").evaluate(p1), 0);
  QVector p2 = {2, 0, 0, 3, 0};
  EXPECT_EQ(P("x1*x4").evaluate(p2), 6);
  std::vector<double> pd = {2.0, 0, 0, 3.0, 0};
  EXPECT_DOUBLE_EQ(P("x1*x4").evaluate(std::span<const double>(pd)), 6.0);
}

TEST(Polynomial, HomogeneousDegree) {
  EXPECT_EQ(P("x1*x2 + x3^2").homogeneous_degree(), 2);
  EXPECT_FALSE(P("x1*x2 + x3").homogeneous_degree().has_value());
  EXPECT_EQ(Polynomial().total_degree(), -1);
}

TEST(Determinant, SmallCases) {
  PolyMatrix m{{x(1), x(2)}, {x(3), x(4)}};
  EXPECT_EQ(determinant(m), x(1) * x(4) - x(2) * x(3));
  EXPECT_EQ(determinant(to_poly(QMatrix::identity(4))), Polynomial(1));
  PolyMatrix rep{{x(1), x(2), x(3)}, {x(4), x(5), x(1)}, {x(1), x(2), x(3)}};
  EXPECT_TRUE(determinant(rep).is_zero());
}

TEST(Determinant, AgreesWithCofactorExpansionAlongEveryRow) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    PolyMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = random_linear(rng);
    Polynomial d = determinant(m);
    for (std::size_t row = 0; row < 4; ++row) EXPECT_EQ(d, cofactor_det(m, row));
  }
}

TEST(Gcd, Basic) {
  EXPECT_EQ(gcd(x(1) * x(2), x(1) * x(3)), x(1));
  EXPECT_EQ(gcd(Polynomial(), Polynomial()), Polynomial());
  EXPECT_EQ(gcd_many({}), Polynomial());
  EXPECT_EQ(gcd(P("2*x1 + 4*x2"), Polynomial()), P("x1 + 2*x2"));
  EXPECT_EQ(gcd(P("x1^2 - x2^2"), P("x1^2 + 2*x1*x2 + x2^2")), P("x1 + x2"));
  EXPECT_EQ(gcd(P("x1*x2"), P("x3*x4")), Polynomial(1));
}

TEST(Gcd, RejectsHighDegree) {
  EXPECT_THROW(gcd(P("x1^4"), x(1)), Error);
  try {
    gcd(P("x1^2*x2^2"), x(1));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDegree);
  }
}

TEST(Gcd, DividesInputsAndIsMultiplicative) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    // f, g of degree <= 2 and h linear, so f*h and g*h stay within degree 3.
    Polynomial f = random_homogeneous(rng, 1 + trial % 2, 4);
    Polynomial g = random_homogeneous(rng, 1 + (trial / 2) % 2, 4);
    if (f.is_zero() || g.is_zero()) continue;
    Polynomial h = random_linear(rng);
    Polynomial d = gcd(f, g);
    EXPECT_TRUE(divides(d, f));
    EXPECT_TRUE(divides(d, g));
    Polynomial dh = gcd(f * h, g * h);
    EXPECT_TRUE(divides(dh, f * h));
    EXPECT_EQ(dh, (h * d).normalized()) << f.to_string() << " | " << g.to_string() << " | " << h.to_string();
    EXPECT_EQ(dh.leading_coefficient(), 1);
  }
}

TEST(Gcd, SharedQuadraticFactor) {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial q = random_linear(rng) * random_linear(rng) + random_linear(rng) * random_linear(rng);
    Polynomial a = random_linear(rng), b = random_linear(rng);
    Polynomial d = gcd(q * a, q * b);
    EXPECT_EQ(d, q.normalized());
  }
}

TEST(DivideExact, Examples) {
  EXPECT_EQ(divide_exact(x(1) * x(1) - x(2) * x(2), x(1) - x(2)), x(1) + x(2));
  EXPECT_THROW(divide_exact(x(1) * x(2), x(3)), Error);
  try {
    divide_exact(x(1) * x(2), x(3));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDivisible);
  }
}

TEST(DivideExact, InvertsMultiplication) {
  Rng rng = make_rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial f = random_homogeneous(rng, 2, 5);
    Polynomial g = random_homogeneous(rng, 1 + trial % 3, 4);
    if (g.is_zero()) continue;
    EXPECT_EQ(divide_exact(f * g, g), f);
  }
}

TEST(SpanDimension, Examples) {
  LinearForm a = LinearForm::variable(0), b = LinearForm::variable(1);
  EXPECT_EQ(span_dimension({a, b, a + b}), 2u);
  EXPECT_EQ(span_dimension({LinearForm()}), 0u);
  EXPECT_EQ(span_dimension({}), 0u);
}

TEST(SpanDimension, InvariantUnderRecombination) {
  Rng rng = make_rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 4;
    std::vector<LinearForm> forms;
    for (std::size_t i = 0; i < n; ++i) forms.push_back(random_linear_form(rng));
    if (trial % 3 == 0) forms.back() = forms[0] + forms[1];
    QMatrix g = random_invertible(rng, n);
    std::vector<LinearForm> mixed(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mixed[i] += forms[j] * g(i, j);
    EXPECT_EQ(span_dimension(forms), span_dimension(mixed));
  }
}

TEST(LinearAlgebra, KernelAndSolve) {
  EXPECT_TRUE(kernel_basis(QMatrix::identity(4)).empty());
  QMatrix camera{{1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
  auto k = kernel_basis(camera);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) {
    for (auto val : mat_vec(camera, v)) EXPECT_EQ(val, 0);
  }
  QMatrix a{{2, 1}, {1, 3}};
  auto sol = linear_solve(a, {5, 10});
  ASSERT_TRUE(sol);
  EXPECT_EQ((*sol)[0], 1);
  EXPECT_EQ((*sol)[1], 3);
  QMatrix singular{{1, 2}, {2, 4}};
  EXPECT_FALSE(linear_solve(singular, {1, 1}));
  EXPECT_FALSE(inverse(singular));
  auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(*inv * a, QMatrix::identity(2));
}

TEST(LinearAlgebra, CompleteBasis) {
  QMatrix b = complete_basis({{0, 1, 1}}, 3);
  EXPECT_NE(determinant(b), 0);
  EXPECT_EQ(b(0, 0), 0);
  EXPECT_EQ(b(1, 0), 1);
}

TEST(BinaryForm, Roots) {
  auto r = binary_form_roots(P("x1^2 - x2^2"));
  EXPECT_EQ(r.roots.size(), 2u);
  EXPECT_TRUE(r.complete);
  auto s = binary_form_roots(P("x1^2 + x2^2"));
  EXPECT_FALSE(s.complete);
  auto t = binary_form_roots(P("x1*x2"));
  EXPECT_EQ(t.roots.size(), 2u);
  EXPECT_TRUE(binary_form_roots(Polynomial()).identically_zero);
}

TEST(RestrictToLine, Quadric) {
  // q = x1*x2 on the line (1,0,0,0,0) + t (0,1,0,0,0) gives t.
  auto c = restrict_to_line(P("x1*x2"), {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], 0);
  EXPECT_EQ(c[1], 1);
}
