#include "critloc/loci.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "critloc/poly_algebra.hpp"
#include "critloc/template_fit.hpp"

namespace critloc {

std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Hyperplane: return "Hyperplane";
    case ComponentKind::Plane: return "Plane";
    case ComponentKind::Line: return "Line";
    case ComponentKind::Point: return "Point";
    case ComponentKind::QuadricHypersurface: return "QuadricHypersurface";
    case ComponentKind::QuadricSurface: return "QuadricSurface";
    case ComponentKind::Cone: return "Cone";
    case ComponentKind::TwistedCubic: return "TwistedCubic";
    case ComponentKind::CubicScroll: return "CubicScroll";
  }
  return "?";
}

int kind_dimension(ComponentKind k) {
  switch (k) {
    case ComponentKind::Hyperplane:
    case ComponentKind::QuadricHypersurface:
    case ComponentKind::Cone: return 3;
    case ComponentKind::Plane:
    case ComponentKind::QuadricSurface:
    case ComponentKind::CubicScroll: return 2;
    case ComponentKind::Line:
    case ComponentKind::TwistedCubic: return 1;
    case ComponentKind::Point: return 0;
  }
  return -1;
}

int kind_degree(ComponentKind k) {
  switch (k) {
    case ComponentKind::Hyperplane:
    case ComponentKind::Plane:
    case ComponentKind::Line:
    case ComponentKind::Point: return 1;
    case ComponentKind::QuadricHypersurface:
    case ComponentKind::QuadricSurface:
    case ComponentKind::Cone: return 2;
    case ComponentKind::TwistedCubic:
    case ComponentKind::CubicScroll: return 3;
  }
  return -1;
}

namespace {

using Complex = std::complex<double>;
using CPoint = std::array<Complex, kNumVars>;

constexpr int kMaxRetries = 200;

Polynomial var(int i) { return Polynomial::variable(i); }

std::vector<QVector> kernel_of(const std::vector<LinearForm>& forms) {
  if (forms.empty()) {
    std::vector<QVector> basis;
    for (int i = 0; i < kNumVars; ++i) {
      QVector e(kNumVars, Rational(0));
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  return kernel_basis(coefficient_matrix(forms));
}

QVector random_combination(const std::vector<QVector>& basis, Rng& rng) {
  for (;;) {
    QVector p(kNumVars, Rational(0));
    for (const auto& b : basis) {
      Rational c = random_int(rng);
      for (int i = 0; i < kNumVars; ++i) p[i] += c * b[i];
    }
    if (std::any_of(p.begin(), p.end(), [](const Rational& r) { return sgn(r) != 0; })) return p;
  }
}

// f restricted to span(basis), in the variables x1..x_k.
Polynomial restrict_to(const Polynomial& f, const std::vector<QVector>& basis) {
  std::array<Polynomial, kNumVars> images;
  for (int i = 0; i < kNumVars; ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) images[i] += basis[j][i] * var(static_cast<int>(j));
  return f.compose(images);
}

LinearForm restrict_form(const LinearForm& f, const std::vector<QVector>& basis) {
  LinearForm out;
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < kNumVars; ++i) out[static_cast<int>(j)] += f[i] * basis[j][i];
  return out;
}

Polynomial minor2(const Polynomial& a, const Polynomial& b, const Polynomial& c, const Polynomial& d) {
  return a * d - b * c;
}

Rational constant_of(const Polynomial& p) {
  if (!p.is_constant()) throw Error(ErrorCode::InvalidParams, "expected a constant entry, got " + p.to_string());
  return p.coefficient(Exponent{});
}

QMatrix constant_matrix(const PolyMatrix& p) {
  QMatrix q(p.rows(), p.cols());
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t c = 0; c < p.cols(); ++c) q(r, c) = constant_of(p(r, c));
  return q;
}

// Coefficients c_k of s^(d-k) t^k for a binary form in x1 = s, x2 = t.
std::vector<Rational> binary_coeffs(const Polynomial& f, int d) {
  std::vector<Rational> c(d + 1, Rational(0));
  for (const auto& [e, coeff] : f.terms()) c.at(e[1]) = coeff;
  return c;
}

// Discriminant of a binary form of degree 1..3 (degree 1 reports 1).
Rational discriminant(const std::vector<Rational>& c) {
  switch (c.size() - 1) {
    case 1: return 1;
    case 2: return c[1] * c[1] - 4 * c[0] * c[2];
    case 3: {
      const Rational &a = c[3], &b = c[2], &cc = c[1], &d = c[0];
      return b * b * cc * cc - 4 * a * cc * cc * cc - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * cc * d;
    }
    default: throw Error(ErrorCode::InvalidParams, "discriminant only for degree 1..3");
  }
}

// Number of distinct roots over C of a nonzero binary form, or -1 when it
// vanishes identically or has a repeated root.
int distinct_root_count(const Polynomial& f) {
  if (f.is_zero()) return -1;
  auto d = f.homogeneous_degree();
  if (!d || *d == 0) return 0;
  if (sgn(discriminant(binary_coeffs(f, *d))) == 0) return -1;
  return *d;
}

double coeff_norm(const Polynomial& f) {
  double s = 0;
  for (const auto& [e, c] : f.terms()) s += c.get_d() * c.get_d();
  return std::sqrt(s);
}

Complex eval_complex(const Polynomial& f, const CPoint& p) {
  Complex s = 0;
  for (const auto& [e, c] : f.terms()) {
    Complex t = c.get_d();
    for (int i = 0; i < kNumVars; ++i)
      for (int k = 0; k < e[i]; ++k) t *= p[i];
    s += t;
  }
  return s;
}

double residual_complex(const LocusComponent& comp, CPoint p) {
  double norm = 0;
  for (const auto& z : p) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (norm == 0) return 0;
  for (auto& z : p) z /= norm;
  double worst = 0;
  for (const auto& g : comp.generators) {
    double cn = coeff_norm(g);
    if (cn == 0) continue;
    worst = std::max(worst, std::abs(eval_complex(g, p)) / cn);
  }
  return worst;
}

// Roots of sum c_k t^k via the companion matrix.
std::vector<Complex> univariate_roots(std::vector<Complex> c) {
  double scale = 0;
  for (const auto& z : c) scale = std::max(scale, std::abs(z));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  if (c.size() < 2) return {};
  int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

LocusComponent linear_component(ComponentKind kind, std::string name, std::vector<LinearForm> forms) {
  LocusComponent comp;
  comp.kind = kind;
  comp.name = std::move(name);
  comp.dim = kind_dimension(kind);
  comp.degree = 1;
  if (static_cast<int>(span_dimension(forms)) != 4 - comp.dim) {
    throw Error(ErrorCode::DegenerateInstance, comp.name + " is not a linear space of dimension " +
                                                   std::to_string(comp.dim));
  }
  for (const auto& f : forms) comp.generators.push_back(f.to_polynomial());
  comp.linear = std::move(forms);
  return comp;
}

// Point of span(candidates) on the quadric where the gradient does not vanish
// on the ambient space cut by `ambient`.
QVector choose_anchor(const Polynomial& q, const std::vector<QVector>& candidates,
                      const std::vector<LinearForm>& ambient) {
  QMatrix s = quadric_matrix(q);
  auto amb = kernel_of(ambient);
  std::vector<QVector> tries = candidates;
  if (candidates.size() >= 2) {
    for (int k = 1; k <= 3; ++k)
      for (int sign : {1, -1}) {
        QVector p(kNumVars);
        for (int i = 0; i < kNumVars; ++i) p[i] = candidates[0][i] + sign * k * candidates[1][i];
        tries.push_back(p);
      }
  }
  for (const auto& p : tries) {
    if (sgn(q.evaluate(p)) != 0) continue;
    QVector g = mat_vec(s, p);
    for (const auto& y : amb) {
      Rational dot = 0;
      for (int i = 0; i < kNumVars; ++i) dot += g[i] * y[i];
      if (sgn(dot) != 0) return p;
    }
  }
  throw Error(ErrorCode::DegenerateInstance, "no smooth anchor point on the quadric " + q.to_string());
}

LocusComponent quadric_component(ComponentKind kind, std::string name, const Polynomial& q,
                                 std::vector<LinearForm> ambient) {
  if (q.homogeneous_degree() != 2 || q.is_zero()) {
    throw Error(ErrorCode::DegenerateInstance, name + " is not a quadric: " + q.to_string());
  }
  LocusComponent comp;
  comp.kind = kind;
  comp.name = std::move(name);
  comp.dim = kind_dimension(kind);
  comp.degree = 2;
  for (const auto& f : ambient) comp.generators.push_back(f.to_polynomial());
  comp.generators.push_back(q);
  comp.linear = std::move(ambient);
  comp.quadric = q;
  return comp;
}

std::vector<LinearForm> template_values(const Canonicalization& c) {
  auto vals = match_template(c.canonical, family_template(c.family, c.alpha, c.beta));
  if (!vals) throw Error(ErrorCode::InvalidParams, "canonical matrix does not match its family template");
  return *vals;
}

}  // namespace

QMatrix symmetric_matrix_D(const QMatrix& x1) {
  if (x1.rows() != 6 || x1.cols() != 3) throw Error(ErrorCode::InvalidParams, "X1 must be 6x3");
  auto m = [&](std::size_t i, std::size_t j, std::size_t k) {
    return determinant(x1.submatrix({i - 1, j - 1, k - 1}, {0, 1, 2}));
  };
  QMatrix d(4, 4);
  d(0, 0) = -2 * m(2, 3, 6);
  d(0, 1) = -m(2, 3, 5) + m(1, 3, 6);
  d(0, 2) = -m(2, 3, 4) - m(1, 2, 6);
  d(0, 3) = m(3, 4, 6) + m(2, 5, 6);
  d(1, 1) = 2 * m(1, 3, 5);
  d(1, 2) = m(1, 3, 4) - m(1, 2, 5);
  d(1, 3) = m(3, 4, 5) - m(1, 5, 6);
  d(2, 2) = -2 * m(1, 2, 4);
  d(2, 3) = -m(2, 4, 5) - m(1, 4, 6);
  d(3, 3) = 2 * m(4, 5, 6);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) {
      d(i, j) /= 2;
      d(j, i) = d(i, j);
    }
  return d;
}

Polynomial quadratic_form(const QMatrix& d, const std::vector<LinearForm>& ell) {
  if (d.rows() != ell.size() || d.cols() != ell.size()) throw Error(ErrorCode::InvalidParams, "shape mismatch");
  Polynomial q;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    Polynomial li = ell[i].to_polynomial();
    for (std::size_t j = 0; j < ell.size(); ++j) {
      if (sgn(d(i, j)) != 0) q += d(i, j) * (li * ell[j].to_polynomial());
    }
  }
  return q;
}

Polynomial s2_quadric(const std::vector<LinearForm>& ell, const PolyMatrix& x2) {
  if (ell.size() != 4 || x2.rows() != 4 || x2.cols() != 3) throw Error(ErrorCode::InvalidParams, "S2 shape");
  auto m = [&](std::size_t i, std::size_t j, std::size_t k) {
    return determinant(x2.submatrix({i - 1, j - 1, k - 1}, {0, 1, 2}));
  };
  return ell[1].to_polynomial() * m(1, 3, 4) - ell[2].to_polynomial() * m(1, 2, 4) +
         ell[3].to_polynomial() * m(1, 2, 3);
}

LocusDecomposition decompose(const Canonicalization& c) {
  LocusDecomposition d;
  d.family = c.family;
  auto& comps = d.components;
  switch (c.family) {
    case Family::A: {
      auto v = template_values(c);  // n11 n12 n21 n22 n31 n32 n41 n42 n43
      comps.push_back(linear_component(ComponentKind::Hyperplane, "H_A", {v[8]}));
      LocusComponent s;
      s.kind = ComponentKind::CubicScroll;
      s.name = "S_A";
      s.dim = 2;
      s.degree = 3;
      s.block = LinFormMatrix{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
      PolyMatrix b = to_poly(s.block);
      s.generators = {minor2(b(0, 0), b(0, 1), b(1, 0), b(1, 1)), minor2(b(0, 0), b(0, 1), b(2, 0), b(2, 1)),
                      minor2(b(1, 0), b(1, 1), b(2, 0), b(2, 1))};
      Polynomial g = gcd_many_unchecked(s.generators);
      if (g.is_zero() || !g.is_constant()) {
        throw Error(ErrorCode::DegenerateInstance, "2x2 minors of the left block share a factor");
      }
      comps.push_back(std::move(s));
      break;
    }
    case Family::B: {
      auto v = template_values(c);  // n13 n31 n32 n33 n41 n42 n43
      if (span_dimension({v[0], v[1], v[4]}) != 3) {
        throw Error(ErrorCode::DegenerateInstance, "n13, n31, n41 are dependent, so r_B is not a line");
      }
      comps.push_back(linear_component(ComponentKind::Hyperplane, "H_B", {v[0]}));
      comps.push_back(linear_component(ComponentKind::Plane, "L_B", {v[1], v[4]}));
      LocusComponent cb;
      cb.kind = ComponentKind::TwistedCubic;
      cb.name = "C_B";
      cb.dim = 1;
      cb.degree = 3;
      cb.linear = {v[0]};
      cb.block = LinFormMatrix{{v[1], v[2], v[3]}, {v[4], v[5], v[6]}};
      PolyMatrix b = to_poly(cb.block);
      cb.generators = {v[0].to_polynomial(), minor2(b(0, 1), b(0, 2), b(1, 1), b(1, 2)),
                       minor2(b(0, 0), b(0, 2), b(1, 0), b(1, 2)), minor2(b(0, 0), b(0, 1), b(1, 0), b(1, 1))};
      comps.push_back(std::move(cb));
      d.incidences.push_back({IncidenceKind::MeetDegree, {1, 2}, "r_B = L_B cap H_B meets C_B in 2 points", 2});
      break;
    }
    case Family::C: {
      auto v = template_values(c);  // n31 n22 n41 n42
      if (span_dimension(v) != 4) throw Error(ErrorCode::DegenerateInstance, "n31, n22, n41, n42 are dependent");
      if (c.common_factor.total_degree() != 1) throw Error(ErrorCode::InvalidParams, "family C needs a linear factor");
      comps.push_back(
          linear_component(ComponentKind::Hyperplane, "H_C", {LinearForm::from_polynomial(c.common_factor)}));
      comps.push_back(linear_component(ComponentKind::Plane, "L_C1", {v[0], v[2]}));
      comps.push_back(linear_component(ComponentKind::Plane, "L_C2", {v[1], v[3]}));
      d.incidences.push_back({IncidenceKind::PointOn, {1, 2, 0}, "L_C1 cap L_C2 is one point on H_C", 1});
      break;
    }
    case Family::D: {
      auto v = template_values(c);  // n13 n31 n23 n33 n41 n42 n43
      comps.push_back(linear_component(ComponentKind::Hyperplane, "H_D", {v[1]}));
      Polynomial q = v[1].to_polynomial() * v[6].to_polynomial() - v[5].to_polynomial() * v[2].to_polynomial() -
                     v[4].to_polynomial() * v[3].to_polynomial();
      LocusComponent qd = quadric_component(ComponentKind::QuadricSurface, "Q_D", q, {v[0]});
      auto p0 = kernel_of({v[0], v[1], v[4], v[5]});
      if (p0.size() != 1) throw Error(ErrorCode::DegenerateInstance, "n13, n31, n41, n42 are dependent");
      qd.anchor = choose_anchor(q, p0, qd.linear);
      comps.push_back(std::move(qd));
      comps.push_back(linear_component(ComponentKind::Line, "r_D", {v[1], v[4], v[5]}));
      d.incidences.push_back({IncidenceKind::MeetDegree, {2, 1}, "Q_D cap r_D is a single point", 1});
      break;
    }
    case Family::S1X1: {
      QMatrix x1 = constant_matrix(c.X);
      if (rank(x1) != 3) throw Error(ErrorCode::DegenerateInstance, "X1 is not of maximal rank");
      QMatrix dm = symmetric_matrix_D(x1);
      if (sgn(determinant(dm)) == 0) {
        throw Error(ErrorCode::DegenerateInstance, "det D = 0: the cone degenerates further");
      }
      comps.push_back(quadric_component(ComponentKind::Cone, "Q", quadratic_form(dm, c.ell), {}));
      comps.push_back(linear_component(ComponentKind::Point, "vertex", c.ell));
      d.incidences.push_back({IncidenceKind::Vertex, {0, 1}, "cone vertex is {ell_1 = ... = ell_4 = 0}", 4});
      break;
    }
    case Family::S2X2: {
      Polynomial q = s2_quadric(c.ell, c.X);
      LocusComponent qc = quadric_component(ComponentKind::QuadricHypersurface, "Q", q, {});
      std::vector<LinearForm> rforms = {c.ell[1], c.ell[2], c.ell[3]};
      qc.anchor = choose_anchor(q, kernel_of(rforms), {});
      comps.push_back(std::move(qc));
      comps.push_back(linear_component(ComponentKind::Line, "r", rforms));
      d.incidences.push_back({IncidenceKind::Contained, {1, 0}, "r lies in Q", 0});
      d.incidences.push_back({IncidenceKind::QuadricRank, {0}, "Q is a smooth quadric (rank 5)", 5});
      break;
    }
    case Family::S3X3: {
      Polynomial q = determinant(c.X);
      if (q.is_zero()) throw Error(ErrorCode::DegenerateInstance, "det X3 vanishes identically");
      LocusComponent qc = quadric_component(ComponentKind::QuadricHypersurface, "Q", q, {});
      std::vector<LinearForm> row0;
      for (std::size_t j = 0; j < 3; ++j) row0.push_back(LinearForm::from_polynomial(c.X(0, j)));
      qc.anchor = choose_anchor(q, kernel_of(row0), {});
      comps.push_back(std::move(qc));
      comps.push_back(linear_component(ComponentKind::Plane, "P", {c.ell[2], c.ell[3]}));
      d.incidences.push_back({IncidenceKind::ConicSection, {1, 0}, "P cuts Q in a conic", 2});
      // det X3 = u . (v x c) and the three forms v x c are dependent.
      d.incidences.push_back({IncidenceKind::QuadricRank, {0}, "Q is a quadric of rank 4", 4});
      break;
    }
    default:
      throw Error(ErrorCode::InvalidParams, "no locus decomposition for family " + std::string(to_string(c.family)));
  }
  return d;
}

bool on_component(const LocusComponent& comp, const QVector& p) {
  return std::all_of(comp.generators.begin(), comp.generators.end(),
                     [&](const Polynomial& g) { return sgn(g.evaluate(p)) == 0; });
}

double normalized_residual(const LocusComponent& comp, const std::vector<double>& p) {
  CPoint z;
  for (int i = 0; i < kNumVars; ++i) z[i] = p.at(i);
  return residual_complex(comp, z);
}

ComponentSample sample_component(const LocusComponent& comp, std::size_t n, Rng& rng) {
  ComponentSample out;
  int failures = 0;
  auto fail = [&](const std::string& why) {
    if (++failures > kMaxRetries + static_cast<int>(n)) {
      throw Error(ErrorCode::SamplingFailed, comp.name + ": " + why);
    }
  };
  auto accept = [&](QVector p) {
    if (std::all_of(p.begin(), p.end(), [](const Rational& r) { return sgn(r) == 0; })) return fail("zero point");
    if (!on_component(comp, p)) return fail("point off the component");
    out.exact.push_back(std::move(p));
  };

  switch (comp.kind) {
    case ComponentKind::Hyperplane:
    case ComponentKind::Plane:
    case ComponentKind::Line:
    case ComponentKind::Point: {
      auto basis = kernel_of(comp.linear);
      while (out.exact.size() < n) accept(random_combination(basis, rng));
      break;
    }
    case ComponentKind::CubicScroll: {
      while (out.exact.size() < n) {
        Rational s = random_int(rng), t = random_int(rng);
        if (sgn(s) == 0 && sgn(t) == 0) continue;
        std::vector<LinearForm> eqs;
        for (std::size_t i = 0; i < 3; ++i) eqs.push_back(comp.block(i, 0) * s + comp.block(i, 1) * t);
        auto basis = kernel_of(eqs);
        if (basis.empty()) {
          fail("empty ruling");
          continue;
        }
        accept(random_combination(basis, rng));
      }
      break;
    }
    case ComponentKind::TwistedCubic: {
      while (out.exact.size() < n) {
        Rational s = random_int(rng, -50, 50), t = random_int(rng, -50, 50);
        if (sgn(s) == 0 && sgn(t) == 0) continue;
        std::vector<LinearForm> eqs = comp.linear;
        for (std::size_t j = 0; j < 3; ++j) eqs.push_back(comp.block(0, j) * s + comp.block(1, j) * t);
        auto basis = kernel_of(eqs);
        if (basis.size() != 1) {
          fail("parameter without a unique point");
          continue;
        }
        QVector p = basis[0];
        Rational scale = random_int(rng, 1, 9);
        for (auto& x : p) x *= scale;
        accept(std::move(p));
      }
      break;
    }
    case ComponentKind::QuadricHypersurface:
    case ComponentKind::QuadricSurface: {
      if (comp.anchor.empty()) throw Error(ErrorCode::SamplingFailed, comp.name + " has no anchor point");
      QMatrix s = quadric_matrix(comp.quadric);
      auto amb = kernel_of(comp.linear);
      QVector sp0 = mat_vec(s, comp.anchor);
      while (out.exact.size() < n) {
        QVector y = random_combination(amb, rng);
        QVector sy = mat_vec(s, y);
        Rational a = 0, b = 0;
        for (int i = 0; i < kNumVars; ++i) {
          a += sp0[i] * y[i];
          b += sy[i] * y[i];
        }
        if (sgn(a) == 0 || sgn(b) == 0) {
          fail("tangent or isotropic direction");
          continue;
        }
        // Second intersection of the line anchor + t*y, scaled by b.
        QVector p(kNumVars);
        for (int i = 0; i < kNumVars; ++i) p[i] = b * comp.anchor[i] - 2 * a * y[i];
        accept(std::move(p));
      }
      break;
    }
    case ComponentKind::Cone: {
      std::normal_distribution<double> gauss;
      while (out.numeric.size() < n) {
        std::vector<double> p0(kNumVars), y(kNumVars), p1(kNumVars);
        for (int i = 0; i < kNumVars; ++i) {
          p0[i] = gauss(rng);
          y[i] = gauss(rng);
          p1[i] = p0[i] + y[i];
        }
        double c0 = comp.quadric.evaluate(std::span<const double>(p0));
        double c2 = comp.quadric.evaluate(std::span<const double>(y));
        double c1 = comp.quadric.evaluate(std::span<const double>(p1)) - c0 - c2;
        double disc = c1 * c1 - 4 * c0 * c2;
        if (disc < 0 || c2 == 0) {
          fail("no real intersection");
          continue;
        }
        double root = -(c1 + std::copysign(std::sqrt(disc), c1)) / 2;
        double t = root != 0 ? c0 / root : 0;  // smaller-magnitude root, computed stably
        std::vector<double> p(kNumVars);
        double norm = 0;
        for (int i = 0; i < kNumVars; ++i) {
          p[i] = p0[i] + t * y[i];
          norm += p[i] * p[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0) {
          fail("zero point");
          continue;
        }
        for (auto& x : p) x /= norm;
        if (normalized_residual(comp, p) >= 1e-10) {
          fail("residual above 1e-10");
          continue;
        }
        out.numeric.push_back(std::move(p));
      }
      break;
    }
  }
  return out;
}

RankDropReport verify_rank_drop(const LinFormMatrix& n, const std::vector<QVector>& pts) {
  RankDropReport r;
  for (const auto& p : pts) {
    int k = static_cast<int>(rank(evaluate(n, p)));
    r.ranks.push_back(k);
    if (k > 2) r.all_dropped = false;
  }
  return r;
}

RankDropReport verify_rank_drop(const LinFormMatrix& n, const std::vector<std::vector<double>>& pts,
                                double relative_tol) {
  RankDropReport r;
  for (const auto& p : pts) {
    int k = static_cast<int>(numerical_rank(evaluate(n, p), relative_tol));
    r.ranks.push_back(k);
    if (k > 2) r.all_dropped = false;
  }
  return r;
}

std::size_t full_rank_count(const LinFormMatrix& n, const LocusDecomposition& d, std::size_t count, Rng& rng) {
  std::size_t full = 0;
  for (std::size_t i = 0; i < count;) {
    QVector p = random_vector(rng, kNumVars, -1000, 1000);
    if (std::any_of(d.components.begin(), d.components.end(),
                    [&](const LocusComponent& c) { return on_component(c, p); }))
      continue;
    ++i;
    if (rank(evaluate(n, p)) == n.cols()) ++full;
  }
  return full;
}

std::vector<CheckResult> incidence_checks(const LocusDecomposition& d, bool strict) {
  std::vector<CheckResult> out;
  auto comp = [&](std::size_t i) -> const LocusComponent& { return d.components.at(i); };
  auto nonlinear = [](const LocusComponent& c) {
    std::vector<Polynomial> g;
    for (const auto& p : c.generators)
      if (p.total_degree() >= 2) g.push_back(p);
    return g;
  };
  for (const auto& inc : d.incidences) {
    CheckResult r{inc.fact, false, ""};
    std::ostringstream why;
    switch (inc.kind) {
      case IncidenceKind::MeetDegree:
      case IncidenceKind::PointOn: {
        const auto &a = comp(inc.comps[0]), &b = comp(inc.comps[1]);
        std::vector<LinearForm> forms = a.linear;
        forms.insert(forms.end(), b.linear.begin(), b.linear.end());
        auto basis = kernel_of(forms);
        std::vector<Polynomial> gens = nonlinear(a);
        auto gb = nonlinear(b);
        gens.insert(gens.end(), gb.begin(), gb.end());
        if (inc.kind == IncidenceKind::PointOn) {
          if (basis.size() != 1) {
            why << "linear spans meet in dimension " << static_cast<int>(basis.size()) - 1;
            break;
          }
          const auto& h = comp(inc.comps[2]);
          r.ok = on_component(h, basis[0]);
          why << "meet point " << (r.ok ? "lies on " : "is off ") << h.name;
          break;
        }
        if (basis.size() == 1) {
          bool all = std::all_of(gens.begin(), gens.end(),
                                 [&](const Polynomial& g) { return sgn(g.evaluate(basis[0])) == 0; });
          r.ok = all && inc.expected == 1;
          why << "linear parts meet in one point, " << (all ? "on" : "off") << " the other generators";
        } else if (basis.size() == 2) {
          std::vector<Polynomial> restricted;
          for (const auto& g : gens) restricted.push_back(restrict_to(g, basis));
          Polynomial g = gcd_many_unchecked(restricted);
          if (g.is_zero()) {
            why << "the line lies inside the component";
          } else {
            int count = g.total_degree();
            r.ok = count == inc.expected;
            why << count << " intersection points over C";
            if (count == 2) {
              Rational disc = discriminant(binary_coeffs(g, 2));
              why << (sgn(disc) > 0 ? " (real, distinct)" : sgn(disc) < 0 ? " (complex conjugate)" : " (double)");
            }
          }
        } else {
          why << "linear parts meet in dimension " << static_cast<int>(basis.size()) - 1;
        }
        break;
      }
      case IncidenceKind::Contained: {
        const auto &a = comp(inc.comps[0]), &b = comp(inc.comps[1]);
        auto basis = kernel_of(a.linear);
        r.ok = std::all_of(b.generators.begin(), b.generators.end(),
                           [&](const Polynomial& g) { return restrict_to(g, basis).is_zero(); });
        why << b.name << " generators " << (r.ok ? "vanish" : "do not vanish") << " on " << a.name;
        break;
      }
      case IncidenceKind::ConicSection: {
        const auto &plane = comp(inc.comps[0]), &q = comp(inc.comps[1]);
        auto basis = kernel_of(plane.linear);
        Polynomial conic = restrict_to(q.quadric, basis);
        r.ok = basis.size() == 3 && !conic.is_zero() && conic.homogeneous_degree() == 2;
        why << "restriction " << conic.to_string();
        if (r.ok) why << ", conic rank " << rank(quadric_matrix(conic).submatrix({0, 1, 2}, {0, 1, 2}));
        break;
      }
      case IncidenceKind::QuadricRank: {
        std::size_t k = rank(quadric_matrix(comp(inc.comps[0]).quadric));
        r.ok = static_cast<int>(k) == inc.expected;
        why << "5x5 matrix has rank " << k;
        break;
      }
      case IncidenceKind::Vertex: {
        const auto &cone = comp(inc.comps[0]), &pt = comp(inc.comps[1]);
        QMatrix s = quadric_matrix(cone.quadric);
        auto ker = kernel_basis(s);
        auto vtx = kernel_of(pt.linear);
        bool same = ker.size() == 1 && vtx.size() == 1 && rank(QMatrix{{ker[0][0], ker[0][1], ker[0][2], ker[0][3],
                                                                          ker[0][4]},
                                                                         {vtx[0][0], vtx[0][1], vtx[0][2],
                                                                          vtx[0][3], vtx[0][4]}}) == 1;
        r.ok = static_cast<int>(5 - ker.size()) == inc.expected && same;
        why << "cone rank " << 5 - ker.size() << ", kernel " << (same ? "is" : "is not") << " the vertex";
        break;
      }
    }
    r.detail = why.str();
    if (strict && !r.ok) throw Error(ErrorCode::IncidenceMismatch, r.name + ": " + r.detail);
    out.push_back(std::move(r));
  }
  return out;
}

CheckResult degree_check(const LocusComponent& comp, Rng& rng) {
  CheckResult r{comp.name + ": degree " + std::to_string(comp.degree), false, ""};
  auto pts = [&](std::size_t k) {
    std::vector<QVector> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(random_vector(rng, kNumVars));
    return v;
  };
  for (int attempt = 0; attempt < 20 && !r.ok; ++attempt) {
    int count = -1;
    switch (comp.kind) {
      case ComponentKind::Hyperplane:
      case ComponentKind::QuadricHypersurface:
      case ComponentKind::Cone:
        count = distinct_root_count(restrict_to(comp.generators.back(), pts(2)));
        break;
      case ComponentKind::Plane:
      case ComponentKind::Line:
      case ComponentKind::Point: {
        std::vector<LinearForm> forms = comp.linear;
        for (int i = 0; i < comp.dim; ++i) forms.push_back(random_linear_form(rng));
        count = kernel_of(forms).size() == 1 ? 1 : -1;
        break;
      }
      case ComponentKind::CubicScroll: {
        auto plane = pts(3);
        PolyMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
          LinearForm a = restrict_form(comp.block(i, 0), plane), b = restrict_form(comp.block(i, 1), plane);
          for (int k = 0; k < 3; ++k) m(i, k) = a[k] * var(0) + b[k] * var(1);
        }
        count = distinct_root_count(determinant(m));
        break;
      }
      case ComponentKind::TwistedCubic: {
        LinearForm h = random_linear_form(rng);
        PolyMatrix m(5, 5);
        for (int k = 0; k < kNumVars; ++k) {
          for (std::size_t j = 0; j < 3; ++j) m(j, k) = comp.block(0, j)[k] * var(0) + comp.block(1, j)[k] * var(1);
          m(3, k) = Polynomial(comp.linear.at(0)[k]);
          m(4, k) = Polynomial(h[k]);
        }
        count = distinct_root_count(determinant(m));
        break;
      }
      case ComponentKind::QuadricSurface: {
        auto plane = pts(3);
        auto inner = kernel_basis(coefficient_matrix({restrict_form(comp.linear.at(0), plane)}).submatrix({0}, {0, 1, 2}));
        if (inner.size() != 2) break;
        std::vector<QVector> line;
        for (const auto& w : inner) {
          QVector p(kNumVars, Rational(0));
          for (int i = 0; i < kNumVars; ++i)
            for (std::size_t j = 0; j < 3; ++j) p[i] += w[j] * plane[j][i];
          line.push_back(p);
        }
        count = distinct_root_count(restrict_to(comp.quadric, line));
        break;
      }
    }
    if (count >= 0) {
      r.ok = count == comp.degree && comp.dim == kind_dimension(comp.kind);
      r.detail = std::to_string(count) + " intersection points with a generic complementary space";
    }
  }
  if (r.detail.empty()) r.detail = "no transversal slice found";
  return r;
}

namespace {

// Rank-drop points on span(basis) (2 or 3 basis points), as complex points.
std::vector<CPoint> rank_drop_points(const std::vector<Polynomial>& minors, const std::vector<QVector>& basis,
                                     Rng& rng) {
  std::vector<Polynomial> restricted;
  for (const auto& m : minors) restricted.push_back(restrict_to(m, basis));
  Polynomial g = gcd_many_unchecked(restricted);
  std::vector<CPoint> out;
  auto lift = [&](const std::array<Complex, 3>& u) {
    CPoint p{};
    for (int i = 0; i < kNumVars; ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) p[i] += u[j] * basis[j][i].get_d();
    return p;
  };
  if (basis.size() == 2) {
    // Roots of the restricted common factor g(s, 1).
    auto d = g.homogeneous_degree().value_or(0);
    if (g.is_zero() || d == 0) return out;
    auto c = binary_coeffs(g, d);  // c_k for s^(d-k) t^k
    std::vector<Complex> poly(d + 1);
    for (int k = 0; k <= d; ++k) poly[d - k] = c[k].get_d();
    for (const auto& s : univariate_roots(poly)) out.push_back(lift({s, 1.0, 0.0}));
    return out;
  }
  // Plane: common zeros of the residual minors, via the resultant in x1 of two
  // random combinations.
  std::vector<Polynomial> residual;
  for (const auto& m : restricted) residual.push_back(m.is_zero() ? m : divide_exact(m, g));
  int rd = -1;
  for (const auto& m : residual)
    if (!m.is_zero()) rd = std::max(rd, m.total_degree());
  if (rd <= 0) return out;
  Polynomial f1, f2;
  for (const auto& m : residual) {
    f1 += random_int(rng) * m;
    f2 += random_int(rng) * m;
  }
  auto c1 = f1.coefficients_in(0), c2 = f2.coefficients_in(0);
  if (static_cast<int>(c1.size()) != rd + 1 || static_cast<int>(c2.size()) != rd + 1) return out;
  PolyMatrix syl(2 * rd, 2 * rd);
  for (int r = 0; r < rd; ++r)
    for (int k = 0; k <= rd; ++k) {
      syl(r, r + k) = c1[rd - k];
      syl(rd + r, r + k) = c2[rd - k];
    }
  Polynomial res = determinant(syl);  // binary form in x2, x3
  if (res.is_zero()) return out;
  int dres = res.total_degree();
  std::vector<Complex> poly(dres + 1);
  for (const auto& [e, c] : res.terms()) poly.at(e[1]) = c.get_d();  // x2 = v, x3 = 1
  for (const auto& v : univariate_roots(poly)) {
    CPoint at{};
    at[1] = v;
    at[2] = 1.0;
    std::vector<Complex> u(rd + 1);
    for (int k = 0; k <= rd; ++k) u[k] = eval_complex(c1[k], at);
    for (const auto& x : univariate_roots(u)) {
      // Keep only common zeros of every residual minor.
      CPoint un{x, v, 1.0};
      double norm = std::sqrt(std::norm(x) + std::norm(v) + 1.0);
      for (auto& z : un) z /= norm;
      double worst = 0;
      for (const auto& m : residual)
        if (!m.is_zero()) worst = std::max(worst, std::abs(eval_complex(m, un)) / coeff_norm(m));
      if (worst < 1e-8) out.push_back(lift({x, v, 1.0}));
    }
  }
  return out;
}

}  // namespace

CompletenessReport completeness_check(const LinFormMatrix& n, const LocusDecomposition& d, std::size_t lines,
                                      std::size_t planes, Rng& rng, double tol) {
  CompletenessReport rep;
  auto minors = maximal_minors_signed(n);
  auto explain = [&](const CPoint& p) {
    double best = 1e300;
    for (const auto& c : d.components) best = std::min(best, residual_complex(c, p));
    ++rep.points_found;
    rep.worst_residual = std::max(rep.worst_residual, best);
    if (best > tol) ++rep.points_unexplained;
  };
  for (std::size_t i = 0; i < lines; ++i) {
    std::vector<QVector> basis = {random_vector(rng, kNumVars), random_vector(rng, kNumVars)};
    for (const auto& p : rank_drop_points(minors, basis, rng)) explain(p);
  }
  for (std::size_t i = 0; i < planes; ++i) {
    std::vector<QVector> basis = {random_vector(rng, kNumVars), random_vector(rng, kNumVars),
                                  random_vector(rng, kNumVars)};
    for (const auto& p : rank_drop_points(minors, basis, rng)) explain(p);
  }
  return rep;
}

bool LociVerification::ok() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

LociVerification verify_loci(const LinFormMatrix& n, std::size_t samples, Rng& rng) {
  return verify_loci(n, classify_4x3(n), samples, rng);
}

LociVerification verify_loci(const LinFormMatrix& n, const Canonicalization& c, std::size_t samples, Rng& rng) {
  LociVerification v;
  v.canonical = c;
  try {
    v.decomposition = decompose(c);
  } catch (const Error& e) {
    v.checks.push_back({"decompose", false, e.what()});
    return v;
  }
  v.checks.push_back({"decompose", true, std::string(to_string(c.family)) + ", " +
                                             std::to_string(v.decomposition.components.size()) + " components"});
  for (const auto& comp : v.decomposition.components) {
    ComponentSample s;
    try {
      s = sample_component(comp, samples, rng);
    } catch (const Error& e) {
      v.checks.push_back({comp.name + ": sampling", false, e.what()});
      continue;
    }
    auto exact = verify_rank_drop(n, s.exact);
    auto numeric = verify_rank_drop(n, s.numeric);
    bool ok = exact.all_dropped && numeric.all_dropped && s.size() >= samples;
    v.checks.push_back({comp.name + ": rank drop", ok,
                        std::to_string(s.size()) + " sampled points, " + (ok ? "all" : "not all") + " of rank <= 2"});
    v.checks.push_back(degree_check(comp, rng));
  }
  std::size_t full = full_rank_count(n, v.decomposition, 50, rng);
  v.checks.push_back({"off-locus points", full == 50, std::to_string(full) + "/50 random points of full rank"});
  for (auto& r : incidence_checks(v.decomposition)) v.checks.push_back(std::move(r));
  auto comp = completeness_check(n, v.decomposition, 20, 5, rng);
  std::ostringstream why;
  why << comp.points_found << " rank-drop points on random lines and planes, " << comp.points_unexplained
      << " off every component (worst residual " << comp.worst_residual << ")";
  v.checks.push_back({"completeness", comp.points_found > 0 && comp.points_unexplained == 0, why.str()});
  return v;
}

}  // namespace critloc
