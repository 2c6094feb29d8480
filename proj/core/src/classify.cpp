#include "critloc/classify.hpp"

#include "critloc/poly_algebra.hpp"

namespace critloc {

namespace {

constexpr std::uint64_t kFitSeed = 0x5eed'c1a5'51f1ULL;

Canonicalization identity_result(const LinFormMatrix& n, Family f) {
  Canonicalization c;
  c.family = f;
  c.R = QMatrix::identity(n.rows());
  c.C = QMatrix::identity(n.cols());
  c.canonical = n;
  return c;
}

// Column vector N*c of forms.
std::vector<LinearForm> apply_column(const LinFormMatrix& n, const QVector& c) {
  std::vector<LinearForm> out(n.rows());
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) out[i] += n(i, j) * c[j];
  return out;
}

QVector combine(const QVector& a, const QVector& b, const QVector& st) {
  QVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = st[0] * a[i] + st[1] * b[i];
  return out;
}

QMatrix columns(const std::vector<QVector>& cols) {
  QMatrix m(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

// Column kernel of N modulo ell: vectors c with N*c == 0 (mod ell).
std::vector<QVector> column_kernel_mod(const LinFormMatrix& nbar) {
  QMatrix a(nbar.rows() * kNumVars, nbar.cols());
  for (std::size_t i = 0; i < nbar.rows(); ++i)
    for (int m = 0; m < kNumVars; ++m)
      for (std::size_t c = 0; c < nbar.cols(); ++c) a(i * kNumVars + m, c) = nbar(i, c)[m];
  return kernel_basis(a);
}

std::vector<QVector> row_kernel_mod(const LinFormMatrix& nbar) {
  QMatrix a(nbar.cols() * kNumVars, nbar.rows());
  for (std::size_t c = 0; c < nbar.cols(); ++c)
    for (int m = 0; m < kNumVars; ++m)
      for (std::size_t i = 0; i < nbar.rows(); ++i) a(c * kNumVars + m, i) = nbar(i, c)[m];
  return kernel_basis(a);
}

// Scalar k with f = k * ell; f must be a multiple of ell.
Rational ratio_to(const LinearForm& f, const LinearForm& ell) {
  for (int m = 0; m < kNumVars; ++m) {
    if (sgn(ell[m]) != 0) return f[m] / ell[m];
  }
  throw Error(ErrorCode::InvalidParams, "ratio to the zero form");
}

std::optional<Canonicalization> try_fit(const LinFormMatrix& n, const QMatrix& cmat, Family f, const Rational& alpha,
                                        const Rational& beta, Rng& rng) {
  FormTemplate t = family_template(f, alpha, beta);
  LinFormMatrix nc = multiply(n, cmat);
  auto r = fit_row_operation(nc, t, rng);
  if (!r) return std::nullopt;
  Canonicalization c;
  c.family = f;
  c.R = *r;
  c.C = cmat;
  c.canonical = multiply(*r, nc);
  c.alpha = alpha;
  c.beta = beta;
  if (!match_template(c.canonical, t)) return std::nullopt;
  if (f == Family::C && c.canonical(0, 2).is_zero()) return std::nullopt;
  return c;
}

// Split ell = a + b with a in span(u), b in span(v).
std::optional<std::pair<LinearForm, LinearForm>> split_form(const LinearForm& ell, const std::vector<LinearForm>& u,
                                                            const std::vector<LinearForm>& v) {
  QMatrix a(kNumVars, u.size() + v.size());
  for (int m = 0; m < kNumVars; ++m) {
    for (std::size_t k = 0; k < u.size(); ++k) a(m, k) = u[k][m];
    for (std::size_t k = 0; k < v.size(); ++k) a(m, u.size() + k) = v[k][m];
  }
  auto sol = linear_solve(a, ell.to_vector());
  if (!sol) return std::nullopt;
  LinearForm pa, pb;
  for (std::size_t k = 0; k < u.size(); ++k) pa += u[k] * (*sol)[k];
  for (std::size_t k = 0; k < v.size(); ++k) pb += v[k] * (*sol)[u.size() + k];
  return std::make_pair(pa, pb);
}

// y with N*(c3 + y*shift) == 0 modulo span(modulus).
std::optional<Rational> solve_shift(const LinFormMatrix& n, const QVector& c3, const QVector& shift,
                                    const std::vector<LinearForm>& modulus) {
  auto base = apply_column(n, c3);
  auto dir = apply_column(n, shift);
  FormSystem sys;
  int y = sys.add_scalar();
  for (std::size_t i = 0; i < n.rows(); ++i) {
    FormSystem::Expr e = FormSystem::constant(base[i]);
    e.add(FormSystem::scalar(y, dir[i]));
    for (const auto& m : modulus) e.add(FormSystem::scalar(sys.add_scalar(), m));
    sys.require_zero(e);
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return (*sol)[y];
}

std::vector<LinearForm> basis_of_span(const std::vector<LinearForm>& forms) {
  RowEchelon e = rref(coefficient_matrix(forms));
  std::vector<LinearForm> out;
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    LinearForm f;
    for (int m = 0; m < kNumVars; ++m) f[m] = e.reduced(i, m);
    out.push_back(f);
  }
  return out;
}

std::optional<Canonicalization> classify_family_c(const LinFormMatrix& n, const LinearForm& ell, const QVector& b1,
                                                  const QVector& b2, const std::vector<QVector>& dirs, Rng& rng) {
  if (dirs.size() != 2) return std::nullopt;
  QVector c1 = combine(b1, b2, dirs[0]);
  QVector c2 = combine(b1, b2, dirs[1]);
  auto u = basis_of_span(apply_column(n, c1));
  auto v = basis_of_span(apply_column(n, c2));
  if (u.size() != 2 || v.size() != 2) return std::nullopt;
  auto parts = split_form(ell, u, v);
  if (!parts) return std::nullopt;
  Rational alpha = parts->first.is_zero() ? 0 : 1;
  Rational beta = parts->second.is_zero() ? 0 : 1;
  QMatrix base = complete_basis({c1, c2}, 3);
  QVector c3 = base.col(2);
  if (sgn(beta) == 0) {
    auto y = solve_shift(n, c3, c2, u);
    if (!y) return std::nullopt;
    for (std::size_t i = 0; i < 3; ++i) c3[i] += *y * c2[i];
  } else if (sgn(alpha) == 0) {
    auto y = solve_shift(n, c3, c1, v);
    if (!y) return std::nullopt;
    for (std::size_t i = 0; i < 3; ++i) c3[i] += *y * c1[i];
  }
  return try_fit(n, columns({c1, c2, c3}), Family::C, alpha, beta, rng);
}

Canonicalization classify_degree_one(const LinFormMatrix& n, const Polynomial& factor) {
  Rng rng = make_rng(kFitSeed);
  LinearForm ell = LinearForm::from_polynomial(factor);
  LinFormMatrix nbar(n.rows(), n.cols());
  for (std::size_t i = 0; i < n.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) nbar(i, j) = reduce_mod(n(i, j), ell);

  auto col_ker = column_kernel_mod(nbar);
  auto row_ker = row_kernel_mod(nbar);
  std::optional<Canonicalization> found;

  if (!col_ker.empty()) {
    QMatrix base = complete_basis({col_ker.front()}, 3);
    found = try_fit(n, columns({base.col(1), base.col(2), base.col(0)}), Family::A, 1, 1, rng);
  }
  if (!found && row_ker.size() == 2) {
    QMatrix w(2, n.rows());
    w.set_row(0, row_ker[0]);
    w.set_row(1, row_ker[1]);
    LinFormMatrix wn = multiply(w, n);
    QMatrix k(2, n.cols());
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < n.cols(); ++j) k(i, j) = ratio_to(wn(i, j), ell);
    auto ker = kernel_basis(k);
    if (ker.size() == 1) {
      QMatrix base = complete_basis({ker.front()}, 3);
      found = try_fit(n, base, Family::B, 1, 1, rng);
    }
  }
  if (!found && row_ker.size() == 1) {
    QMatrix w(1, n.rows());
    w.set_row(0, row_ker[0]);
    LinFormMatrix wn = multiply(w, n);
    QMatrix k(1, n.cols());
    for (std::size_t j = 0; j < n.cols(); ++j) k(0, j) = ratio_to(wn(0, j), ell);
    auto ker = kernel_basis(k);
    if (ker.size() == 2) {
      auto dirs = pencil_low_span(apply_column(n, ker[0]), apply_column(n, ker[1]), 2);
      if (!dirs.all && dirs.complete) found = classify_family_c(n, ell, ker[0], ker[1], dirs.directions, rng);
    }
  }
  if (!found && row_ker.empty()) {
    // D: a plane of columns whose images span at most two forms.
    Polynomial locus = column_span_locus(n, 2);
    if (locus.total_degree() == 1) {
      QMatrix coeffs(1, n.cols());
      for (std::size_t j = 0; j < n.cols(); ++j) {
        Exponent e{};
        e[j] = 1;
        coeffs(0, j) = locus.coefficient(e);
      }
      auto plane = kernel_basis(coeffs);
      QMatrix base = complete_basis(plane, 3);
      found = try_fit(n, base, Family::D, 1, 1, rng);
    }
  }

  if (!found) {
    Canonicalization c = identity_result(n, Family::Unresolved);
    c.flag = ClassFlag::Specialized;
    c.note = "linear common factor but no family template could be fitted";
    c.common_factor = factor;
    c.factor_degree = 1;
    return c;
  }
  found->common_factor = factor;
  found->factor_degree = 1;
  return *found;
}

QMatrix permutation(const std::vector<std::size_t>& order) {
  QMatrix p(order.size(), order.size());
  for (std::size_t i = 0; i < order.size(); ++i) p(i, order[i]) = 1;
  return p;
}

std::vector<LinearForm> extract_ell(const LinFormMatrix& n, const Polynomial& q) {
  std::vector<LinearForm> ell;
  for (const auto& d : maximal_minors_signed(n)) ell.push_back(LinearForm::from_polynomial(divide_exact(d, q)));
  return ell;
}

// Solves canonical = S * X where X rows flagged `linear` hold unknown forms and
// the others unknown constants.
std::optional<PolyMatrix> solve_factor(const LinFormMatrix& canonical, const PolyMatrix& s,
                                       const std::vector<bool>& linear) {
  std::size_t inner = s.cols();
  FormSystem sys;
  std::vector<std::vector<int>> idx(inner, std::vector<int>(3));
  for (std::size_t j = 0; j < inner; ++j)
    for (std::size_t c = 0; c < 3; ++c) idx[j][c] = linear[j] ? sys.add_form() : sys.add_scalar();
  for (std::size_t i = 0; i < canonical.rows(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      FormSystem::Expr e = FormSystem::constant(canonical(i, c));
      for (std::size_t j = 0; j < inner; ++j) {
        const Polynomial& sij = s(i, j);
        if (sij.is_zero()) continue;
        if (linear[j]) {
          if (!sij.is_constant()) return std::nullopt;
          e.add(FormSystem::form(idx[j][c], -sij.leading_coefficient()));
        } else {
          e.add(FormSystem::scalar(idx[j][c], -LinearForm::from_polynomial(sij)));
        }
      }
      sys.require_zero(e);
    }
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  PolyMatrix x(inner, 3);
  for (std::size_t j = 0; j < inner; ++j)
    for (std::size_t c = 0; c < 3; ++c)
      x(j, c) = linear[j] ? FormSystem::read_form(*sol, idx[j][c]).to_polynomial() : Polynomial((*sol)[idx[j][c]]);
  if (!(multiply(s, x) == to_poly(canonical))) return std::nullopt;
  return x;
}

Canonicalization classify_degree_two(const LinFormMatrix& n, const Polynomial& q) {
  auto unresolved = [&](std::string note, ClassFlag flag = ClassFlag::Specialized) {
    Canonicalization c = identity_result(n, Family::Unresolved);
    c.flag = flag;
    c.note = std::move(note);
    c.common_factor = q;
    c.factor_degree = 2;
    return c;
  };
  auto ell = extract_ell(n, q);
  std::size_t dim = span_dimension(ell);
  Canonicalization c = identity_result(n, Family::Unresolved);
  c.common_factor = q;
  c.factor_degree = 2;

  if (dim == 4) {
    auto x = solve_factor(n, s1_matrix(ell), std::vector<bool>(6, false));
    if (!x) return unresolved("no X1 with N = S1 X1");
    c.family = Family::S1X1;
    c.ell = ell;
    c.X = *x;
    return c;
  }

  if (dim == 3) {
    auto rel = left_kernel_basis(coefficient_matrix(ell));
    if (rel.size() != 1) return unresolved("unexpected relation space among ell");
    std::size_t lead = 0;
    while (sgn(rel[0][lead]) == 0) ++lead;
    std::vector<std::size_t> order = {0, 1, 2, 3};
    std::swap(order[0], order[lead]);
    c.R = permutation(order);
    c.canonical = multiply(c.R, n);
    auto e2 = extract_ell(c.canonical, q);
    auto rel2 = left_kernel_basis(coefficient_matrix(e2));
    if (rel2.size() != 1 || sgn(rel2[0][0]) == 0) return unresolved("normalisation of the ell relation failed");
    std::vector<Rational> z = {rel2[0][1] / rel2[0][0], rel2[0][2] / rel2[0][0], rel2[0][3] / rel2[0][0]};
    auto x = solve_factor(c.canonical, s2_matrix(e2, z), {true, false, false, false});
    if (!x) return unresolved("no X2 with N = S2 X2");
    c.family = Family::S2X2;
    c.ell = e2;
    c.z = z;
    c.X = *x;
    return c;
  }

  if (dim == 2) {
    std::size_t a = 0, b = 0;
    bool ok = false;
    for (a = 0; a < 4 && !ok; ++a)
      for (b = a + 1; b < 4 && !ok; ++b) ok = span_dimension({ell[a], ell[b]}) == 2;
    --a;
    --b;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != a && i != b) order.push_back(i);
    order.push_back(a);
    order.push_back(b);
    c.R = permutation(order);
    c.canonical = multiply(c.R, n);
    auto e2 = extract_ell(c.canonical, q);
    // ell1 = -z31 ell3 - z41 ell4, ell2 = -z32 ell3 - z42 ell4.
    QMatrix basis(kNumVars, 2);
    for (int m = 0; m < kNumVars; ++m) {
      basis(m, 0) = e2[2][m];
      basis(m, 1) = e2[3][m];
    }
    auto s1 = linear_solve(basis, e2[0].to_vector());
    auto s2 = linear_solve(basis, e2[1].to_vector());
    if (!s1 || !s2) return unresolved("ell1, ell2 outside span(ell3, ell4)");
    std::vector<Rational> z = {-(*s1)[0], -(*s2)[0], -(*s1)[1], -(*s2)[1]};
    auto x = solve_factor(c.canonical, s3_matrix(e2, z), {true, true, false});
    if (!x) return unresolved("no X3 with N = S3 X3");
    c.family = Family::S3X3;
    c.ell = e2;
    c.z = z;
    c.X = *x;
    if (determinant(*x).is_zero()) {
      c.flag = ClassFlag::RankDeficient;
      c.note = "det X3 vanishes identically";
    }
    return c;
  }
  return unresolved("ell forms span " + std::to_string(dim) + " dimensions");
}

}  // namespace

Canonicalization classify_4x3(const LinFormMatrix& n) {
  if (n.rows() != 4 || n.cols() != 3) throw Error(ErrorCode::InvalidParams, "classify_4x3 needs a 4x3 matrix");
  auto minors = maximal_minors_signed(n);
  Polynomial g = gcd_many(minors);
  if (g.is_zero()) {
    Canonicalization c = identity_result(n, Family::Unresolved);
    c.flag = ClassFlag::RankDeficient;
    c.note = "all maximal minors vanish";
    c.factor_degree = -1;
    return c;
  }
  int deg = g.total_degree();
  if (deg == 0) {
    Canonicalization c = identity_result(n, Family::NonDegenerate);
    c.common_factor = g;
    return c;
  }
  if (deg == 1) return classify_degree_one(n, g);
  if (deg == 2) return classify_degree_two(n, g);
  Canonicalization c = identity_result(n, Family::Unresolved);
  c.flag = ClassFlag::Specialized;
  c.note = "common factor of degree 3";
  c.common_factor = g;
  c.factor_degree = deg;
  return c;
}

Canonicalization classify_3x2(const LinFormMatrix& n) {
  if (n.rows() != 3 || n.cols() != 2) throw Error(ErrorCode::InvalidParams, "classify_3x2 needs a 3x2 matrix");
  auto minors = maximal_minors_signed(n);
  Polynomial g = gcd_many(minors);
  if (g.is_zero()) {
    Canonicalization c = identity_result(n, Family::Unresolved);
    c.flag = ClassFlag::RankDeficient;
    c.note = "all maximal minors vanish";
    c.factor_degree = -1;
    return c;
  }
  if (g.total_degree() == 0) {
    Canonicalization c = identity_result(n, Family::NonDegenerate);
    c.common_factor = g;
    return c;
  }
  Rng rng = make_rng(kFitSeed);
  std::optional<Canonicalization> found;
  auto fit = [&](const QMatrix& cmat, Family f) -> std::optional<Canonicalization> {
    FormTemplate t = family_template(f);
    LinFormMatrix nc = multiply(n, cmat);
    auto r = fit_row_operation(nc, t, rng);
    if (!r) return std::nullopt;
    Canonicalization c;
    c.family = f;
    c.R = *r;
    c.C = cmat;
    c.canonical = multiply(*r, nc);
    return c;
  };
  if (g.total_degree() == 1) {
    std::vector<LinearForm> c0 = n.col(0), c1 = n.col(1);
    auto dirs = pencil_low_span(c0, c1, 1);
    std::vector<QVector> candidates = dirs.directions;
    if (dirs.all) candidates = {{Rational(1), Rational(0)}};
    for (const auto& d : candidates) {
      QMatrix base = complete_basis({d}, 2);
      if ((found = fit(base, Family::Left3x2))) break;
    }
    if (!found) found = fit(QMatrix::identity(2), Family::Right3x2);
  }
  if (!found) {
    Canonicalization c = identity_result(n, Family::Unresolved);
    c.flag = ClassFlag::Specialized;
    c.note = "no 3x2 template could be fitted";
    c.common_factor = g;
    c.factor_degree = g.total_degree();
    return c;
  }
  found->common_factor = g;
  found->factor_degree = g.total_degree();
  return *found;
}

}  // namespace critloc
