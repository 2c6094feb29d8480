#include <array>

#include "critloc/classify.hpp"
#include "critloc/poly_algebra.hpp"

namespace critloc {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::S1X1: return "S1X1";
    case Family::S2X2: return "S2X2";
    case Family::S3X3: return "S3X3";
    case Family::NonDegenerate: return "NonDegenerate";
    case Family::Left3x2: return "Left3x2";
    case Family::Right3x2: return "Right3x2";
    case Family::Unresolved: return "Unresolved";
  }
  return "?";
}

std::string_view to_string(ClassFlag f) {
  switch (f) {
    case ClassFlag::None: return "none";
    case ClassFlag::Specialized: return "specialized";
    case ClassFlag::RankDeficient: return "rank-deficient";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::S1X1, Family::S2X2, Family::S3X3,
                   Family::NonDegenerate, Family::Left3x2, Family::Right3x2, Family::Unresolved}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

namespace {

using Cell = std::vector<TemplateTerm>;

FormTemplate make_template(std::string name, std::vector<std::string> symbols, std::size_t rows, std::size_t cols,
                           std::vector<Cell> cells, int key) {
  FormTemplate t;
  t.name = std::move(name);
  t.rows = rows;
  t.cols = cols;
  t.symbols = std::move(symbols);
  t.entries = std::move(cells);
  t.key_symbol = key;
  return t;
}

Cell sym(int s) { return {{s, Rational(1)}}; }

Cell combo(int s1, const Rational& c1, int s2, const Rational& c2) {
  Cell cell;
  if (sgn(c1) != 0) cell.push_back({s1, c1});
  if (sgn(c2) != 0) cell.push_back({s2, c2});
  return cell;
}

}  // namespace

FormTemplate family_template(Family f, const Rational& alpha, const Rational& beta) {
  const Cell z{};
  switch (f) {
    case Family::A: {
      enum { n11, n12, n21, n22, n31, n32, n41, n42, n43 };
      return make_template("A", {"n11", "n12", "n21", "n22", "n31", "n32", "n41", "n42", "n43"}, 4, 3,
                           {sym(n11), sym(n12), z,  //
                            sym(n21), sym(n22), z,  //
                            sym(n31), sym(n32), z,  //
                            sym(n41), sym(n42), sym(n43)},
                           n43);
    }
    case Family::B: {
      enum { n13, n31, n32, n33, n41, n42, n43 };
      return make_template("B", {"n13", "n31", "n32", "n33", "n41", "n42", "n43"}, 4, 3,
                           {z, z, sym(n13),                //
                            z, sym(n13), z,                //
                            sym(n31), sym(n32), sym(n33),  //
                            sym(n41), sym(n42), sym(n43)},
                           n13);
    }
    case Family::C: {
      enum { n31, n22, n41, n42 };
      return make_template("C", {"n31", "n22", "n41", "n42"}, 4, 3,
                           {z, z, combo(n31, alpha, n22, beta),  //
                            z, sym(n22), combo(n41, alpha, 0, 0),  //
                            sym(n31), z, combo(n42, beta, 0, 0),   //
                            sym(n41), sym(n42), z},
                           -1);
    }
    case Family::D: {
      enum { n13, n31, n23, n33, n41, n42, n43 };
      return make_template("D", {"n13", "n31", "n23", "n33", "n41", "n42", "n43"}, 4, 3,
                           {z, z, sym(n13),           //
                            z, sym(n31), sym(n23),    //
                            sym(n31), z, sym(n33),    //
                            sym(n41), sym(n42), sym(n43)},
                           n31);
    }
    case Family::Left3x2: {
      enum { n12, n22, n31, n32 };
      return make_template("Left3x2", {"n12", "n22", "n31", "n32"}, 3, 2,
                           {z, sym(n12), z, sym(n22), sym(n31), sym(n32)}, n31);
    }
    case Family::Right3x2: {
      enum { n12, n31, n32 };
      return make_template("Right3x2", {"n12", "n31", "n32"}, 3, 2,
                           {z, sym(n12), sym(n12), z, sym(n31), sym(n32)}, n12);
    }
    default:
      throw Error(ErrorCode::InvalidParams, "no form template for family " + std::string(to_string(f)));
  }
}

PolyMatrix s1_matrix(const std::vector<LinearForm>& ell) {
  auto l = [&](int i) { return ell.at(i - 1).to_polynomial(); };
  Polynomial o;
  return PolyMatrix{{o, -l(3), l(2), o, o, l(4)},
                    {l(3), o, -l(1), o, l(4), o},
                    {-l(2), l(1), o, l(4), o, o},
                    {o, o, o, -l(3), -l(2), -l(1)}};
}

PolyMatrix s2_matrix(const std::vector<LinearForm>& ell, const std::vector<Rational>& z) {
  auto l = [&](int i) { return ell.at(i - 1).to_polynomial(); };
  Polynomial o, one(1);
  return PolyMatrix{{one, o, o, o},
                    {Polynomial(z.at(0)), o, -l(4), l(3)},
                    {Polynomial(z.at(1)), l(4), o, -l(2)},
                    {Polynomial(z.at(2)), -l(3), l(2), o}};
}

PolyMatrix s3_matrix(const std::vector<LinearForm>& ell, const std::vector<Rational>& z) {
  auto l = [&](int i) { return ell.at(i - 1).to_polynomial(); };
  Polynomial o, one(1);
  return PolyMatrix{{one, o, o},
                    {o, one, o},
                    {Polynomial(z.at(0)), Polynomial(z.at(1)), -l(4)},
                    {Polynomial(z.at(2)), Polynomial(z.at(3)), l(3)}};
}

int expected_factor_degree(Family f) {
  switch (f) {
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::Left3x2:
    case Family::Right3x2: return 1;
    case Family::S1X1:
    case Family::S2X2:
    case Family::S3X3: return 2;
    default: return 0;
  }
}

bool family_realizable(Family f) {
  switch (f) {
    case Family::A:
    case Family::B:
    case Family::D:
    case Family::S1X1:
    case Family::S2X2:
    case Family::S3X3: return true;
    default: return false;
  }
}

namespace {

int minors_gcd_degree(const LinFormMatrix& n) {
  auto minors = maximal_minors_signed(n);
  Polynomial g = gcd_many_unchecked(minors);
  return g.is_zero() ? -1 : g.total_degree();
}

std::vector<LinearForm> full_ell(Family f, const std::vector<LinearForm>& given, const std::vector<Rational>& z) {
  std::vector<LinearForm> ell(4);
  if (f == Family::S1X1) {
    if (given.size() != 4) throw Error(ErrorCode::InvalidParams, "S1X1 needs ell1..ell4");
    ell = given;
  } else if (f == Family::S2X2) {
    if (given.size() != 3 || z.size() != 3) throw Error(ErrorCode::InvalidParams, "S2X2 needs ell2..ell4 and z2..z4");
    ell[1] = given[0];
    ell[2] = given[1];
    ell[3] = given[2];
    ell[0] = -(ell[1] * z[0] + ell[2] * z[1] + ell[3] * z[2]);
  } else {
    if (given.size() != 2 || z.size() != 4) throw Error(ErrorCode::InvalidParams, "S3X3 needs ell3, ell4 and four z");
    ell[2] = given[0];
    ell[3] = given[1];
    ell[0] = -(ell[2] * z[0] + ell[3] * z[2]);
    ell[1] = -(ell[2] * z[1] + ell[3] * z[3]);
  }
  return ell;
}

}  // namespace

LinFormMatrix build_family(Family f, const FamilyParams& params) {
  LinFormMatrix out;
  switch (f) {
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::Left3x2:
    case Family::Right3x2: {
      if (f == Family::C && sgn(params.alpha) == 0 && sgn(params.beta) == 0) {
        throw Error(ErrorCode::InvalidParams, "family C needs (alpha, beta) != (0, 0)");
      }
      FormTemplate t = family_template(f, params.alpha, params.beta);
      if (params.forms.size() != t.symbols.size()) {
        throw Error(ErrorCode::InvalidParams, "family " + t.name + " needs " + std::to_string(t.symbols.size()) +
                                                  " forms");
      }
      out = LinFormMatrix(t.rows, t.cols);
      for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c)
          for (const auto& term : t.at(r, c)) out(r, c) += params.forms[term.symbol] * term.coeff;
      break;
    }
    case Family::S1X1:
    case Family::S2X2:
    case Family::S3X3: {
      auto ell = full_ell(f, params.ell, params.z);
      PolyMatrix s = f == Family::S1X1   ? s1_matrix(ell)
                     : f == Family::S2X2 ? s2_matrix(ell, params.z)
                                         : s3_matrix(ell, params.z);
      if (params.X.rows() != s.cols() || params.X.cols() != 3) {
        throw Error(ErrorCode::InvalidParams, "X has the wrong shape for " + std::string(to_string(f)));
      }
      std::size_t want_span = f == Family::S1X1 ? 4 : f == Family::S2X2 ? 3 : 2;
      if (span_dimension(ell) != want_span) throw Error(ErrorCode::InvalidParams, "dependent ell forms");
      out = from_polynomials(multiply(s, params.X));
      break;
    }
    default:
      throw Error(ErrorCode::InvalidParams, "cannot build family " + std::string(to_string(f)));
  }
  if (out.rows() == 4 && minors_gcd_degree(out) != expected_factor_degree(f)) {
    throw Error(ErrorCode::InvalidParams, "parameters give the wrong common-factor degree");
  }
  return out;
}

FamilyParams random_family_params(Family f, Rng& rng) {
  FamilyParams p;
  auto forms = [&](std::size_t n) {
    std::vector<LinearForm> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_linear_form(rng));
    return v;
  };
  auto nonzero = [&]() {
    Rational r;
    do r = random_int(rng); while (sgn(r) == 0);
    return r;
  };
  switch (f) {
    case Family::A: p.forms = forms(9); break;
    case Family::B:
    case Family::D: p.forms = forms(7); break;
    case Family::C:
      p.forms = forms(4);
      p.alpha = nonzero();
      p.beta = nonzero();
      break;
    case Family::Left3x2: p.forms = forms(4); break;
    case Family::Right3x2: p.forms = forms(3); break;
    case Family::S1X1: {
      p.ell = forms(4);
      p.X = to_poly(random_matrix(rng, 6, 3));
      break;
    }
    case Family::S2X2: {
      p.ell = forms(3);
      p.z = random_vector(rng, 3);
      p.X = PolyMatrix(4, 3);
      for (std::size_t c = 0; c < 3; ++c) {
        p.X(0, c) = random_linear_form(rng).to_polynomial();
        for (std::size_t r = 1; r < 4; ++r) p.X(r, c) = Polynomial(random_int(rng));
      }
      break;
    }
    case Family::S3X3: {
      p.ell = forms(2);
      p.z = random_vector(rng, 4);
      p.X = PolyMatrix(3, 3);
      for (std::size_t c = 0; c < 3; ++c) {
        p.X(0, c) = random_linear_form(rng).to_polynomial();
        p.X(1, c) = random_linear_form(rng).to_polynomial();
        p.X(2, c) = Polynomial(random_int(rng));
      }
      break;
    }
    default:
      throw Error(ErrorCode::InvalidParams, "no random parameters for family " + std::string(to_string(f)));
  }
  return p;
}

LinFormMatrix random_family_instance(Family f, Rng& rng, int* draws) {
  for (int attempt = 1; attempt <= 100; ++attempt) {
    try {
      LinFormMatrix m = build_family(f, random_family_params(f, rng));
      if (draws) *draws = attempt;
      return m;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidParams) throw;
    }
  }
  throw Error(ErrorCode::SamplingFailed, "no valid draw for family " + std::string(to_string(f)));
}

LinFormMatrix random_generic_4x3(Rng& rng) {
  LinFormMatrix m(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = random_linear_form(rng);
  return m;
}

bool certificate_valid(const LinFormMatrix& n, const Canonicalization& c, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (c.R.rows() != n.rows() || c.C.rows() != n.cols()) return fail("certificate has the wrong shape");
  if (sgn(determinant(c.R)) == 0) return fail("R is singular");
  if (sgn(determinant(c.C)) == 0) return fail("C is singular");
  if (!(transform(c.R, n, c.C) == c.canonical)) return fail("canonical != R*N*C");
  auto minors = maximal_minors_signed(n);
  if (c.common_factor.is_zero()) {
    for (const auto& m : minors)
      if (!m.is_zero()) return fail("zero common factor but nonzero minors");
  } else {
    for (const auto& m : minors)
      if (!divides(c.common_factor, m)) return fail("common factor does not divide a minor");
    Polynomial g = gcd_many_unchecked(minors);
    if (g.is_zero() || divide_exact(g, c.common_factor).total_degree() != 0) {
      return fail("common factor is not the gcd of the minors");
    }
  }
  switch (c.family) {
    case Family::A:
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::Left3x2:
    case Family::Right3x2: {
      auto values = match_template(c.canonical, family_template(c.family, c.alpha, c.beta));
      if (!values) return fail("canonical does not match the family template");
      return true;
    }
    case Family::S1X1:
    case Family::S2X2:
    case Family::S3X3: {
      PolyMatrix s = c.family == Family::S1X1   ? s1_matrix(c.ell)
                     : c.family == Family::S2X2 ? s2_matrix(c.ell, c.z)
                                                : s3_matrix(c.ell, c.z);
      if (!(multiply(s, c.X) == to_poly(c.canonical))) return fail("canonical != S*X");
      std::size_t want = c.family == Family::S1X1 ? 4 : c.family == Family::S2X2 ? 3 : 2;
      if (span_dimension(c.ell) != want) return fail("ell span has the wrong dimension");
      return true;
    }
    case Family::NonDegenerate:
      if (!c.common_factor.is_constant()) return fail("nondegenerate with a nonconstant factor");
      return true;
    default:
      return fail("unresolved classification");
  }
}

}  // namespace critloc
