#include "critloc/poly_algebra.hpp"

#include <algorithm>
#include <array>

namespace critloc {

namespace {

Polynomial lead_coefficient_in(const Polynomial& f, int var) {
  return f.coefficients_in(var).back();
}

Polynomial var_power(int var, int k) {
  Exponent e{};
  e[var] = static_cast<std::uint8_t>(k);
  return Polynomial::monomial(e, Rational(1));
}

int choose_main_variable(const Polynomial& f, const Polynomial& g) {
  int best = -1;
  std::size_t best_count = 0;
  for (int v = 0; v < kNumVars; ++v) {
    std::size_t count = 0;
    for (const auto& [e, c] : f.terms()) count += e[v] > 0;
    for (const auto& [e, c] : g.terms()) count += e[v] > 0;
    if (count == 0) continue;
    if (best < 0 || count < best_count) {
      best = v;
      best_count = count;
    }
  }
  return best;
}

Polynomial gcd_rec(const Polynomial& f, const Polynomial& g);

using UniPoly = std::vector<Rational>;  // index = power of s

void trim(UniPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
  while (a.size() >= b.size()) {
    Rational q = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

// f(s*a + b) as coefficients in s.
UniPoly restrict_to(const Polynomial& f, const std::array<int, kNumVars>& a, const std::array<int, kNumVars>& b) {
  std::array<Polynomial, kNumVars> images;
  for (int i = 0; i < kNumVars; ++i) images[i] = Polynomial::variable(0) * Rational(a[i]) + Polynomial(Rational(b[i]));
  Polynomial r = f.compose(images);
  UniPoly out(std::max(r.degree_in(0), 0) + 1, Rational(0));
  for (const auto& [e, c] : r.terms()) out[e[0]] = c;
  trim(out);
  return out;
}

// Returns true when gcd(f, g) is certainly constant. Restricting to a line
// through a point where f keeps its top degree can only raise the gcd degree.
bool coprime_on_line(const Polynomial& f, const Polynomial& g) {
  static const std::array<std::array<int, kNumVars>, 4> kPoints = {{
      {3, -1, 4, 1, -5}, {2, 7, -1, 8, 2}, {-6, 1, 5, -3, 4}, {1, 9, -2, 6, -7},
  }};
  static const std::array<int, kNumVars> kOffset = {5, 3, -2, -7, 1};
  for (const auto& a : kPoints) {
    UniPoly rf = restrict_to(f, a, kOffset);
    if (static_cast<int>(rf.size()) - 1 != f.total_degree()) continue;
    UniPoly rg = restrict_to(g, a, kOffset);
    while (!rg.empty()) {
      UniPoly r = uni_rem(rf, rg);
      rf = std::move(rg);
      rg = std::move(r);
    }
    return rf.size() == 1;
  }
  return false;
}

Polynomial content_in(const Polynomial& f, int var) {
  Polynomial c;
  for (const auto& coeff : f.coefficients_in(var)) {
    if (coeff.is_zero()) continue;
    c = gcd_rec(c, coeff);
    if (c.is_constant()) break;
  }
  return c;
}

Polynomial primitive_part_in(const Polynomial& f, int var) {
  if (f.is_zero()) return f;
  return divide_exact(f, content_in(f, var));
}

Polynomial gcd_rec(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero()) return g.normalized();
  if (g.is_zero()) return f.normalized();
  if (f.is_constant() || g.is_constant()) return Polynomial(1);
  if (coprime_on_line(f, g)) return Polynomial(1);

  int v = choose_main_variable(f, g);
  if (!f.contains_variable(v)) return gcd_rec(f, content_in(g, v));
  if (!g.contains_variable(v)) return gcd_rec(content_in(f, v), g);

  Polynomial cf = content_in(f, v);
  Polynomial cg = content_in(g, v);
  Polynomial c = gcd_rec(cf, cg);
  Polynomial a = divide_exact(f, cf);
  Polynomial b = divide_exact(g, cg);
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);

  Polynomial h;
  while (true) {
    Polynomial r = pseudo_remainder(a, b, v);
    if (r.is_zero()) {
      h = b;
      break;
    }
    if (!r.contains_variable(v)) {
      h = Polynomial(1);
      break;
    }
    a = std::move(b);
    b = primitive_part_in(r, v).normalized();
  }
  return (c * primitive_part_in(h, v)).normalized();
}

void check_degree(const Polynomial& f) {
  if (f.total_degree() > kMaxGcdDegree) {
    throw Error(ErrorCode::UnsupportedDegree,
                "gcd supports total degree <= 3, got " + std::to_string(f.total_degree()));
  }
}

}  // namespace

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int var) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidParams, "pseudo-remainder by zero");
  int db = b.degree_in(var);
  Polynomial lb = lead_coefficient_in(b, var);
  Polynomial r = a;
  while (!r.is_zero() && r.degree_in(var) >= db) {
    int dr = r.degree_in(var);
    Polynomial lr = lead_coefficient_in(r, var);
    r = lb * r - lr * var_power(var, dr - db) * b;
  }
  return r;
}

Polynomial gcd_unchecked(const Polynomial& f, const Polynomial& g) { return gcd_rec(f, g); }

Polynomial gcd_many_unchecked(const std::vector<Polynomial>& polys) {
  Polynomial g;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    g = gcd_rec(g, p);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial gcd(const Polynomial& f, const Polynomial& g) {
  check_degree(f);
  check_degree(g);
  return gcd_rec(f, g);
}

Polynomial gcd_many(const std::vector<Polynomial>& polys) {
  for (const auto& p : polys) check_degree(p);
  return gcd_many_unchecked(polys);
}

Polynomial divide_exact(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw Error(ErrorCode::InvalidParams, "division by zero polynomial");
  const Exponent& eg = g.leading_exponent();
  const Rational& cg = g.leading_coefficient();
  Polynomial q, r = f;
  while (!r.is_zero()) {
    const Exponent& er = r.leading_exponent();
    Exponent e;
    for (int i = 0; i < kNumVars; ++i) {
      if (er[i] < eg[i]) throw Error(ErrorCode::NotDivisible, f.to_string() + " by " + g.to_string());
      e[i] = static_cast<std::uint8_t>(er[i] - eg[i]);
    }
    Polynomial t = Polynomial::monomial(e, r.leading_coefficient() / cg);
    q += t;
    r -= t * g;
  }
  return q;
}

bool divides(const Polynomial& g, const Polynomial& f) {
  try {
    divide_exact(f, g);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotDivisible) return false;
    throw;
  }
}

QMatrix coefficient_matrix(const std::vector<LinearForm>& forms) {
  QMatrix m(forms.size(), kNumVars);
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (int j = 0; j < kNumVars; ++j) m(i, j) = forms[i][j];
  return m;
}

std::size_t span_dimension(const std::vector<LinearForm>& forms) {
  if (forms.empty()) return 0;
  return rank(coefficient_matrix(forms));
}

BinaryRoots binary_form_roots(const Polynomial& f) {
  BinaryRoots out;
  if (f.is_zero()) {
    out.identically_zero = true;
    return out;
  }
  auto hd = f.homogeneous_degree();
  if (!hd) throw Error(ErrorCode::InvalidParams, "binary form must be homogeneous");
  for (const auto& [e, c] : f.terms()) {
    if (e[2] || e[3] || e[4]) throw Error(ErrorCode::InvalidParams, "binary form may only use x1, x2");
  }
  int d = *hd;
  out.degree = d;
  // h(s) = f(s, 1); coefficient index = power of s.
  std::vector<Rational> h(d + 1, Rational(0));
  for (const auto& [e, c] : f.terms()) h[e[0]] = c;
  int deg = d;
  while (deg > 0 && sgn(h[deg]) == 0) --deg;
  if (deg < d) out.roots.push_back({Rational(1), Rational(0)});
  if (deg == 1) {
    out.roots.push_back({-h[0] / h[1], Rational(1)});
  } else if (deg == 2) {
    Rational disc = h[1] * h[1] - 4 * h[2] * h[0];
    Rational root;
    if (rational_sqrt(disc, root)) {
      Rational r1 = (-h[1] + root) / (2 * h[2]);
      Rational r2 = (-h[1] - root) / (2 * h[2]);
      out.roots.push_back({r1, Rational(1)});
      if (r2 != r1) out.roots.push_back({r2, Rational(1)});
    } else {
      out.complete = false;
    }
  } else if (deg >= 3) {
    out.complete = false;
  }
  return out;
}

std::vector<Rational> restrict_to_line(const Polynomial& f, const QVector& a, const QVector& b) {
  std::array<Polynomial, kNumVars> images;
  Polynomial t = Polynomial::variable(0);
  for (int i = 0; i < kNumVars; ++i) images[i] = Polynomial(a[i]) + b[i] * t;
  Polynomial r = f.compose(images);
  std::vector<Rational> out;
  for (const auto& c : r.coefficients_in(0)) out.push_back(c.is_zero() ? Rational(0) : c.leading_coefficient());
  return out;
}

QMatrix quadric_matrix(const Polynomial& f) {
  QMatrix s(kNumVars, kNumVars);
  for (const auto& [e, c] : f.terms()) {
    if (total_degree(e) != 2) throw Error(ErrorCode::InvalidParams, "not a quadratic form: " + f.to_string());
    std::vector<int> idx;
    for (int i = 0; i < kNumVars; ++i)
      for (int k = 0; k < e[i]; ++k) idx.push_back(i);
    if (idx[0] == idx[1]) {
      s(idx[0], idx[0]) += c;
    } else {
      s(idx[0], idx[1]) += c / 2;
      s(idx[1], idx[0]) += c / 2;
    }
  }
  return s;
}

}  // namespace critloc
