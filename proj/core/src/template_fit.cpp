#include "critloc/template_fit.hpp"

namespace critloc {

FormSystem::Expr& FormSystem::Expr::add(const Expr& o, const Rational& scale) {
  constant += o.constant * scale;
  for (const auto& [k, f] : o.terms) terms[k] += f * scale;
  return *this;
}

int FormSystem::add_scalar() { return num_unknowns_++; }

int FormSystem::add_form() {
  int base = num_unknowns_;
  num_unknowns_ += kNumVars;
  return base;
}

FormSystem::Expr FormSystem::form(int base, const Rational& c) {
  Expr e;
  for (int m = 0; m < kNumVars; ++m) e.terms[base + m] = LinearForm::variable(m) * c;
  return e;
}

FormSystem::Expr FormSystem::scalar(int index, const LinearForm& f) {
  Expr e;
  e.terms[index] = f;
  return e;
}

FormSystem::Expr FormSystem::constant(const LinearForm& f) {
  Expr e;
  e.constant = f;
  return e;
}

void FormSystem::require_zero(const Expr& e) {
  for (int m = 0; m < kNumVars; ++m) {
    std::map<int, Rational> row;
    for (const auto& [k, f] : e.terms) {
      if (sgn(f[m]) != 0) row[k] += f[m];
    }
    if (row.empty() && sgn(e.constant[m]) == 0) continue;
    rows_.push_back(std::move(row));
    rhs_.push_back(-e.constant[m]);
  }
}

std::optional<QVector> FormSystem::solve() const {
  QMatrix a(rows_.size(), num_unknowns_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [k, c] : rows_[i]) a(i, k) = c;
  if (rows_.empty()) return QVector(num_unknowns_, Rational(0));
  return linear_solve(a, rhs_);
}

std::vector<QVector> FormSystem::homogeneous_kernel() const {
  QMatrix a(rows_.size(), num_unknowns_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [k, c] : rows_[i]) a(i, k) = c;
  if (rows_.empty()) {
    std::vector<QVector> basis;
    for (int k = 0; k < num_unknowns_; ++k) {
      QVector v(num_unknowns_, Rational(0));
      v[k] = 1;
      basis.push_back(v);
    }
    return basis;
  }
  return kernel_basis(a);
}

LinearForm FormSystem::read_form(const QVector& sol, int base) {
  LinearForm f;
  for (int m = 0; m < kNumVars; ++m) f[m] = sol[base + m];
  return f;
}

std::optional<std::vector<LinearForm>> match_template(const LinFormMatrix& m, const FormTemplate& t) {
  if (m.rows() != t.rows || m.cols() != t.cols) return std::nullopt;
  FormSystem sys;
  std::vector<int> base;
  for (std::size_t s = 0; s < t.symbols.size(); ++s) base.push_back(sys.add_form());
  for (std::size_t r = 0; r < t.rows; ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      FormSystem::Expr e = FormSystem::constant(m(r, c));
      for (const auto& term : t.at(r, c)) e.add(FormSystem::form(base[term.symbol], -term.coeff));
      sys.require_zero(e);
    }
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  std::vector<LinearForm> values;
  for (int b : base) values.push_back(FormSystem::read_form(*sol, b));
  return values;
}

std::optional<QMatrix> fit_row_operation(const LinFormMatrix& m, const FormTemplate& t, Rng& rng, int attempts) {
  std::size_t n = m.rows();
  if (n != t.rows || m.cols() != t.cols) return std::nullopt;
  FormSystem sys;
  std::vector<int> r_index(n * n);
  for (auto& k : r_index) k = sys.add_scalar();
  std::vector<int> base;
  for (std::size_t s = 0; s < t.symbols.size(); ++s) base.push_back(sys.add_form());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      FormSystem::Expr e;
      for (std::size_t k = 0; k < n; ++k) e.add(FormSystem::scalar(r_index[i * n + k], m(k, c)));
      for (const auto& term : t.at(i, c)) e.add(FormSystem::form(base[term.symbol], -term.coeff));
      sys.require_zero(e);
    }
  }
  auto kernel = sys.homogeneous_kernel();
  if (kernel.empty()) return std::nullopt;

  auto build = [&](const QVector& sol) {
    QMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) r(i, k) = sol[r_index[i * n + k]];
    return r;
  };
  auto acceptable = [&](const QVector& sol, const QMatrix& r) {
    if (sgn(determinant(r)) == 0) return false;
    if (t.key_symbol >= 0 && FormSystem::read_form(sol, base[t.key_symbol]).is_zero()) return false;
    return true;
  };

  for (int attempt = 0; attempt < attempts; ++attempt) {
    QVector sol(sys.num_unknowns(), Rational(0));
    int lo = attempt < 4 ? -2 : -9, hi = attempt < 4 ? 2 : 9;
    for (const auto& v : kernel) {
      Rational w = random_int(rng, lo, hi);
      if (sgn(w) == 0) continue;
      for (std::size_t k = 0; k < sol.size(); ++k) sol[k] += w * v[k];
    }
    QMatrix r = build(sol);
    if (acceptable(sol, r)) return r;
  }
  return std::nullopt;
}

std::optional<Equivalence> find_equivalence(const LinFormMatrix& a, const LinFormMatrix& b, Rng& rng, int attempts) {
  std::size_t n = a.rows(), m = a.cols();
  if (b.rows() != n || b.cols() != m) return std::nullopt;
  FormSystem sys;
  std::vector<int> r_index(n * n), c_index(m * m);
  for (auto& k : r_index) k = sys.add_scalar();
  for (auto& k : c_index) k = sys.add_scalar();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      FormSystem::Expr e;
      for (std::size_t k = 0; k < n; ++k) e.add(FormSystem::scalar(r_index[i * n + k], a(k, j)));
      for (std::size_t l = 0; l < m; ++l) e.add(FormSystem::scalar(c_index[l * m + j], -b(i, l)));
      sys.require_zero(e);
    }
  }
  auto kernel = sys.homogeneous_kernel();
  if (kernel.empty()) return std::nullopt;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    QVector sol(sys.num_unknowns(), Rational(0));
    for (const auto& v : kernel) {
      Rational w = random_int(rng);
      for (std::size_t k = 0; k < sol.size(); ++k) sol[k] += w * v[k];
    }
    Equivalence eq{QMatrix(n, n), QMatrix(m, m)};
    for (std::size_t i = 0; i < n * n; ++i) eq.R(i / n, i % n) = sol[r_index[i]];
    for (std::size_t i = 0; i < m * m; ++i) eq.C(i / m, i % m) = sol[c_index[i]];
    if (sgn(determinant(eq.R)) != 0 && sgn(determinant(eq.C)) != 0) return eq;
  }
  return std::nullopt;
}

}  // namespace critloc
