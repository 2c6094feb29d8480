#include "critloc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "critloc/error.hpp"

namespace critloc {

int total_degree(const Exponent& e) {
  int d = 0;
  for (auto a : e) d += a;
  return d;
}

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

Polynomial::Polynomial(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Exponent{}, c);
}

Polynomial Polynomial::variable(int index) {
  Exponent e{};
  e.at(index) = 1;
  return monomial(e, Rational(1));
}

Polynomial Polynomial::monomial(const Exponent& e, const Rational& c) {
  Polynomial p;
  if (sgn(c) != 0) p.terms_.emplace(e, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && critloc::total_degree(terms_.begin()->first) == 0);
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return critloc::total_degree(terms_.begin()->first);
}

std::optional<int> Polynomial::homogeneous_degree() const {
  if (terms_.empty()) return 0;
  int d = critloc::total_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_) {
    if (critloc::total_degree(e) != d) return std::nullopt;
  }
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max<int>(d, e[var]);
  return d;
}

const Exponent& Polynomial::leading_exponent() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidParams, "leading term of zero polynomial");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidParams, "leading term of zero polynomial");
  return terms_.begin()->second;
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
  std::vector<Polynomial> out(degree_in(var) + 1);
  for (const auto& [e, c] : terms_) {
    Exponent rest = e;
    int k = rest[var];
    rest[var] = 0;
    out[k].add_term(rest, c);
  }
  return out;
}

Polynomial Polynomial::normalized() const {
  if (terms_.empty()) return *this;
  Rational inv = 1 / leading_coefficient();
  return *this * inv;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < kNumVars; ++i) {
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  double sum = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < kNumVars; ++i) {
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::compose(const std::array<Polynomial, kNumVars>& images) const {
  std::array<std::vector<Polynomial>, kNumVars> powers;
  for (int i = 0; i < kNumVars; ++i) {
    powers[i].push_back(Polynomial(1));
    int d = degree_in(i);
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Polynomial t(c);
    for (int i = 0; i < kNumVars; ++i) {
      if (e[i] > 0) t *= powers[i][e[i]];
    }
    out += t;
  }
  return out;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e;
      for (int i = 0; i < kNumVars; ++i) {
        int s = ea[i] + eb[i];
        if (s > 255) throw Error(ErrorCode::UnsupportedDegree, "exponent overflow");
        e[i] = static_cast<std::uint8_t>(s);
      }
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial operator-(Polynomial a) {
  for (auto& [e, c] : a.terms_) c = -c;
  return a;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool constant = critloc::total_degree(e) == 0;
    bool wrote = false;
    if (mag != 1 || constant) {
      out << critloc::to_string(mag);
      wrote = true;
    }
    for (int i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << "*";
      out << "x" << (i + 1);
      if (e[i] > 1) out << "^" << int(e[i]);
      wrote = true;
    }
  }
  return out.str();
}

namespace {

Polynomial parse_term(const std::string& body, bool negative) {
  Polynomial term(Rational(negative ? -1 : 1));
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t star = body.find('*', pos);
    std::string factor = body.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    if (factor.empty()) throw Error(ErrorCode::ParseError, "empty factor in '" + body + "'");
    if (factor[0] == 'x') {
      std::size_t caret = factor.find('^');
      int var = std::stoi(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
      int power = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
      if (var < 1 || var > kNumVars || power < 0) {
        throw Error(ErrorCode::ParseError, "bad variable factor '" + factor + "'");
      }
      Exponent e{};
      e[var - 1] = static_cast<std::uint8_t>(power);
      term *= Polynomial::monomial(e, Rational(1));
    } else {
      term *= parse_rational(factor);
    }
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  return term;
}

}  // namespace

Polynomial Polynomial::parse(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty polynomial");
  Polynomial out;
  std::size_t start = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    start = 1;
  }
  for (std::size_t i = start; i <= s.size(); ++i) {
    bool split = i == s.size();
    if (!split && (s[i] == '+' || s[i] == '-') && i > start) {
      char prev = s[i - 1];
      split = prev != '*' && prev != '/' && prev != '^';
    }
    if (!split) continue;
    std::string body = s.substr(start, i - start);
    bool neg = negative;
    while (!body.empty() && (body[0] == '-' || body[0] == '+')) {
      if (body[0] == '-') neg = !neg;
      body.erase(body.begin());
    }
    if (body.empty()) throw Error(ErrorCode::ParseError, "dangling sign in '" + s + "'");
    out += parse_term(body, neg);
    if (i < s.size()) {
      negative = s[i] == '-';
      start = i + 1;
    }
  }
  return out;
}

LinearForm::LinearForm(std::initializer_list<Rational> coeffs) {
  if (coeffs.size() != kNumVars) throw Error(ErrorCode::InvalidParams, "linear form needs 5 coefficients");
  std::copy(coeffs.begin(), coeffs.end(), coeffs_.begin());
}

LinearForm LinearForm::variable(int index) {
  LinearForm f;
  f.coeffs_.at(index) = 1;
  return f;
}

LinearForm LinearForm::from_polynomial(const Polynomial& p) {
  LinearForm f;
  for (const auto& [e, c] : p.terms()) {
    if (total_degree(e) != 1) throw Error(ErrorCode::InvalidParams, "not a linear form: " + p.to_string());
    for (int i = 0; i < kNumVars; ++i) {
      if (e[i] == 1) f.coeffs_[i] = c;
    }
  }
  return f;
}

bool LinearForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) == 0; });
}

Polynomial LinearForm::to_polynomial() const {
  Polynomial p;
  for (int i = 0; i < kNumVars; ++i) {
    Exponent e{};
    e[i] = 1;
    p += Polynomial::monomial(e, coeffs_[i]);
  }
  return p;
}

Rational LinearForm::evaluate(std::span<const Rational> point) const {
  Rational s = 0;
  for (int i = 0; i < kNumVars; ++i) s += coeffs_[i] * point[i];
  return s;
}

double LinearForm::evaluate(std::span<const double> point) const {
  double s = 0;
  for (int i = 0; i < kNumVars; ++i) s += coeffs_[i].get_d() * point[i];
  return s;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  for (int i = 0; i < kNumVars; ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  for (int i = 0; i < kNumVars; ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& c) {
  for (auto& a : coeffs_) a *= c;
  return *this;
}

}  // namespace critloc
