#include "critloc/rational.hpp"

#include <cctype>

#include "critloc/error.hpp"

namespace critloc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotReducible: return "NotReducible";
    case ErrorCode::NotReducibleOverQ: return "NotReducibleOverQ";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DegenerateInstance: return "DegenerateInstance";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::IncidenceMismatch: return "IncidenceMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::OnCenter: return "OnCenter";
    case ErrorCode::DependentPoints: return "DependentPoints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoInvertibleBlock: return "NoInvertibleBlock";
    case ErrorCode::CenterMismatch: return "CenterMismatch";
    case ErrorCode::ImageAtInfinity: return "ImageAtInfinity";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  if (s.front() == '+') s.erase(s.begin());

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    if (digits.empty() || digits == "-") throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  Rational q;
  if (q.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str(10);
}

bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

}  // namespace critloc
