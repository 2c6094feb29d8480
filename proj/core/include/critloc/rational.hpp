#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace critloc {

// Arithmetic results are canonical. The two-integer constructor is not, so
// printing canonicalizes a copy.
using Rational = mpq_class;
using QVector = std::vector<Rational>;

// Accepts "p", "p/q", "-p/q" and plain decimal literals such as "0.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Exact square root when both numerator and denominator are perfect squares.
bool rational_sqrt(const Rational& q, Rational& root);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace critloc
