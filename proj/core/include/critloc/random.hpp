#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "critloc/matrix.hpp"
#include "critloc/polynomial.hpp"

namespace critloc {

using Rng = std::mt19937_64;

// Independent stream for a (seed, indices...) tuple.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

Rational random_int(Rng& rng, int lo = -9, int hi = 9);
// Integer coefficients in [-9, 9]; the zero form is redrawn.
LinearForm random_linear_form(Rng& rng);
QVector random_vector(Rng& rng, std::size_t n, int lo = -9, int hi = 9);
QMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int lo = -9, int hi = 9);
QMatrix random_invertible(Rng& rng, std::size_t n, int lo = -9, int hi = 9);

}  // namespace critloc
