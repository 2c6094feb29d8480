#include "critloc/random.hpp"

#include <vector>

namespace critloc {

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

Rational random_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return Rational(dist(rng));
}

LinearForm random_linear_form(Rng& rng) {
  while (true) {
    LinearForm f;
    for (int i = 0; i < kNumVars; ++i) f[i] = random_int(rng);
    if (!f.is_zero()) return f;
  }
}

QVector random_vector(Rng& rng, std::size_t n, int lo, int hi) {
  QVector v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_int(rng, lo, hi));
  return v;
}

QMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_int(rng, lo, hi);
  return m;
}

QMatrix random_invertible(Rng& rng, std::size_t n, int lo, int hi) {
  while (true) {
    QMatrix m = random_matrix(rng, n, n, lo, hi);
    if (sgn(determinant(m)) != 0) return m;
  }
}

}  // namespace critloc
