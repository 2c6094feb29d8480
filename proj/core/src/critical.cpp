#include "critloc/critical.hpp"

#include <algorithm>

#include "critloc/multiview.hpp"
#include "critloc/poly_algebra.hpp"

namespace critloc {

std::string_view to_string(FixtureCase c) {
  switch (c) {
    case FixtureCase::ScrollI: return "scroll_i";
    case FixtureCase::ConeIV: return "cone_iv";
    case FixtureCase::QuadricV: return "quadric_v";
  }
  return "?";
}

std::optional<FixtureCase> fixture_case_from_string(std::string_view s) {
  for (FixtureCase c : {FixtureCase::ScrollI, FixtureCase::ConeIV, FixtureCase::QuadricV}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

CameraPairConfig fixture(FixtureCase c) {
  CameraPairConfig cfg;
  switch (c) {
    case FixtureCase::ScrollI:
      cfg.P[0] = QMatrix{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}};
      cfg.P[1] = QMatrix{{1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
      cfg.P[2] = QMatrix{{q(10158, 25), 729, 4050, q(31152, 5), -3645},
                         {608, q(-13692, 25), 1900, 836, q(13692, 5)},
                         {288, 162, q(258, 25), 396, -810}};
      cfg.Q[0] = QMatrix{{-1, 0, -1, 0, 0}, {0, -1, 0, -1, 0}, {0, 0, 0, 0, -1}};
      cfg.Q[1] = QMatrix{{0, 0, q(55, 51), q(-75, 34), q(-625, 51)}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}};
      cfg.Q[2] = QMatrix{{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
      break;
    case FixtureCase::ConeIV:
      cfg.P[0] = QMatrix{{0, 1, -6, -2, 4}, {-1, 0, -15, -5, 10}, {0, 0, -3, -1, 2}};
      cfg.P[1] = QMatrix{{-35, -42, -47, 13, -32}, {-8, -12, -11, 4, -8}, {-2, -3, -2, 1, -2}};
      cfg.P[2] = QMatrix{{-2, 3, -12, 6, 3}, {4, 6, 0, -8, 6}, {2, 3, 0, -2, 3}};
      cfg.Q[0] = QMatrix{{2, 1, -4, 1, -2}, {5, -2, 8, 0, 0}, {1, 0, 0, 0, 0}};
      cfg.Q[1] = QMatrix{{0, 5, -4, 3, -6}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}};
      cfg.Q[2] = QMatrix{{0, 1, -4, -2, 5}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
      break;
    case FixtureCase::QuadricV:
      cfg.P[0] = QMatrix{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}};
      cfg.P[1] = QMatrix{{0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {1, 1, 1, 0, 0}};
      cfg.P[2] = QMatrix{{0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {1, 1, 1, 1, 0}};
      cfg.Q[0] = QMatrix{{-1, 0, 0, 0, 0}, {0, 0, -1, 0, 0}, {0, 0, 0, -1, 0}};
      cfg.Q[1] = QMatrix{{0, 0, 0, 0, -1}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}};
      cfg.Q[2] = QMatrix{{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
      break;
  }
  return cfg;
}

QMatrix cone_x1_stated() { return QMatrix{{0, 6, 0}, {0, -3, 0}, {1, 0, 0}, {0, -3, 12}, {0, 0, 0}, {0, 0, 4}}; }

QMatrix cone_x1_realized() {
  QMatrix x = cone_x1_stated();
  x(0, 1) = -6;
  return x;
}

Polynomial cone_equation() { return Polynomial::parse("x1^2 - 2*x1*x2 + 3*x3*x1 + x1*x4 - 6*x3*x2"); }

void validate(const CameraPairConfig& cfg) {
  QMatrix stacked(9, 5);
  for (std::size_t b = 0; b < 3; ++b) {
    for (const QMatrix* m : {&cfg.P[b], &cfg.Q[b]}) {
      if (m->rows() != 3 || m->cols() != 5) throw Error(ErrorCode::InvalidConfig, "cameras must be 3x5");
      if (rank(*m) != 3) throw Error(ErrorCode::InvalidConfig, "camera " + std::to_string(b + 1) + " has rank below 3");
    }
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 5; ++c) stacked(3 * b + r, c) = cfg.Q[b](r, c);
  }
  if (rank(stacked) != 5) throw Error(ErrorCode::InvalidConfig, "stacked Q matrices must have rank 5");
}

namespace {

LinFormMatrix linear_block(const CameraPairConfig& cfg) {
  LinFormMatrix a(9, 3);
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t r = 0; r < 3; ++r) {
      LinearForm f;
      for (int c = 0; c < kNumVars; ++c) f[c] = cfg.P[b](r, c);
      a(3 * b + r, b) = f;
    }
  return a;
}

QMatrix constant_block(const CameraPairConfig& cfg) {
  QMatrix q(9, 5);
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 5; ++c) q(3 * b + r, c) = cfg.Q[b](r, c);
  return q;
}

std::vector<std::size_t> complement(const std::array<std::size_t, 4>& top) {
  std::vector<std::size_t> rest;
  for (std::size_t r = 0; r < 9; ++r)
    if (std::find(top.begin(), top.end(), r) == top.end()) rest.push_back(r);
  return rest;
}

std::vector<std::size_t> range(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

PolyMatrix assemble_M(const CameraPairConfig& cfg) {
  validate(cfg);
  LinFormMatrix a = linear_block(cfg);
  QMatrix q = constant_block(cfg);
  PolyMatrix m(9, 8);
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = a(r, c).to_polynomial();
    for (std::size_t c = 0; c < 5; ++c) m(r, 3 + c) = Polynomial(q(r, c));
  }
  return m;
}

QMatrix evaluate_M(const CameraPairConfig& cfg, const QVector& point) {
  if (point.size() != 5) throw Error(ErrorCode::InvalidParams, "scene point must have 5 coordinates");
  LinFormMatrix a = linear_block(cfg);
  QMatrix q = constant_block(cfg);
  QMatrix m(9, 8);
  for (std::size_t r = 0; r < 9; ++r) {
    for (std::size_t c = 0; c < 3; ++c) m(r, c) = a(r, c).evaluate(point);
    for (std::size_t c = 0; c < 5; ++c) m(r, 3 + c) = q(r, c);
  }
  return m;
}

std::vector<std::array<std::size_t, 4>> valid_partitions(const CameraPairConfig& cfg) {
  validate(cfg);
  QMatrix q = constant_block(cfg);
  std::vector<std::array<std::size_t, 4>> out;
  std::vector<bool> pick(9, false);
  std::fill(pick.begin(), pick.begin() + 4, true);
  do {
    std::array<std::size_t, 4> top{};
    std::size_t n = 0;
    for (std::size_t r = 0; r < 9; ++r)
      if (pick[r]) top[n++] = r;
    if (sgn(determinant(q.submatrix(complement(top), range(5)))) != 0) out.push_back(top);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

ReducedCriticalMatrix reduce_to_N(const CameraPairConfig& cfg, const std::array<std::size_t, 4>& top_rows) {
  validate(cfg);
  LinFormMatrix lin = linear_block(cfg);
  QMatrix q = constant_block(cfg);
  std::vector<std::size_t> top(top_rows.begin(), top_rows.end());
  std::vector<std::size_t> rest = complement(top_rows);
  auto d_inv = inverse(q.submatrix(rest, range(5)));
  if (!d_inv) throw Error(ErrorCode::NoInvertibleBlock, "chosen rows leave a singular constant block");
  LinFormMatrix a = lin.submatrix(top, range(3));
  LinFormMatrix c = lin.submatrix(rest, range(3));
  QMatrix b = q.submatrix(top, range(5));
  LinFormMatrix correction = multiply(multiply(b, *d_inv), c);
  ReducedCriticalMatrix out;
  out.N = LinFormMatrix(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) out.N(i, j) = a(i, j) - correction(i, j);
  out.top_rows = top_rows;
  out.D_inverse = *d_inv;
  return out;
}

ReducedCriticalMatrix reduce_to_N(const CameraPairConfig& cfg) {
  auto parts = valid_partitions(cfg);
  if (parts.empty()) throw Error(ErrorCode::NoInvertibleBlock, "no row partition gives an invertible block");
  return reduce_to_N(cfg, parts.front());
}

CriticalPointResult critical_point_test(const CameraPairConfig& cfg, const QVector& point) {
  CriticalPointResult out;
  for (const auto& p : cfg.P) {
    bool zero = true;
    for (std::size_t r = 0; r < 3 && zero; ++r) {
      Rational s = 0;
      for (std::size_t c = 0; c < 5; ++c) s += p(r, c) * point[c];
      zero = sgn(s) == 0;
    }
    out.on_center = out.on_center || zero;
  }
  out.critical = rank(evaluate_M(cfg, point)) <= 7;
  return out;
}

CenterCheckReport column_center_check(const ReducedCriticalMatrix& rcm, const CameraPairConfig& cfg) {
  CenterCheckReport report;
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<LinearForm> col = rcm.N.col(j);
    report.column_span[j] = span_dimension(col);
    if (report.column_span[j] > 3) {
      report.ok = false;
      report.message += "column " + std::to_string(j + 1) + " spans more than 3 forms; ";
    }
    for (const auto& b : center(cfg.P[j])) {
      for (const auto& f : col) {
        if (sgn(f.evaluate(b)) != 0) {
          report.ok = false;
          report.message += "column " + std::to_string(j + 1) + " does not vanish on its center; ";
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace critloc
