// Acceptance gate. One PASS/FAIL line per criterion.
//
// Exit status: 0 when every criterion passes or the only failures are the
// known-red ones listed below; 1 on any other failure, or when a known-red
// criterion starts passing (the list is then stale). --strict fails on any
// FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "critloc/classify.hpp"
#include "critloc/critical.hpp"
#include "critloc/harness.hpp"
#include "critloc/loci.hpp"
#include "critloc/multiview.hpp"
#include "critloc/poly_algebra.hpp"
#include "critloc/recon.hpp"
#include "critloc/template_fit.hpp"

using namespace critloc;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr FixtureCase kCases[] = {FixtureCase::ScrollI, FixtureCase::ConeIV, FixtureCase::QuadricV};

// Criterion id -> reason it is expected to fail.
const std::map<int, std::string> kKnownRed = {
    {7, "the stated cone X1 yields the cone with x2 -> -x2; only the sign-corrected X1 reproduces the equation"},
    {8, "cone N is column-equivalent to the sign-corrected X1 only; the quadric cameras give S3X3, "
        "and two of their P centers are off the quadric"},
    {9, "cone_iv calibrates near 0.06, an order of magnitude above the window"},
};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[" << what << "] ";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

QMatrix random_camera(Rng& rng) {
  for (;;) {
    QMatrix p = random_matrix(rng, 3, 5);
    if (rank(p) == 3) return p;
  }
}

Vec3<Rational> random_vec3(Rng& rng) {
  auto v = random_vector(rng, 3);
  return {v[0], v[1], v[2]};
}

Vec3<double> to_double(const Vec3<Rational>& v) { return {v[0].get_d(), v[1].get_d(), v[2].get_d()}; }

Polynomial minors_gcd(const LinFormMatrix& n) { return gcd_many_unchecked(maximal_minors_signed(n)); }

LinFormMatrix random_linform_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  LinFormMatrix m = make_linform_matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_linear_form(rng);
  return m;
}

// Sum_i d[i] * m(i, c) for every column c.
bool row_combination_vanishes(const std::vector<Polynomial>& d, const LinFormMatrix& m) {
  PolyMatrix pm = to_poly(m);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Polynomial s;
    for (std::size_t i = 0; i < m.rows(); ++i) s += d[i] * pm(i, c);
    if (!s.is_zero()) return false;
  }
  return true;
}

bool line_on(const Polynomial& f, const std::vector<QVector>& basis, Rng& rng) {
  for (int t = 0; t < 6; ++t) {
    QVector p(kNumVars);
    Rational a = random_int(rng), b = random_int(rng);
    for (int i = 0; i < kNumVars; ++i) p[i] = a * basis[0][i] + b * basis[1][i];
    if (sgn(f.evaluate(p)) != 0) return false;
  }
  return true;
}

LinFormMatrix s1_instance(const QMatrix& x1) {
  FamilyParams p;
  for (int i = 0; i < 4; ++i) p.ell.push_back(LinearForm::variable(i));
  p.X = to_poly(x1);
  return build_family(Family::S1X1, p);
}

std::vector<LinearForm> variables4() {
  std::vector<LinearForm> ell;
  for (int i = 0; i < 4; ++i) ell.push_back(LinearForm::variable(i));
  return ell;
}

void tensor_identity(Outcome& o) {
  Rng rng = make_rng(kSeed, {1});
  std::optional<Rational> global;
  double worst = 0;
  int exact_bad = 0, zero_pairs = 0;
  for (int t = 0; t < 100; ++t) {
    QMatrix p1 = random_camera(rng), p2 = random_camera(rng), p3 = random_camera(rng);
    Vec3<Rational> x, y, z, w;
    do {
      x = random_vec3(rng), y = random_vec3(rng), z = random_vec3(rng), w = random_vec3(rng);
    } while (sgn(z[0] * w[1] - z[1] * w[0]) == 0 && sgn(z[1] * w[2] - z[2] * w[1]) == 0);
    Rational lhs = trilinear(trifocal_tensor(p1, p2, p3), x, y, line_through(z, w));
    Rational g = grassmann_det(p1, p2, p3, x, y, z, w);
    if (sgn(g) == 0) {
      ++zero_pairs;
      exact_bad += sgn(lhs) != 0;
      continue;
    }
    Rational ratio = lhs / g;
    if (!global) global = ratio;
    exact_bad += ratio != *global;

    DMatrix d1 = to_double(p1), d2 = to_double(p2), d3 = to_double(p3);
    double lf = trilinear(trifocal_tensor(d1, d2, d3), to_double(x), to_double(y),
                          line_through(to_double(z), to_double(w)));
    double gf = grassmann_det(d1, d2, d3, to_double(x), to_double(y), to_double(z), to_double(w));
    double c = global->get_d();
    worst = std::max(worst, std::abs(lf - c * gf) / std::max(std::abs(lf), std::abs(c * gf)));
  }
  o.require(global.has_value() && sgn(*global) != 0, "nonzero global constant");
  o.require(exact_bad == 0, "exact ratio constant");
  o.require(worst <= 1e-9, "floating relative error <= 1e-9");
  o.detail << "constant " << (global ? to_string(*global) : "none") << ", exact mismatches " << exact_bad
           << ", worst float rel " << worst << ", zero determinants " << zero_pairs;
}

void correspondence_annihilation(Outcome& o) {
  Rng rng = make_rng(kSeed, {2});
  int checked = 0, nonzero = 0;
  for (FixtureCase c : kCases) {
    auto cfg = fixture(c);
    for (const auto* set : {&cfg.P, &cfg.Q}) {
      CameraTriple<Rational> cams = *set;
      for (Profile pr : {Profile::P221, Profile::P212, Profile::P122}) {
        QTensor t = trifocal_tensor(cams[0], cams[1], cams[2], pr);
        for (const auto& tr : correspondences_from_scene(cams, random_scene_rational(100, rng), rng, pr)) {
          ++checked;
          nonzero += sgn(trilinear(t, tr.v[0], tr.v[1], tr.v[2])) != 0;
        }
      }
    }
  }
  o.require(nonzero == 0, "all trilinear values zero");
  o.detail << checked << " correspondences, " << nonzero << " nonzero";
}

void rank_facts(Outcome& o) {
  Rng rng = make_rng(kSeed, {3});
  for (FixtureCase c : kCases) {
    int r = rank_MT_diagnostic(to_double(CameraTriple<Rational>(fixture(c).P)), 50, rng);
    o.require(r == 26, std::string(to_string(c)) + " rank 26");
    o.detail << to_string(c) << " " << r << "; ";
  }
  int shared_ok = 0;
  for (int t = 0; t < 5; ++t) {
    CameraTriple<Rational> cams;
    for (auto& p : cams) p = random_camera(rng);
    for (std::size_t k = 0; k < 5; ++k) {
      cams[1](0, k) = cams[0](0, k);
      cams[1](1, k) = cams[0](1, k);
    }
    auto mt = assemble_MT(correspondences_from_scene(to_double(cams), random_scene(50, rng), rng));
    auto null = nullspace_tensors(mt);
    bool ok = numerical_rank(mt, kRankTolerance) == 24 && null.size() == 3;
    for (const auto& n : null) ok = ok && degenerate_structure_check(n);
    shared_ok += ok;
  }
  o.require(shared_ok == 5, "shared rows rank 24 with skew nullspace");
  o.detail << "shared rows " << shared_ok << "/5; ";
  auto cams = to_double(CameraTriple<Rational>(fixture(FixtureCase::ScrollI).P));
  auto pts = random_scene(50, rng);
  for (auto& p : pts) p[3] = 0.3 * p[0] - 0.2 * p[1] + 0.5;
  int hr = estimate_tensor(assemble_MT(correspondences_from_scene(cams, pts, rng))).numerical_rank;
  o.require(hr < 26, "hyperplane rank < 26");
  o.detail << "hyperplane " << hr;
}

void classification_round_trip(Outcome& o) {
  Rng rng = make_rng(kSeed, {4});
  for (Family f : {Family::A, Family::B, Family::D, Family::S1X1, Family::S2X2, Family::S3X3}) {
    int good = 0;
    for (int t = 0; t < 100; ++t) {
      auto n = transform(random_invertible(rng, 4), random_family_instance(f, rng), random_invertible(rng, 3));
      auto c = classify_4x3(n);
      good += c.family == f && c.factor_degree == expected_factor_degree(f) && certificate_valid(n, c);
    }
    o.require(good == 100, std::string(to_string(f)));
    o.detail << to_string(f) << " " << good << "/100; ";
  }
  int generic = 0;
  for (int t = 0; t < 100; ++t) generic += classify_4x3(random_generic_4x3(rng)).family == Family::NonDegenerate;
  o.require(generic == 100, "generic");
  o.detail << "generic " << generic << "/100";
}

void annihilation_identities(Outcome& o) {
  Rng rng = make_rng(kSeed, {5});
  int m32 = 0, m43 = 0, skew = 0;
  for (int t = 0; t < 100; ++t) {
    auto a = random_linform_matrix(rng, 3, 2);
    m32 += row_combination_vanishes(maximal_minors_signed(a), a);
    auto b = random_linform_matrix(rng, 4, 3);
    m43 += row_combination_vanishes(maximal_minors_signed(b), b);
    auto c = random_linform_matrix(rng, 4, 2);
    PolyMatrix d = skew_syzygy_matrix(c);
    bool ok = d.rows() == 4 && d.cols() == 4;
    for (std::size_t i = 0; ok && i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) ok = ok && (d(i, j) + d(j, i)).is_zero();
      std::vector<Polynomial> row(4);
      for (std::size_t j = 0; j < 4; ++j) row[j] = d(i, j);
      ok = ok && row_combination_vanishes(row, c);
    }
    skew += ok;
  }
  o.require(m32 == 100, "3x2 minors");
  o.require(m43 == 100, "4x3 minors");
  o.require(skew == 100, "4x2 skew syzygy");
  o.detail << "3x2 " << m32 << "/100, 4x3 " << m43 << "/100, 4x2 skew " << skew << "/100";
}

void locus_verification(Outcome& o) {
  // Incidence each family must declare; expected 0 means any count.
  struct Want {
    Family f;
    std::optional<IncidenceKind> kind;
    int expected = 0;
  };
  const Want wants[] = {{Family::A, std::nullopt},
                        {Family::B, IncidenceKind::MeetDegree, 2},
                        {Family::C, IncidenceKind::PointOn},
                        {Family::D, IncidenceKind::MeetDegree, 1},
                        {Family::S1X1, IncidenceKind::Vertex},
                        {Family::S2X2, IncidenceKind::Contained},
                        {Family::S3X3, std::nullopt}};
  for (const auto& w : wants) {
    Rng rng = make_rng(kSeed, {6, static_cast<std::uint64_t>(w.f)});
    auto v = verify_loci(random_family_instance(w.f, rng), 100, rng);
    bool checks = v.ok();
    for (const auto& c : v.checks)
      if (!c.ok) o.detail << "(" << to_string(w.f) << " " << c.name << ": " << c.detail << ") ";
    if (w.kind) {
      bool found = false;
      for (const auto& inc : v.decomposition.incidences)
        found = found || (inc.kind == *w.kind && (w.expected == 0 || inc.expected == w.expected));
      o.require(found, std::string(to_string(w.f)) + " incidence declared");
    }
    o.require(checks, std::string(to_string(w.f)) + " checks");
    o.detail << to_string(w.f) << " " << v.checks.size() << " checks " << (checks ? "ok" : "bad") << "; ";
  }
}

void quadric_identity(Outcome& o) {
  Polynomial cone = cone_equation().normalized();
  Polynomial from_fixture = quadratic_form(symmetric_matrix_D(cone_x1_stated()), variables4()).normalized();
  o.require(from_fixture == cone, "fixture X1 reproduces the cone");
  o.detail << "fixture X1 gives " << from_fixture.to_string() << " vs " << cone.to_string() << "; ";

  Rng rng = make_rng(kSeed, {7});
  int tested = 0, good = 0, skipped = 0;
  while (tested < 100) {
    QMatrix x1 = random_matrix(rng, 6, 3, -5, 5);
    Polynomial g = minors_gcd(s1_instance(x1));
    if (g.total_degree() != 2) {
      ++skipped;
      continue;
    }
    ++tested;
    good += quadratic_form(symmetric_matrix_D(x1), variables4()).normalized() == g.normalized();
  }
  o.require(good == 100, "random X1");
  o.detail << "random X1 " << good << "/100 (" << skipped << " special redrawn)";
}

void fixture_reduction(Outcome& o) {
  Rng rng = make_rng(kSeed, {8});
  const Family want[] = {Family::A, Family::S1X1, Family::S2X2};
  for (int i = 0; i < 3; ++i) {
    auto cfg = fixture(kCases[i]);
    auto rcm = reduce_to_N(cfg);
    auto c = classify_4x3(rcm.N);
    std::string tag(to_string(kCases[i]));
    o.require(c.family == want[i], tag + " family " + std::string(to_string(want[i])));
    o.require(column_center_check(rcm, cfg).ok, tag + " column/center check");
    o.detail << tag << " -> " << to_string(c.family) << "; ";
    if (kCases[i] == FixtureCase::ConeIV) {
      bool stated = find_equivalence(rcm.N, s1_instance(cone_x1_stated()), rng).has_value();
      bool realized = find_equivalence(rcm.N, s1_instance(cone_x1_realized()), rng).has_value();
      o.require(stated, "cone X1 column-equivalent to the stated matrix");
      o.detail << "X1 equivalent to stated " << stated << ", to sign-corrected " << realized << "; ";
    }
    if (kCases[i] != FixtureCase::ScrollI) {
      Polynomial surface = kCases[i] == FixtureCase::ConeIV ? cone_equation() : minors_gcd(rcm.N);
      int on = 0;
      for (const auto& p : cfg.P) on += line_on(surface, center(p), rng);
      o.require(on == 3, tag + " centers on the surface");
      o.detail << tag << " centers on surface " << on << "/3; ";
    }
  }
}

void calibration_magnitudes(Outcome& o) {
  for (FixtureCase c : kCases) {
    ExperimentConfig cfg = default_config(c);
    cfg.seed = kSeed;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    Calibration cal = calibrate_delta(CriticalScene(c), cfg);
    double lo = c == FixtureCase::ConeIV ? 0.0003 : 0.004;
    double hi = c == FixtureCase::ConeIV ? 0.005 : 0.05;
    o.require(cal.trials == 1000, std::string(to_string(c)) + " 1000 trials");
    o.require(cal.m >= lo && cal.m <= hi, std::string(to_string(c)) + " m in window");
    o.detail << to_string(c) << " m = " << cal.m << " in [" << lo << ", " << hi << "]; ";
  }
}

double near_frequency(const SweepResult& r, std::size_t from, std::size_t to) {
  double near = 0, total = 0;
  for (std::size_t s = from; s < to; ++s) {
    near += r.summary[s].near_count;
    total += r.summary[s].near_count + r.summary[s].far_count;
  }
  return near / total;
}

void qualitative_sweep(Outcome& o) {
  for (FixtureCase c : {FixtureCase::ScrollI, FixtureCase::QuadricV}) {
    ExperimentConfig cfg = default_config(c);
    cfg.seed = kSeed;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    SweepResult r = run_sweep(cfg);
    std::size_t n = r.summary.size(), decile = n / 10;
    if (c == FixtureCase::ScrollI) {
      double bottom = near_frequency(r, 0, decile), top = near_frequency(r, n - decile, n);
      o.require(top - bottom >= 0.3, "scroll_i decile gap >= 0.3");
      o.detail << "scroll_i bottom " << bottom << ", top " << top << "; ";
    } else {
      double overall = near_frequency(r, 0, n);
      o.require(overall >= 0.8, "quadric_v overall >= 0.8");
      o.detail << "quadric_v overall " << overall;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critloc acceptance suite"};
  bool strict = false;
  app.add_flag("--strict", strict, "fail on any FAIL, including the known-red criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "tensor/oracle identity", 10, tensor_identity},
      {2, "correspondence annihilation", 5, correspondence_annihilation},
      {3, "rank facts", 10, rank_facts},
      {4, "classification round-trip", 60, classification_round_trip},
      {5, "annihilation identities", 60, annihilation_identities},
      {6, "locus verification", 60, locus_verification},
      {7, "q = L^T D L", 10, quadric_identity},
      {8, "fixture reduction", 10, fixture_reduction},
      {9, "calibration magnitudes", 120, calibration_magnitudes},
      {10, "qualitative instability sweep", 600, qualitative_sweep},
  };

  int unexpected = 0, failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "threw: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.ok = false;
      o.detail << " [over budget]";
    }
    bool known = kKnownRed.count(c.id) > 0;
    std::printf("%s [%2d] %s (%.2fs / %.0fs): %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, c.budget_s,
                o.detail.str().c_str());
    if (!o.ok) {
      ++failed;
      if (known) std::printf("     known red: %s\n", kKnownRed.at(c.id).c_str());
      else ++unexpected;
    } else if (known) {
      std::printf("     listed as known red but passed; update the list\n");
      ++unexpected;
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass, %d unexpected\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              unexpected);
  if (strict) return failed == 0 ? 0 : 1;
  return unexpected == 0 ? 0 : 1;
}
