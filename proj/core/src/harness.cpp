#include "critloc/harness.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "critloc/poly_algebra.hpp"

namespace critloc {

namespace {

// First element of every RNG stream tuple, so that streams never collide.
enum StreamTag : std::uint64_t { kTrialStream = 1, kCalibrationStream = 2, kSceneStream = 3 };

constexpr int kMaxAttempts = 10;
constexpr int kMaxDraws = 1000;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Rational exact(double v) { return Rational(v); }

QVector random_affine_point(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QVector p(kNumVars, Rational(1));
  for (int i = 0; i < 4; ++i) p[i] = exact(u(rng));
  return p;
}

std::optional<std::vector<double>> affine(const QVector& p) {
  if (sgn(p[4]) == 0) return std::nullopt;
  std::vector<double> out(kNumVars);
  for (int i = 0; i < kNumVars; ++i) out[i] = Rational(p[i] / p[4]).get_d();
  out[4] = 1.0;
  return out;
}

QVector combine(const std::vector<QVector>& basis, Rng& rng) {
  for (;;) {
    QVector p(kNumVars, Rational(0));
    for (const auto& b : basis) {
      Rational c = random_int(rng);
      for (int i = 0; i < kNumVars; ++i) p[i] += c * b[i];
    }
    if (std::any_of(p.begin(), p.end(), [](const Rational& r) { return sgn(r) != 0; })) return p;
  }
}

bool line_on(const std::vector<Polynomial>& gens, const std::vector<QVector>& basis) {
  // Generators have degree <= 2, so vanishing at three points of the line suffices.
  QVector mid(kNumVars);
  for (int i = 0; i < kNumVars; ++i) mid[i] = basis[0][i] + basis[1][i];
  for (const auto& g : gens)
    for (const QVector* p : {&basis[0], &basis[1], static_cast<const QVector*>(&mid)})
      if (sgn(g.evaluate(*p)) != 0) return false;
  return true;
}

}  // namespace

std::vector<double> ExperimentConfig::sigma_grid() const {
  std::vector<double> grid;
  // Index-based so that rounding does not accumulate.
  for (int k = 0;; ++k) {
    double s = sigma_min + k * sigma_step;
    if (s > sigma_max + 1e-12) break;
    grid.push_back(s);
  }
  return grid;
}

ExperimentConfig default_config(FixtureCase c) {
  ExperimentConfig cfg;
  cfg.case_tag = c;
  cfg.n_points = c == FixtureCase::QuadricV ? 99 : 100;
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (cfg.n_points < 26) bad("points must be at least 26");
  if (!(cfg.sigma_min >= 0)) bad("sigma-min must be nonnegative");
  if (!(cfg.sigma_step > 0)) bad("sigma-step must be positive");
  if (!(cfg.sigma_max >= cfg.sigma_min)) bad("sigma-max must not be below sigma-min");
  if (cfg.repeats < 1) bad("repeats must be positive");
  if (!(cfg.image_sigma >= 0)) bad("image-sigma must be nonnegative");
  if (cfg.delta_policy == DeltaPolicy::Multiple && !(cfg.delta_multiple > 0)) bad("delta-multiple must be positive");
  if (cfg.delta_policy == DeltaPolicy::Fixed && !(cfg.delta_fixed > 0)) bad("delta-fixed must be positive");
  if (cfg.calibration_trials < 1) bad("calibration trials must be positive");
  if (cfg.threads < 1) bad("threads must be positive");
  if (!(cfg.scene_window > 1)) bad("scene-window must exceed 1");
}

FixtureCase parse_case(std::string_view tag) {
  if (auto c = fixture_case_from_string(tag)) return *c;
  if (tag == "ii" || tag == "plane_cubic_ii") {
    throw Error(ErrorCode::InvalidConfig, "case ii is not run: no experiment is defined for the plane plus cubic locus");
  }
  if (tag == "iii" || tag == "vi") {
    throw Error(ErrorCode::InvalidConfig, "case " + std::string(tag) +
                                              " is not run: no profile reconstructs the tensor uniquely there");
  }
  throw Error(ErrorCode::InvalidConfig, "unknown case '" + std::string(tag) + "' (scroll_i, cone_iv, quadric_v)");
}

ReferenceCalibration reference_calibration(FixtureCase c) {
  switch (c) {
    case FixtureCase::ScrollI: return {0.014, 0.03};
    case FixtureCase::ConeIV: return {0.0012, 0.015};
    case FixtureCase::QuadricV: return {0.015, 0.03};
  }
  return {0, 0};
}

CriticalScene::CriticalScene(FixtureCase c) : case_(c), cfg_(fixture(c)) {
  validate(cfg_);
  cams_ = to_double(CameraTriple<Rational>(cfg_.P));
  tensor_ = normalized(to_double(trifocal_tensor(cfg_.P[0], cfg_.P[1], cfg_.P[2])));

  auto fixture_error = [&](const std::string& what) {
    throw Error(ErrorCode::CenterMismatch, std::string(to_string(c)) + ": " + what);
  };
  switch (c) {
    case FixtureCase::ScrollI: {
      auto can = classify_4x3(reduce_to_N(cfg_).N);
      if (can.family != Family::A) fixture_error("critical matrix is not of family A");
      for (const auto& comp : decompose(can).components) {
        if (comp.kind != ComponentKind::CubicScroll) continue;
        scroll_block_ = comp.block;
        generators_ = comp.generators;
      }
      break;
    }
    case FixtureCase::ConeIV:
      generators_ = {cone_equation()};
      break;
    case FixtureCase::QuadricV: {
      quadric_ = gcd_many_unchecked(maximal_minors_signed(reduce_to_N(cfg_).N));
      if (quadric_.total_degree() != 2) fixture_error("critical locus has no quadric factor");
      generators_ = {quadric_};
      break;
    }
  }
  if (c != FixtureCase::ConeIV) {
    for (const auto& cam : cfg_.P) {
      auto basis = center(cam);
      if (line_on(generators_, basis)) centers_on_component_.push_back(basis);
    }
    std::size_t need = c == FixtureCase::ScrollI ? 2 : 1;
    if (centers_on_component_.size() < need) fixture_error("too few centers on the critical component");
  }
}

std::vector<double> CriticalScene::scroll_point(Rng& rng) const {
  // Plane through a point on each of two centers and a random point; it meets
  // the scroll in the two center points and one more.
  std::size_t a = std::uniform_int_distribution<std::size_t>(0, centers_on_component_.size() - 1)(rng);
  std::size_t b = (a + 1 + std::uniform_int_distribution<std::size_t>(0, centers_on_component_.size() - 2)(rng)) %
                  centers_on_component_.size();
  std::vector<QVector> plane = {combine(centers_on_component_[a], rng), combine(centers_on_component_[b], rng),
                                random_affine_point(rng)};
  if (rank(QMatrix{{plane[0][0], plane[0][1], plane[0][2], plane[0][3], plane[0][4]},
                   {plane[1][0], plane[1][1], plane[1][2], plane[1][3], plane[1][4]},
                   {plane[2][0], plane[2][1], plane[2][2], plane[2][3], plane[2][4]}}) != 3) {
    return {};
  }
  QMatrix ca(3, 3), cb(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      ca(i, k) = scroll_block_(i, 0).evaluate(plane[k]);
      cb(i, k) = scroll_block_(i, 1).evaluate(plane[k]);
    }
  // Ruling parameter (s:t) through a known point: kernel of its 3x2 block.
  auto ruling = [&](std::size_t k) -> std::optional<Polynomial> {
    QMatrix m(3, 2);
    for (std::size_t i = 0; i < 3; ++i) {
      m(i, 0) = ca(i, k);
      m(i, 1) = cb(i, k);
    }
    auto ker = kernel_basis(m);
    if (ker.size() != 1) return std::nullopt;
    return ker[0][1] * Polynomial::variable(0) - ker[0][0] * Polynomial::variable(1);
  };
  auto l1 = ruling(0), l2 = ruling(1);
  if (!l1 || !l2) return {};
  PolyMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) m(i, k) = ca(i, k) * Polynomial::variable(0) + cb(i, k) * Polynomial::variable(1);
  Polynomial cubic = determinant(m);
  if (cubic.is_zero() || !divides(*l1 * *l2, cubic)) return {};
  Polynomial l3 = divide_exact(cubic, *l1 * *l2);
  if (l3.total_degree() != 1 || divides(l3, *l1) || divides(l3, *l2)) return {};
  Rational s = l3.coefficient({0, 1, 0, 0, 0}), t = -l3.coefficient({1, 0, 0, 0, 0});
  QMatrix third(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) third(i, k) = s * ca(i, k) + t * cb(i, k);
  auto ker = kernel_basis(third);
  if (ker.size() != 1) return {};
  QVector p(kNumVars, Rational(0));
  for (std::size_t k = 0; k < 3; ++k)
    for (int i = 0; i < kNumVars; ++i) p[i] += ker[0][k] * plane[k][i];
  auto out = affine(p);
  return out ? *out : std::vector<double>{};
}

std::vector<double> CriticalScene::cone_point(Rng& rng) const {
  // The cone equation is linear in x4: x4 * a(x) + b(x) = 0.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> p = {u(rng), u(rng), u(rng), 0.0, 1.0};
  auto parts = generators_[0].coefficients_in(3);
  if (parts.size() != 2) return {};
  double a = parts[1].evaluate(std::span<const double>(p));
  if (p[0] == 0 || a == 0) return {};
  p[3] = -parts[0].evaluate(std::span<const double>(p)) / a;
  return p;
}

std::vector<double> CriticalScene::quadric_point(Rng& rng) const {
  // Second intersection of the quadric with a line through a center point.
  std::size_t a = std::uniform_int_distribution<std::size_t>(0, centers_on_component_.size() - 1)(rng);
  QVector p0 = combine(centers_on_component_[a], rng);
  QVector y = random_affine_point(rng);
  QMatrix s = quadric_matrix(quadric_);
  QVector sp0 = mat_vec(s, p0), sy = mat_vec(s, y);
  Rational alpha = 0, beta = 0;
  for (int i = 0; i < kNumVars; ++i) {
    alpha += sp0[i] * y[i];
    beta += sy[i] * y[i];
  }
  if (sgn(alpha) == 0 || sgn(beta) == 0) return {};
  QVector p(kNumVars);
  for (int i = 0; i < kNumVars; ++i) p[i] = beta * p0[i] - 2 * alpha * y[i];
  auto out = affine(p);
  return out ? *out : std::vector<double>{};
}

std::vector<std::vector<double>> CriticalScene::generate(std::size_t n, Rng& rng, double window) const {
  LocusComponent comp;
  comp.generators = generators_;
  std::vector<std::vector<double>> pts;
  int draws = 0;
  while (pts.size() < n) {
    if (++draws > kMaxDraws + 10 * static_cast<int>(n)) {
      throw Error(ErrorCode::SamplingFailed, "no critical point after repeated draws");
    }
    std::vector<double> p = case_ == FixtureCase::ScrollI  ? scroll_point(rng)
                            : case_ == FixtureCase::ConeIV ? cone_point(rng)
                                                           : quadric_point(rng);
    if (p.empty() || !std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) continue;
    if (std::any_of(p.begin(), p.begin() + 4, [&](double v) { return std::abs(v) > window; })) continue;
    if (normalized_residual(comp, p) >= 1e-10) continue;
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<std::vector<double>> generate_critical_points(FixtureCase c, std::size_t n, Rng& rng, double window) {
  return CriticalScene(c).generate(n, rng, window);
}

void perturb_scene(std::vector<std::vector<double>>& pts, double sigma, Rng& rng) {
  if (sigma == 0) return;
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& p : pts)
    for (int i = 0; i < 4; ++i) p[i] += noise(rng);
}

Vec3<double> perturb_image(const Vec3<double>& x, double sigma, Rng& rng) {
  double scale = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
  if (!(std::abs(x[2]) > 1e-12 * scale)) throw Error(ErrorCode::ImageAtInfinity, "image point at infinity");
  Vec3<double> out = {x[0] / x[2], x[1] / x[2], 1.0};
  if (sigma > 0) {
    std::normal_distribution<double> noise(0.0, sigma);
    out[0] += noise(rng);
    out[1] += noise(rng);
  }
  return out;
}

std::vector<DTriple> noisy_correspondences(const CameraTriple<double>& cams,
                                           const std::vector<std::vector<double>>& pts, double image_sigma, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<DTriple> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    DTriple t;
    for (std::size_t v = 0; v < 3; ++v) t.v[v] = perturb_image(project(cams[v], x), image_sigma, rng);
    Vec3<double> aux = {gauss(rng), gauss(rng), gauss(rng)};
    t.v[2] = line_through(t.v[2], aux);
    out.push_back(t);
  }
  return out;
}

double trial_distance(const CriticalScene& scene, const std::vector<std::vector<double>>& pts, double image_sigma,
                      Rng& rng) {
  auto triples = noisy_correspondences(scene.cameras(), pts, image_sigma, rng);
  auto est = estimate_tensor(assemble_MT(triples));
  return tensor_distance(est.tensor, scene.true_tensor());
}

namespace {

bool retryable(ErrorCode code) {
  switch (code) {
    case ErrorCode::OnCenter:
    case ErrorCode::SamplingFailed:
    case ErrorCode::ImageAtInfinity:
    case ErrorCode::DependentPoints:
    case ErrorCode::DegenerateImage: return true;
    default: return false;
  }
}

// Runs body(i) for i in [0, n) on `threads` workers; results are indexed, so
// the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, int threads, F body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Calibration calibrate_delta(const CriticalScene& scene, const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<double> d(cfg.calibration_trials);
  parallel_for(d.size(), cfg.threads, [&](std::size_t t) {
    for (int attempt = 0;; ++attempt) {
      Rng rng = make_rng(cfg.seed, {kCalibrationStream, t, static_cast<std::uint64_t>(attempt)});
      try {
        d[t] = trial_distance(scene, random_scene(cfg.n_points, rng), cfg.image_sigma, rng);
        return;
      } catch (const Error& e) {
        if (!retryable(e.code()) || attempt + 1 >= kMaxAttempts) throw;
      }
    }
  });
  Calibration cal;
  cal.trials = cfg.calibration_trials;
  double sum = 0;
  for (double v : d) sum += v;
  cal.m = sum / static_cast<double>(d.size());
  switch (cfg.delta_policy) {
    case DeltaPolicy::Multiple: cal.delta = cfg.delta_multiple * cal.m; break;
    case DeltaPolicy::Fixed: cal.delta = cfg.delta_fixed; break;
    case DeltaPolicy::Reference: {
      auto pub = reference_calibration(scene.case_tag());
      cal.m = pub.m;
      cal.delta = pub.delta;
      break;
    }
  }
  return cal;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  CriticalScene scene(cfg.case_tag);
  Calibration cal;
  if (cfg.delta_policy == DeltaPolicy::Reference) {
    auto pub = reference_calibration(cfg.case_tag);
    cal = {pub.m, pub.delta, 0};
  } else {
    cal = calibrate_delta(scene, cfg);
  }
  return run_sweep(scene, cfg, cal);
}

SweepResult run_sweep(const CriticalScene& scene, const ExperimentConfig& cfg, const Calibration& cal) {
  validate(cfg);
  auto grid = cfg.sigma_grid();
  std::size_t reps = static_cast<std::size_t>(cfg.repeats);
  std::vector<std::vector<std::vector<double>>> fixed;
  if (cfg.fixed_scene) {
    for (std::size_t si = 0; si < grid.size(); ++si) {
      Rng rng = make_rng(cfg.seed, {kSceneStream, si});
      fixed.push_back(scene.generate(cfg.n_points, rng, cfg.scene_window));
    }
  }
  SweepResult out;
  out.calibration = cal;
  out.records.resize(grid.size() * reps);
  parallel_for(out.records.size(), cfg.threads, [&](std::size_t idx) {
    std::size_t si = idx / reps, r = idx % reps;
    TrialRecord rec;
    rec.sigma = grid[si];
    rec.repeat = static_cast<int>(r);
    rec.m = cal.m;
    rec.delta = cal.delta;
    for (int attempt = 0;; ++attempt) {
      Rng rng = make_rng(cfg.seed, {kTrialStream, si, r, static_cast<std::uint64_t>(attempt)});
      try {
        auto pts = cfg.fixed_scene ? fixed[si] : scene.generate(cfg.n_points, rng, cfg.scene_window);
        perturb_scene(pts, rec.sigma, rng);
        rec.distance = trial_distance(scene, pts, cfg.image_sigma, rng);
        rec.attempts = attempt + 1;
        break;
      } catch (const Error& e) {
        if (!retryable(e.code()) || attempt + 1 >= kMaxAttempts) throw;
      }
    }
    rec.is_near = rec.distance < rec.delta;
    out.records[idx] = rec;
  });
  out.summary = summarize(out.records);
  return out;
}

std::vector<SigmaSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SigmaSummary> out;
  std::vector<int> counts;
  for (const auto& r : records) {
    if (out.empty() || out.back().sigma != r.sigma) {
      out.push_back({r.sigma, 0, 0, 0.0});
      counts.push_back(0);
    }
    auto& s = out.back();
    (r.is_near ? s.near_count : s.far_count)++;
    s.mean_distance += r.distance;
    ++counts.back();
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].mean_distance /= counts[i];
  return out;
}

void write_sweep_csv(std::ostream& os, FixtureCase c, const std::vector<TrialRecord>& records) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    os << to_string(c) << ',' << format_double(r.sigma) << ',' << r.repeat << ',' << format_double(r.distance) << ','
       << format_double(r.m) << ',' << format_double(r.delta) << ',' << (r.is_near ? 1 : 0) << ',' << r.attempts
       << '\n';
  }
}

}  // namespace critloc
