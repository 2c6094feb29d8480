#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "critloc/harness.hpp"
#include "critloc/io.hpp"

using namespace critloc;

namespace {

constexpr FixtureCase kCases[] = {FixtureCase::ScrollI, FixtureCase::ConeIV, FixtureCase::QuadricV};

ExperimentConfig small_config(FixtureCase c) {
  ExperimentConfig cfg = default_config(c);
  cfg.sigma_min = 0.05;
  cfg.sigma_max = 0.45;
  cfg.sigma_step = 0.1;
  cfg.repeats = 3;
  cfg.calibration_trials = 20;
  cfg.seed = 77;
  return cfg;
}

std::string csv_of(const SweepResult& r, FixtureCase c) {
  std::ostringstream os;
  write_sweep_csv(os, c, r.records);
  return os.str();
}

}  // namespace

TEST(Config, Defaults) {
  ExperimentConfig cfg = default_config(FixtureCase::ScrollI);
  EXPECT_EQ(cfg.n_points, 100);
  EXPECT_EQ(default_config(FixtureCase::ConeIV).n_points, 100);
  EXPECT_EQ(default_config(FixtureCase::QuadricV).n_points, 99);
  EXPECT_EQ(cfg.repeats, 10);
  EXPECT_EQ(cfg.calibration_trials, 1000);
  EXPECT_DOUBLE_EQ(cfg.image_sigma, 0.01);
  EXPECT_DOUBLE_EQ(cfg.delta_multiple, 2.0);
  auto grid = cfg.sigma_grid();
  ASSERT_EQ(grid.size(), 100u);
  EXPECT_DOUBLE_EQ(grid.front(), 1e-4);
  EXPECT_LE(grid.back(), 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
}

TEST(Config, ValidationNamesTheField) {
  auto expect_invalid = [](ExperimentConfig cfg, const std::string& field) {
    try {
      validate(cfg);
      FAIL() << "accepted bad " << field;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  };
  ExperimentConfig base = default_config(FixtureCase::ScrollI);
  auto c = base;
  c.repeats = 0;
  expect_invalid(c, "repeats");
  c = base;
  c.sigma_step = 0;
  expect_invalid(c, "sigma-step");
  c = base;
  c.n_points = 10;
  expect_invalid(c, "points");
  c = base;
  c.delta_policy = DeltaPolicy::Fixed;
  expect_invalid(c, "delta-fixed");
  c = base;
  c.scene_window = 0.5;
  expect_invalid(c, "scene-window");
}

TEST(Config, ParseCase) {
  for (FixtureCase c : kCases) EXPECT_EQ(parse_case(to_string(c)), c);
  for (const char* refused : {"ii", "iii", "vi"}) {
    try {
      parse_case(refused);
      FAIL() << refused;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
      EXPECT_NE(std::string(e.what()).find(refused), std::string::npos);
    }
  }
  EXPECT_THROW(parse_case("scroll"), Error);
}

TEST(Generate, PointsLieOnTheComponentInTheChart) {
  for (FixtureCase c : kCases) {
    CriticalScene scene(c);
    Rng rng = make_rng(1, {static_cast<std::uint64_t>(c)});
    auto pts = scene.generate(200, rng, 10.0);
    ASSERT_EQ(pts.size(), 200u);
    LocusComponent comp;
    comp.generators = scene.generators();
    for (const auto& p : pts) {
      ASSERT_EQ(p.size(), 5u);
      EXPECT_EQ(p[4], 1.0);
      EXPECT_LT(normalized_residual(comp, p), 1e-10) << to_string(c);
      for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(p[i]), 10.0);
    }
  }
}

TEST(Generate, ConePointsSolveTheConeEquation) {
  CriticalScene scene(FixtureCase::ConeIV);
  Rng rng = make_rng(2);
  Polynomial cone = cone_equation();
  for (const auto& p : scene.generate(100, rng)) {
    double scale = 1;
    for (double v : p) scale = std::max(scale, std::abs(v));
    EXPECT_LT(std::abs(cone.evaluate(std::span<const double>(p))), 1e-9 * scale * scale);
    EXPECT_NE(p[0], 0.0);
  }
}

TEST(Generate, ScrollPointsAreNotCenterPoints) {
  CriticalScene scene(FixtureCase::ScrollI);
  Rng rng = make_rng(3);
  const auto& cams = scene.cameras();
  for (const auto& p : scene.generate(100, rng)) {
    for (const auto& cam : cams) {
      double n = 0;
      for (std::size_t r = 0; r < 3; ++r) {
        double s = 0;
        for (std::size_t k = 0; k < 5; ++k) s += cam(r, k) * p[k];
        n = std::max(n, std::abs(s));
      }
      EXPECT_GT(n, 1e-8);
    }
  }
}

TEST(Perturb, ZeroSigmaIsIdentity) {
  Rng rng = make_rng(4);
  auto pts = random_scene(20, rng);
  auto copy = pts;
  perturb_scene(pts, 0.0, rng);
  EXPECT_EQ(pts, copy);
  Vec3<double> x = {2.0, -4.0, 2.0};
  auto y = perturb_image(x, 0.0, rng);
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], -2.0);
  EXPECT_DOUBLE_EQ(y[2], 1.0);
}

TEST(Perturb, SceneNoiseHasZeroMean) {
  Rng rng = make_rng(5);
  const std::size_t n = 10000;
  const double sigma = 0.3;
  std::vector<std::vector<double>> pts(n, std::vector<double>{0, 0, 0, 0, 1});
  perturb_scene(pts, sigma, rng);
  for (int i = 0; i < 4; ++i) {
    double mean = 0;
    for (const auto& p : pts) mean += p[i];
    mean /= n;
    EXPECT_LT(std::abs(mean), 4 * sigma / std::sqrt(double(n)));
  }
  for (const auto& p : pts) EXPECT_EQ(p[4], 1.0);
}

TEST(Perturb, ImageNoiseHasZeroMean) {
  Rng rng = make_rng(6);
  const int n = 10000;
  const double sigma = 0.01;
  double mx = 0, my = 0;
  for (int t = 0; t < n; ++t) {
    auto y = perturb_image({3.0, 6.0, 3.0}, sigma, rng);
    mx += y[0] - 1.0;
    my += y[1] - 2.0;
    EXPECT_EQ(y[2], 1.0);
  }
  EXPECT_LT(std::abs(mx / n), 4 * sigma / std::sqrt(double(n)));
  EXPECT_LT(std::abs(my / n), 4 * sigma / std::sqrt(double(n)));
}

TEST(Perturb, ImageAtInfinityThrows) {
  Rng rng = make_rng(7);
  try {
    perturb_image({1.0, 2.0, 0.0}, 0.01, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageAtInfinity);
  }
}

TEST(Perturb, LargeNoiseMovesScrollPointsOff) {
  CriticalScene scene(FixtureCase::ScrollI);
  Rng rng = make_rng(8);
  auto pts = scene.generate(50, rng);
  perturb_scene(pts, 0.5, rng);
  LocusComponent comp;
  comp.generators = scene.generators();
  std::size_t off = 0;
  for (const auto& p : pts) off += normalized_residual(comp, p) > 1e-6;
  EXPECT_GE(off, 49u);
}

TEST(Projection, FixtureImagesAreFinite) {
  for (FixtureCase c : kCases) {
    CriticalScene scene(c);
    Rng rng = make_rng(9);
    auto tri = noisy_correspondences(scene.cameras(), scene.generate(30, rng), 0.01, rng);
    for (const auto& t : tri)
      for (const auto& v : t.v)
        for (double e : v) EXPECT_TRUE(std::isfinite(e));
  }
}

TEST(Sweep, CountsAndSummaryAreConsistent) {
  ExperimentConfig cfg = small_config(FixtureCase::QuadricV);
  SweepResult r = run_sweep(cfg);
  auto grid = cfg.sigma_grid();
  ASSERT_EQ(r.records.size(), grid.size() * cfg.repeats);
  ASSERT_EQ(r.summary.size(), grid.size());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    EXPECT_EQ(rec.sigma, grid[i / cfg.repeats]);
    EXPECT_EQ(rec.repeat, static_cast<int>(i % cfg.repeats));
    EXPECT_EQ(rec.is_near, rec.distance < rec.delta);
    EXPECT_GE(rec.attempts, 1);
    EXPECT_DOUBLE_EQ(rec.delta, 2 * r.calibration.m);
  }
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto& sum = r.summary[s];
    EXPECT_EQ(sum.near_count + sum.far_count, cfg.repeats);
    int near = 0;
    double mean = 0;
    for (int k = 0; k < cfg.repeats; ++k) {
      near += r.records[s * cfg.repeats + k].is_near;
      mean += r.records[s * cfg.repeats + k].distance;
    }
    EXPECT_EQ(sum.near_count, near);
    EXPECT_NEAR(sum.mean_distance, mean / cfg.repeats, 1e-15);
  }
}

TEST(Sweep, DeterministicAndIndependentOfThreads) {
  ExperimentConfig cfg = small_config(FixtureCase::ScrollI);
  std::string a = csv_of(run_sweep(cfg), cfg.case_tag);
  std::string b = csv_of(run_sweep(cfg), cfg.case_tag);
  cfg.threads = 3;
  std::string c = csv_of(run_sweep(cfg), cfg.case_tag);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.substr(0, kSweepCsvHeader.size()), kSweepCsvHeader);
  cfg.seed += 1;
  EXPECT_NE(csv_of(run_sweep(cfg), cfg.case_tag), a);
}

TEST(Sweep, FixedSceneOption) {
  ExperimentConfig cfg = small_config(FixtureCase::ConeIV);
  cfg.fixed_scene = true;
  SweepResult r = run_sweep(cfg);
  EXPECT_EQ(r.records.size(), cfg.sigma_grid().size() * cfg.repeats);
  EXPECT_EQ(csv_of(run_sweep(cfg), cfg.case_tag), csv_of(r, cfg.case_tag));
}

TEST(Calibration, Policies) {
  CriticalScene scene(FixtureCase::ScrollI);
  ExperimentConfig cfg = small_config(FixtureCase::ScrollI);
  Calibration mult = calibrate_delta(scene, cfg);
  EXPECT_GT(mult.m, 0);
  EXPECT_DOUBLE_EQ(mult.delta, 2 * mult.m);
  EXPECT_EQ(mult.trials, cfg.calibration_trials);
  cfg.delta_policy = DeltaPolicy::Fixed;
  cfg.delta_fixed = 0.5;
  Calibration fixed = calibrate_delta(scene, cfg);
  EXPECT_DOUBLE_EQ(fixed.m, mult.m);
  EXPECT_DOUBLE_EQ(fixed.delta, 0.5);
  cfg.delta_policy = DeltaPolicy::Reference;
  Calibration pub = calibrate_delta(scene, cfg);
  EXPECT_DOUBLE_EQ(pub.m, 0.014);
  EXPECT_DOUBLE_EQ(pub.delta, 0.03);
}

TEST(Calibration, ReferencePairs) {
  EXPECT_DOUBLE_EQ(reference_calibration(FixtureCase::ConeIV).m, 0.0012);
  EXPECT_DOUBLE_EQ(reference_calibration(FixtureCase::ConeIV).delta, 0.015);
  EXPECT_DOUBLE_EQ(reference_calibration(FixtureCase::QuadricV).m, 0.015);
  EXPECT_DOUBLE_EQ(reference_calibration(FixtureCase::QuadricV).delta, 0.03);
}

TEST(Summary, JsonHasOneEntryPerSigma) {
  ExperimentConfig cfg = small_config(FixtureCase::ConeIV);
  SweepResult r = run_sweep(cfg);
  std::string js = sweep_summary_to_json(cfg.case_tag, r);
  EXPECT_NE(js.find("\"per_sigma\""), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = js.find("\"sigma\""); pos != std::string::npos; pos = js.find("\"sigma\"", pos + 1)) ++count;
  EXPECT_EQ(count, r.summary.size());
}
