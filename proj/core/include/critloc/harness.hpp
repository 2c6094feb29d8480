#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/critical.hpp"
#include "critloc/loci.hpp"
#include "critloc/recon.hpp"

namespace critloc {

enum class DeltaPolicy {
  Multiple,   // delta = multiple * m
  Fixed,      // delta given, m still calibrated
  Reference,  // the reference (m, delta) pair of the case
};

struct ExperimentConfig {
  FixtureCase case_tag = FixtureCase::ScrollI;
  int n_points = 100;
  double sigma_min = 1e-4;
  double sigma_max = 1.0;
  double sigma_step = 1e-2;
  int repeats = 10;
  double image_sigma = 0.01;
  DeltaPolicy delta_policy = DeltaPolicy::Multiple;
  double delta_multiple = 2.0;
  double delta_fixed = 0.0;
  int calibration_trials = 1000;
  std::uint64_t seed = 1;
  bool fixed_scene = false;  // one critical scene per sigma instead of per trial
  // Critical points with an affine coordinate beyond this bound are redrawn,
  // keeping critical scenes at the extent of the calibration scenes.
  double scene_window = 10.0;
  int threads = 1;

  std::vector<double> sigma_grid() const;
};

// Defaults for a case: 100 points (99 for quadric_v).
ExperimentConfig default_config(FixtureCase c);
// Throws InvalidConfig naming the offending field.
void validate(const ExperimentConfig& cfg);

// Parses a case tag. Cases ii, iii and vi are refused with an explanation.
FixtureCase parse_case(std::string_view tag);

struct ReferenceCalibration {
  double m, delta;
};
ReferenceCalibration reference_calibration(FixtureCase c);

// Everything derived once per fixture: cameras, true tensor, critical
// component and anchor data for point generation.
class CriticalScene {
 public:
  explicit CriticalScene(FixtureCase c);

  FixtureCase case_tag() const { return case_; }
  const CameraPairConfig& config() const { return cfg_; }
  const CameraTriple<double>& cameras() const { return cams_; }
  const DTensor& true_tensor() const { return tensor_; }
  // Generators of the component the points are drawn from.
  const std::vector<Polynomial>& generators() const { return generators_; }

  // Points in the affine chart x5 = 1 on the critical component, with every
  // affine coordinate at most `window` in magnitude. Throws SamplingFailed
  // after bounded retries.
  std::vector<std::vector<double>> generate(std::size_t n, Rng& rng,
                                            double window = std::numeric_limits<double>::infinity()) const;

 private:
  std::vector<double> scroll_point(Rng& rng) const;
  std::vector<double> cone_point(Rng& rng) const;
  std::vector<double> quadric_point(Rng& rng) const;

  FixtureCase case_;
  CameraPairConfig cfg_;
  CameraTriple<double> cams_;
  DTensor tensor_;
  std::vector<Polynomial> generators_;
  LinFormMatrix scroll_block_;
  Polynomial quadric_;
  std::vector<std::vector<QVector>> centers_on_component_;
};

std::vector<std::vector<double>> generate_critical_points(FixtureCase c, std::size_t n, Rng& rng,
                                                          double window = std::numeric_limits<double>::infinity());

// Gaussian offsets on the four affine coordinates; x5 stays 1.
void perturb_scene(std::vector<std::vector<double>>& pts, double sigma, Rng& rng);
// Dehomogenizes and adds Gaussian offsets to the two affine coordinates.
// Throws ImageAtInfinity when the third coordinate vanishes.
Vec3<double> perturb_image(const Vec3<double>& x, double sigma, Rng& rng);

// Images of the scene under the cameras with image noise; the third view
// gets the line through its noisy image and a random auxiliary point.
std::vector<DTriple> noisy_correspondences(const CameraTriple<double>& cams,
                                           const std::vector<std::vector<double>>& pts, double image_sigma, Rng& rng);

// Distance between T_P and the tensor estimated from noisy images of `pts`.
double trial_distance(const CriticalScene& scene, const std::vector<std::vector<double>>& pts, double image_sigma,
                      Rng& rng);

struct Calibration {
  double m = 0;
  double delta = 0;
  int trials = 0;
};
// Mean distance over random non-critical scenes, then delta per policy.
Calibration calibrate_delta(const CriticalScene& scene, const ExperimentConfig& cfg);

struct TrialRecord {
  double sigma = 0;
  int repeat = 0;
  double distance = 0;
  bool is_near = false;
  double m = 0, delta = 0;
  int attempts = 1;
};

struct SigmaSummary {
  double sigma = 0;
  int near_count = 0, far_count = 0;
  double mean_distance = 0;
};

struct SweepResult {
  Calibration calibration;
  std::vector<TrialRecord> records;  // ordered by (sigma, repeat)
  std::vector<SigmaSummary> summary;
};

SweepResult run_sweep(const ExperimentConfig& cfg);
SweepResult run_sweep(const CriticalScene& scene, const ExperimentConfig& cfg, const Calibration& cal);
std::vector<SigmaSummary> summarize(const std::vector<TrialRecord>& records);

inline constexpr std::string_view kSweepCsvHeader = "case,sigma,repeat,distance,m,delta,is_near,attempts";
void write_sweep_csv(std::ostream& os, FixtureCase c, const std::vector<TrialRecord>& records);

}  // namespace critloc
