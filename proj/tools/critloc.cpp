#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "critloc/classify.hpp"
#include "critloc/critical.hpp"
#include "critloc/harness.hpp"
#include "critloc/io.hpp"
#include "critloc/loci.hpp"
#include "critloc/multiview.hpp"
#include "critloc/recon.hpp"

using namespace critloc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFixture = 3;

template <class T>
void print_matrix(std::ostream& os, const Matrix<T>& m) {
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::ostringstream ss;
      if constexpr (std::is_same_v<T, Rational>) ss << to_string(m(r, c));
      else ss << m(r, c);
      cells.push_back(ss.str());
      width = std::max(width, cells.back().size());
    }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << "  [";
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "  " : "") << std::setw(static_cast<int>(width)) << cells[r * m.cols() + c];
    os << "]\n";
  }
}

Profile profile_arg(const std::string& s) {
  auto p = profile_from_string(s);
  if (!p) throw Error(ErrorCode::InvalidConfig, "unknown profile '" + s + "' (221, 212, 122)");
  return *p;
}

// "builtin:<case>" or a JSON file with P and Q.
CameraPairConfig load_pair(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    auto c = fixture_case_from_string(source.substr(prefix.size()));
    if (!c) throw Error(ErrorCode::InvalidConfig, "unknown builtin fixture '" + source + "'");
    return fixture(*c);
  }
  return camera_pair_from_json(read_text_file(source));
}

// "builtin:<family>" draws a seeded instance; anything else is a JSON file.
LinFormMatrix load_matrix(const std::string& source, std::uint64_t seed) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    auto f = family_from_string(source.substr(prefix.size()));
    if (!f || expected_factor_degree(*f) == 0) throw Error(ErrorCode::InvalidConfig, "unknown family '" + source + "'");
    Rng rng = make_rng(seed, {0});
    return random_family_instance(*f, rng);
  }
  return linform_matrix_from_json(read_text_file(source));
}

void print_canonicalization(const Canonicalization& c) {
  std::cout << "family: " << to_string(c.family) << "\n";
  if (c.flag != ClassFlag::None) std::cout << "flag: " << to_string(c.flag) << "\n";
  std::cout << "common factor: " << c.common_factor << " (degree " << c.factor_degree << ")\n";
  if (!c.note.empty()) std::cout << "note: " << c.note << "\n";
  if (c.R.rows()) {
    std::cout << "R:\n";
    print_matrix(std::cout, c.R);
    std::cout << "C:\n";
    print_matrix(std::cout, c.C);
    std::cout << "R*N*C:\n";
    print_matrix(std::cout, c.canonical);
  }
}

void print_decomposition(const LocusDecomposition& d) {
  std::cout << std::left << std::setw(8) << "name" << std::setw(22) << "kind" << std::setw(5) << "dim" << std::setw(8)
            << "degree" << "generators\n";
  for (const auto& comp : d.components) {
    std::cout << std::setw(8) << comp.name << std::setw(22) << to_string(comp.kind) << std::setw(5) << comp.dim
              << std::setw(8) << comp.degree;
    for (std::size_t i = 0; i < comp.generators.size(); ++i) std::cout << (i ? ", " : "") << comp.generators[i];
    std::cout << "\n";
  }
  std::cout << std::right;
}

struct Options {
  // classify
  std::string matrix;
  std::uint64_t seed = 1;
  bool json = false;
  // loci
  std::size_t samples = 100;
  // tensor
  std::string cameras, triples, profile = "221", out;
  double rank_tol = kRankTolerance;
  // critical
  std::string pair;
  // experiment
  std::string case_tag;
  ExperimentConfig exp;
  double delta_multiple = 0, delta_fixed = 0;
  bool reference = false;
  std::string summary;
};

int cmd_classify(const Options& o) {
  LinFormMatrix n = load_matrix(o.matrix, o.seed);
  Canonicalization c = n.rows() == 3 && n.cols() == 2 ? classify_3x2(n) : classify_4x3(n);
  if (o.json) {
    std::cout << canonicalization_to_json(c) << "\n";
  } else {
    print_canonicalization(c);
    std::string why;
    if (c.R.rows()) std::cout << "certificate: " << (certificate_valid(n, c, &why) ? "valid" : "INVALID " + why) << "\n";
  }
  return 0;
}

int cmd_loci(const Options& o) {
  LinFormMatrix n = load_matrix(o.matrix, o.seed);
  Rng rng = make_rng(o.seed, {1});
  LociVerification v = verify_loci(n, o.samples, rng);
  if (o.json) {
    std::cout << loci_report_to_json(v) << "\n";
  } else {
    std::cout << "family: " << to_string(v.canonical.family) << "\n";
    print_decomposition(v.decomposition);
    for (const auto& c : v.checks) std::cout << (c.ok ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    std::cout << (v.ok() ? "verification passed" : "verification FAILED") << "\n";
  }
  return v.ok() ? 0 : 1;
}

int cmd_tensor_build(const Options& o) {
  auto cams = camera_triple_from_json(read_text_file(o.cameras));
  QTensor t = trifocal_tensor(cams[0], cams[1], cams[2], profile_arg(o.profile));
  std::cout << tensor_to_json(t) << "\n";
  return 0;
}

int cmd_tensor_estimate(const Options& o) {
  std::ifstream in(o.triples);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open '" + o.triples + "'");
  auto triples = read_triples_csv(in);
  EstimationResult est = estimate_tensor(assemble_MT(triples), o.rank_tol, profile_arg(o.profile));
  std::cout << "rows: " << triples.size() << "\nnumerical rank: " << est.numerical_rank
            << "\nunique: " << (est.unique ? "yes" : "no") << "\nsmallest singular values:";
  for (std::size_t i = 24; i < 27; ++i) std::cout << " " << est.singular_values[i];
  std::cout << "\ntensor: " << tensor_to_json(est.tensor) << "\n";
  return 0;
}

int cmd_critical_reduce(const Options& o) {
  CameraPairConfig cfg;
  try {
    cfg = load_pair(o.pair);
    validate(cfg);
  } catch (const Error& e) {
    std::cerr << "fixture error: " << e.what() << "\n";
    return kExitFixture;
  }
  auto rcm = reduce_to_N(cfg);
  std::cout << "rows kept in A: " << rcm.top_rows[0] + 1 << " " << rcm.top_rows[1] + 1 << " " << rcm.top_rows[2] + 1
            << " " << rcm.top_rows[3] + 1 << "\nN:\n";
  print_matrix(std::cout, rcm.N);
  auto centers = column_center_check(rcm, cfg);
  std::cout << "column/center check: " << (centers.ok ? "ok" : "FAILED " + centers.message) << "\n";
  Canonicalization c = classify_4x3(rcm.N);
  print_canonicalization(c);
  if (c.family != Family::NonDegenerate && c.flag == ClassFlag::None) print_decomposition(decompose(c));
  return 0;
}

ExperimentConfig experiment_config(const Options& o, const CLI::App& app) {
  ExperimentConfig cfg = o.exp;
  ExperimentConfig defaults = default_config(parse_case(o.case_tag));
  cfg.case_tag = defaults.case_tag;
  if (app.count("--points") == 0) cfg.n_points = defaults.n_points;
  if (o.reference) {
    cfg.delta_policy = DeltaPolicy::Reference;
  } else if (app.count("--delta-fixed")) {
    cfg.delta_policy = DeltaPolicy::Fixed;
    cfg.delta_fixed = o.delta_fixed;
  } else {
    cfg.delta_policy = DeltaPolicy::Multiple;
    if (app.count("--delta-multiple")) cfg.delta_multiple = o.delta_multiple;
  }
  validate(cfg);
  return cfg;
}

int cmd_experiment_run(const Options& o, const CLI::App& app) {
  ExperimentConfig cfg = experiment_config(o, app);
  auto start = std::chrono::steady_clock::now();
  SweepResult res = run_sweep(cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.out.empty() || o.out == "-") {
    write_sweep_csv(std::cout, cfg.case_tag, res.records);
  } else {
    std::ofstream os(o.out);
    if (!os) throw Error(ErrorCode::InvalidConfig, "cannot write '" + o.out + "'");
    write_sweep_csv(os, cfg.case_tag, res.records);
  }
  if (!o.summary.empty()) {
    std::ofstream os(o.summary);
    if (!os) throw Error(ErrorCode::InvalidConfig, "cannot write '" + o.summary + "'");
    os << sweep_summary_to_json(cfg.case_tag, res) << "\n";
  }
  int near = 0, redraws = 0;
  for (const auto& r : res.records) {
    near += r.is_near;
    redraws += r.attempts - 1;
  }
  std::cerr << to_string(cfg.case_tag) << ": m=" << res.calibration.m << " delta=" << res.calibration.delta
            << " trials=" << res.records.size() << " near=" << near << " redraws=" << redraws << " time=" << secs
            << "s\n";
  return 0;
}

int cmd_experiment_calibrate(const Options& o, const CLI::App& app) {
  ExperimentConfig cfg = experiment_config(o, app);
  if (cfg.delta_policy == DeltaPolicy::Reference) cfg.delta_policy = DeltaPolicy::Multiple;
  auto start = std::chrono::steady_clock::now();
  CriticalScene scene(cfg.case_tag);
  Calibration cal = calibrate_delta(scene, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto pub = reference_calibration(cfg.case_tag);
  std::cout << "case: " << to_string(cfg.case_tag) << "\ntrials: " << cal.trials << "\nm: " << cal.m
            << "\ndelta: " << cal.delta << "\nreference m: " << pub.m << "\nreference delta: " << pub.delta
            << "\ntime: " << secs << "s\n";
  return 0;
}

void add_experiment_options(CLI::App* sub, Options& o) {
  sub->add_option("--case", o.case_tag, "scroll_i, cone_iv or quadric_v")->required();
  sub->add_option("--seed", o.exp.seed, "RNG seed");
  sub->add_option("--points", o.exp.n_points, "scene points per trial (default 100, 99 for quadric_v)");
  sub->add_option("--image-sigma", o.exp.image_sigma, "image noise standard deviation");
  sub->add_option("--trials", o.exp.calibration_trials, "calibration trials");
  sub->add_option("--threads", o.exp.threads, "worker threads");
  sub->add_option("--scene-window", o.exp.scene_window, "bound on affine coordinates of critical points");
  auto* mult = sub->add_option("--delta-multiple", o.delta_multiple, "delta as a multiple of m (default 2)");
  auto* fixed = sub->add_option("--delta-fixed", o.delta_fixed, "fixed delta");
  auto* pub = sub->add_flag("--reference", o.reference, "use the reference (m, delta) of the case");
  mult->excludes(fixed)->excludes(pub);
  fixed->excludes(pub);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical loci of camera pairs and trifocal tensor experiments"};
  app.require_subcommand(1);
  Options o;

  auto* classify = app.add_subcommand("classify", "classify a matrix of linear forms");
  classify->add_option("--fixture", o.matrix, "JSON matrix file or builtin:<family>")->required();
  classify->add_option("--seed", o.seed, "seed for builtin instances");
  classify->add_flag("--json", o.json, "print JSON");

  auto* loci = app.add_subcommand("loci", "critical locus components");
  loci->require_subcommand(1);
  auto* verify = loci->add_subcommand("verify", "decompose and verify the locus of a 4x3 matrix");
  verify->add_option("--fixture", o.matrix, "JSON matrix file or builtin:<family>")->required();
  verify->add_option("--samples", o.samples, "points sampled per component");
  verify->add_option("--seed", o.seed, "RNG seed");
  verify->add_flag("--json", o.json, "print the JSON report");

  auto* tensor = app.add_subcommand("tensor", "trifocal tensors");
  tensor->require_subcommand(1);
  auto* build = tensor->add_subcommand("build", "exact tensor of three cameras");
  build->add_option("--cameras", o.cameras, "JSON file with 'cameras' or 'P'")->required();
  build->add_option("--profile", o.profile, "221, 212 or 122");
  auto* estimate = tensor->add_subcommand("estimate", "estimate a tensor from correspondences");
  estimate->add_option("--triples", o.triples, "triples CSV")->required();
  estimate->add_option("--profile", o.profile, "221, 212 or 122");
  estimate->add_option("--rank-tol", o.rank_tol, "relative singular value threshold");

  auto* critical = app.add_subcommand("critical", "critical loci of camera pairs");
  critical->require_subcommand(1);
  auto* reduce = critical->add_subcommand("reduce", "reduce M to N, classify and decompose");
  reduce->add_option("--fixture", o.pair, "JSON camera pair or builtin:scroll_i|cone_iv|quadric_v")->required();

  auto* experiment = app.add_subcommand("experiment", "instability experiments");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "sigma sweep");
  add_experiment_options(run, o);
  run->add_option("--sigma-min", o.exp.sigma_min);
  run->add_option("--sigma-max", o.exp.sigma_max);
  run->add_option("--sigma-step", o.exp.sigma_step);
  run->add_option("--repeats", o.exp.repeats);
  run->add_flag("--fixed-scene", o.exp.fixed_scene, "one critical scene per sigma");
  run->add_option("--out", o.out, "CSV output (default stdout)");
  run->add_option("--summary", o.summary, "per-sigma JSON summary");
  auto* calibrate = experiment->add_subcommand("calibrate", "mean distance on random scenes");
  add_experiment_options(calibrate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*classify) return cmd_classify(o);
    if (*verify) return cmd_loci(o);
    if (*build) return cmd_tensor_build(o);
    if (*estimate) return cmd_tensor_estimate(o);
    if (*reduce) return cmd_critical_reduce(o);
    if (*run) return cmd_experiment_run(o, *run);
    if (*calibrate) return cmd_experiment_calibrate(o, *calibrate);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::InvalidConfig:
      case ErrorCode::ParseError: return kExitConfig;
      case ErrorCode::CenterMismatch:
      case ErrorCode::NoInvertibleBlock: return kExitFixture;
      default: return 1;
    }
  }
  return 1;
}
