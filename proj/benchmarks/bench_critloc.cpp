#include <benchmark/benchmark.h>

#include "critloc/classify.hpp"
#include "critloc/harness.hpp"
#include "critloc/linform_matrix.hpp"
#include "critloc/multiview.hpp"
#include "critloc/poly_algebra.hpp"
#include "critloc/recon.hpp"

using namespace critloc;

namespace {

CameraTriple<double> random_cameras(Rng& rng) {
  CameraTriple<Rational> c;
  for (auto& p : c) {
    do p = random_matrix(rng, 3, 5);
    while (rank(p) != 3);
  }
  return to_double(c);
}

}  // namespace

static void BM_MinorsGcd(benchmark::State& state) {
  Rng rng = make_rng(1);
  auto n = transform(random_invertible(rng, 4), random_family_instance(Family::S1X1, rng), random_invertible(rng, 3));
  for (auto _ : state) benchmark::DoNotOptimize(gcd_many_unchecked(maximal_minors_signed(n)));
}
BENCHMARK(BM_MinorsGcd)->Unit(benchmark::kMicrosecond);

static void BM_Classify4x3(benchmark::State& state) {
  Family f = static_cast<Family>(state.range(0));
  Rng rng = make_rng(2);
  auto n = transform(random_invertible(rng, 4), random_family_instance(f, rng), random_invertible(rng, 3));
  state.SetLabel(std::string(to_string(f)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_4x3(n));
}
BENCHMARK(BM_Classify4x3)
    ->Arg(static_cast<int>(Family::A))
    ->Arg(static_cast<int>(Family::D))
    ->Arg(static_cast<int>(Family::S1X1))
    ->Arg(static_cast<int>(Family::S3X3))
    ->Unit(benchmark::kMillisecond);

static void BM_ClassifyGeneric(benchmark::State& state) {
  Rng rng = make_rng(3);
  auto n = random_generic_4x3(rng);
  for (auto _ : state) benchmark::DoNotOptimize(classify_4x3(n));
}
BENCHMARK(BM_ClassifyGeneric)->Unit(benchmark::kMillisecond);

static void BM_TrifocalTensorExact(benchmark::State& state) {
  Rng rng = make_rng(4);
  QMatrix p[3];
  for (auto& m : p) m = random_matrix(rng, 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(trifocal_tensor(p[0], p[1], p[2]));
}
BENCHMARK(BM_TrifocalTensorExact)->Unit(benchmark::kMicrosecond);

static void BM_TrifocalTensorDouble(benchmark::State& state) {
  Rng rng = make_rng(5);
  auto c = random_cameras(rng);
  for (auto _ : state) benchmark::DoNotOptimize(trifocal_tensor(c[0], c[1], c[2]));
}
BENCHMARK(BM_TrifocalTensorDouble)->Unit(benchmark::kMicrosecond);

static void BM_EstimateTensor(benchmark::State& state) {
  Rng rng = make_rng(6);
  auto c = random_cameras(rng);
  auto mt = assemble_MT(correspondences_from_scene(c, random_scene(state.range(0), rng), rng));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tensor(mt));
}
BENCHMARK(BM_EstimateTensor)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_CalibrationTrial(benchmark::State& state) {
  CriticalScene scene(FixtureCase::ScrollI);
  Rng rng = make_rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(trial_distance(scene, random_scene(100, rng), 0.01, rng));
}
BENCHMARK(BM_CalibrationTrial)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
