#include <gtest/gtest.h>

#include <sstream>

#include "critloc/critical.hpp"
#include "critloc/io.hpp"
#include "critloc/recon.hpp"

using namespace critloc;

namespace {

CameraTriple<Rational> random_cameras(Rng& rng) {
  CameraTriple<Rational> c;
  for (auto& p : c) {
    do p = random_matrix(rng, 3, 5);
    while (rank(p) != 3);
  }
  return c;
}

// Cameras 1 and 2 share their first two rows, so their centers meet.
CameraTriple<Rational> shared_rows_cameras(Rng& rng) {
  auto c = random_cameras(rng);
  for (std::size_t k = 0; k < 5; ++k) {
    c[1](0, k) = c[0](0, k);
    c[1](1, k) = c[0](1, k);
  }
  return c;
}

QVector vec_of(const QTensor& t) { return QVector(t.v.begin(), t.v.end()); }

}  // namespace

TEST(DesignMatrix, RowExpandsTheTrilinearForm) {
  Rng rng = make_rng(1);
  QTriple t;
  for (auto& v : t.v) {
    auto r = random_vector(rng, 3);
    v = {r[0], r[1], r[2]};
  }
  QMatrix m = assemble_MT<Rational>({t});
  ASSERT_EQ(m.rows(), 1u);
  ASSERT_EQ(m.cols(), 27u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(m(0, 9 * i + 3 * j + k), t.v[0][i] * t.v[1][j] * t.v[2][k]);
}

TEST(DesignMatrix, ExactTriplesAnnihilateTrueTensor) {
  Rng rng = make_rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto cams = random_cameras(rng);
    QVector t = vec_of(trifocal_tensor(cams[0], cams[1], cams[2]));
    auto m = assemble_MT(correspondences_from_scene(cams, random_scene_rational(30, rng), rng));
    for (const auto& e : mat_vec(m, t)) EXPECT_EQ(sgn(e), 0);
  }
}

TEST(DesignMatrix, DuplicatedTripleKeepsRank) {
  Rng rng = make_rng(3);
  auto cams = random_cameras(rng);
  auto tri = correspondences_from_scene(cams, random_scene_rational(12, rng), rng);
  auto before = rank(assemble_MT(tri));
  tri.push_back(tri.front());
  EXPECT_EQ(rank(assemble_MT(tri)), before);
}

TEST(Estimate, NoiselessRecoveryIsExactUpToSign) {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto cams = to_double(random_cameras(rng));
    auto est = estimate_tensor(assemble_MT(correspondences_from_scene(cams, random_scene(60, rng), rng)));
    ASSERT_EQ(est.numerical_rank, 26);
    EXPECT_TRUE(est.unique);
    EXPECT_LT(tensor_distance(est.tensor, trifocal_tensor(cams[0], cams[1], cams[2])), 1e-9);
  }
}

TEST(Estimate, FewRowsAreNotUnique) {
  Rng rng = make_rng(5);
  auto cams = to_double(random_cameras(rng));
  auto est = estimate_tensor(assemble_MT(correspondences_from_scene(cams, random_scene(10, rng), rng)));
  EXPECT_LE(est.numerical_rank, 10);
  EXPECT_FALSE(est.unique);
  EXPECT_EQ(est.singular_values.size(), 27u);
}

TEST(Rank, FixturesHaveMaximalRank) {
  Rng rng = make_rng(6);
  for (FixtureCase c : {FixtureCase::ScrollI, FixtureCase::ConeIV, FixtureCase::QuadricV}) {
    CameraTriple<Rational> cams = fixture(c).P;
    EXPECT_EQ(rank_MT_diagnostic(to_double(cams), 50, rng), 26) << to_string(c);
    EXPECT_EQ(rank_MT_exact(cams, 50, rng), 26) << to_string(c);
  }
}

TEST(Rank, RowBound) {
  Rng rng = make_rng(7);
  EXPECT_LE(rank_MT_diagnostic(to_double(random_cameras(rng)), 10, rng), 10);
}

TEST(Rank, SharedRowsGiveRank24WithSkewNullspace) {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    auto cams = shared_rows_cameras(rng);
    EXPECT_EQ(rank_MT_exact(cams, 50, rng), 24);
    auto dc = to_double(cams);
    auto mt = assemble_MT(correspondences_from_scene(dc, random_scene(50, rng), rng));
    EXPECT_EQ(numerical_rank(mt, kRankTolerance), 24u);
    auto null = nullspace_tensors(mt);
    ASSERT_EQ(null.size(), 3u);
    for (const auto& t : null) EXPECT_TRUE(degenerate_structure_check(t));
    // Any unit combination keeps the pattern.
    DTensor mix;
    for (std::size_t i = 0; i < 27; ++i) mix.v[i] = 0.3 * null[0].v[i] - 0.5 * null[1].v[i] + 0.8 * null[2].v[i];
    EXPECT_TRUE(degenerate_structure_check(mix));
  }
}

TEST(Rank, HyperplaneSceneIsDeficient) {
  Rng rng = make_rng(9);
  auto cams = to_double(CameraTriple<Rational>(fixture(FixtureCase::ScrollI).P));
  auto pts = random_scene(50, rng);
  for (auto& p : pts) p[3] = 0.3 * p[0] - 0.2 * p[1] + 0.5;
  auto est = estimate_tensor(assemble_MT(correspondences_from_scene(cams, pts, rng)));
  EXPECT_LT(est.numerical_rank, 26);
  EXPECT_FALSE(est.unique);
}

TEST(TriplesCsv, RoundTrip) {
  Rng rng = make_rng(10);
  auto cams = to_double(random_cameras(rng));
  auto tri = correspondences_from_scene(cams, random_scene(30, rng), rng);
  std::stringstream ss;
  write_triples_csv(ss, tri);
  auto back = read_triples_csv(ss);
  ASSERT_EQ(back.size(), tri.size());
  for (std::size_t r = 0; r < tri.size(); ++r)
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back[r].v[v][i], tri[r].v[v][i]);
}

TEST(TriplesCsv, RejectsMalformedInput) {
  std::stringstream bad_header("a,b\n");
  EXPECT_THROW(read_triples_csv(bad_header), Error);
  std::stringstream short_row(std::string(kTriplesCsvHeader) + "\n1,2,3\n");
  EXPECT_THROW(read_triples_csv(short_row), Error);
}
