#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "critloc/matrix.hpp"
#include "critloc/multiview.hpp"
#include "critloc/random.hpp"

namespace critloc {

template <class T>
using CameraTriple = std::array<Matrix<T>, 3>;

// One homogeneous 3-vector per view, in view order. The entry of the line view
// of the profile holds the dual coordinates of a line, the others image points.
template <class T>
struct Triple {
  std::array<Vec3<T>, 3> v;
};
using QTriple = Triple<Rational>;
using DTriple = Triple<double>;

// Images of the scene points. The line view gets the line through the image
// point and a random auxiliary point (integer entries for rationals, a
// Gaussian direction for doubles). Throws OnCenter.
template <class T>
std::vector<Triple<T>> correspondences_from_scene(const CameraTriple<T>& cams, const std::vector<std::vector<T>>& pts,
                                                  Rng& rng, Profile profile = Profile::P221);

// Row r, column 9i+3j+k holds v0_i * v1_j * v2_k of triple r.
template <class T>
Matrix<T> assemble_MT(const std::vector<Triple<T>>& triples);

struct EstimationResult {
  DTensor tensor;                      // unit Frobenius norm
  std::vector<double> singular_values;  // 27 values, descending, zero-padded
  int numerical_rank = 0;
  bool unique = false;  // numerical_rank == 26
};

inline constexpr double kRankTolerance = 1e-8;

// Right singular vector of the smallest singular value.
EstimationResult estimate_tensor(const DMatrix& mt, double relative_tol = kRankTolerance,
                                 Profile profile = Profile::P221);

// min(|A - B|, |A + B|) after normalizing both to unit Frobenius norm.
double tensor_distance(const DTensor& a, const DTensor& b);

// Uniform scene points in [-1, 1]^4 with x5 = 1.
std::vector<std::vector<double>> random_scene(std::size_t n, Rng& rng);
std::vector<QVector> random_scene_rational(std::size_t n, Rng& rng);

int rank_MT_diagnostic(const CameraTriple<double>& cams, std::size_t n_triples, Rng& rng,
                       Profile profile = Profile::P221, double relative_tol = kRankTolerance);
// Exact rank of M_T over Q.
int rank_MT_exact(const CameraTriple<Rational>& cams, std::size_t n_triples, Rng& rng,
                  Profile profile = Profile::P221);

CameraTriple<double> to_double(const CameraTriple<Rational>& cams);

// Nullspace of M_T (right singular vectors below the threshold), as tensors.
std::vector<DTensor> nullspace_tensors(const DMatrix& mt, double relative_tol = kRankTolerance);

}  // namespace critloc
