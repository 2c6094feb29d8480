#include "critloc/recon.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace critloc {

namespace {

Vec3<Rational> auxiliary_point(Rng& rng, Rational) {
  return {random_int(rng), random_int(rng), random_int(rng)};
}

Vec3<double> auxiliary_point(Rng& rng, double) {
  std::normal_distribution<double> gauss;
  return {gauss(rng), gauss(rng), gauss(rng)};
}

Eigen::MatrixXd to_eigen(const DMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

DTensor column_tensor(const Eigen::MatrixXd& v, Eigen::Index col, Profile profile) {
  DTensor t;
  t.profile = profile;
  for (std::size_t i = 0; i < 27; ++i) t.v[i] = v(static_cast<Eigen::Index>(i), col);
  return t;
}

}  // namespace

template <class T>
std::vector<Triple<T>> correspondences_from_scene(const CameraTriple<T>& cams, const std::vector<std::vector<T>>& pts,
                                                  Rng& rng, Profile profile) {
  std::size_t lv = line_view(profile);
  std::vector<Triple<T>> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    Triple<T> t;
    for (std::size_t view = 0; view < 3; ++view) t.v[view] = project(cams[view], x);
    for (int attempt = 0;; ++attempt) {
      try {
        t.v[lv] = line_through(t.v[lv], auxiliary_point(rng, T{}));
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DependentPoints || attempt > 20) throw;
      }
    }
    out.push_back(t);
  }
  return out;
}

template <class T>
Matrix<T> assemble_MT(const std::vector<Triple<T>>& triples) {
  Matrix<T> m(triples.size(), 27);
  for (std::size_t r = 0; r < triples.size(); ++r) {
    const auto& v = triples[r].v;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        T ij = v[0][i] * v[1][j];
        for (std::size_t k = 0; k < 3; ++k) m(r, DTensor::index(i, j, k)) = ij * v[2][k];
      }
  }
  return m;
}

template std::vector<Triple<Rational>> correspondences_from_scene(const CameraTriple<Rational>&,
                                                                  const std::vector<std::vector<Rational>>&, Rng&,
                                                                  Profile);
template std::vector<Triple<double>> correspondences_from_scene(const CameraTriple<double>&,
                                                                const std::vector<std::vector<double>>&, Rng&,
                                                                Profile);
template Matrix<Rational> assemble_MT(const std::vector<Triple<Rational>>&);
template Matrix<double> assemble_MT(const std::vector<Triple<double>>&);

EstimationResult estimate_tensor(const DMatrix& mt, double relative_tol, Profile profile) {
  if (mt.cols() != 27) throw Error(ErrorCode::InvalidParams, "design matrix needs 27 columns");
  EstimationResult r;
  r.singular_values.assign(27, 0.0);
  if (mt.rows() == 0) {
    r.tensor.profile = profile;
    r.tensor.v[0] = 1;
    return r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(mt), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) r.singular_values[i] = s(i);
  double smax = s.size() ? s(0) : 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > relative_tol * smax) ++r.numerical_rank;
  r.unique = r.numerical_rank == 26;
  r.tensor = normalized(column_tensor(svd.matrixV(), 26, profile));
  return r;
}

std::vector<DTensor> nullspace_tensors(const DMatrix& mt, double relative_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(mt), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > relative_tol * smax) ++rank;
  std::vector<DTensor> out;
  for (Eigen::Index c = rank; c < 27; ++c) out.push_back(column_tensor(svd.matrixV(), c, Profile::P221));
  return out;
}

double tensor_distance(const DTensor& a, const DTensor& b) {
  DTensor na = normalized(a), nb = normalized(b);
  double minus = 0, plus = 0;
  for (std::size_t i = 0; i < 27; ++i) {
    minus += (na.v[i] - nb.v[i]) * (na.v[i] - nb.v[i]);
    plus += (na.v[i] + nb.v[i]) * (na.v[i] + nb.v[i]);
  }
  return std::sqrt(std::min(minus, plus));
}

std::vector<std::vector<double>> random_scene(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(kNumVars, 1.0));
  for (auto& p : pts)
    for (int i = 0; i < 4; ++i) p[i] = u(rng);
  return pts;
}

std::vector<QVector> random_scene_rational(std::size_t n, Rng& rng) {
  std::vector<QVector> pts(n, QVector(kNumVars, Rational(1)));
  for (auto& p : pts)
    for (int i = 0; i < 4; ++i) p[i] = random_int(rng);
  return pts;
}

CameraTriple<double> to_double(const CameraTriple<Rational>& cams) {
  return {to_double(cams[0]), to_double(cams[1]), to_double(cams[2])};
}

int rank_MT_diagnostic(const CameraTriple<double>& cams, std::size_t n_triples, Rng& rng, Profile profile,
                       double relative_tol) {
  auto triples = correspondences_from_scene(cams, random_scene(n_triples, rng), rng, profile);
  return static_cast<int>(numerical_rank(assemble_MT(triples), relative_tol));
}

int rank_MT_exact(const CameraTriple<Rational>& cams, std::size_t n_triples, Rng& rng, Profile profile) {
  auto triples = correspondences_from_scene(cams, random_scene_rational(n_triples, rng), rng, profile);
  return static_cast<int>(rank(assemble_MT(triples)));
}

}  // namespace critloc
