#include "critloc/multiview.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace critloc {

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::P221: return "221";
    case Profile::P212: return "212";
    case Profile::P122: return "122";
  }
  return "?";
}

std::optional<Profile> profile_from_string(std::string_view s) {
  for (Profile p : {Profile::P221, Profile::P212, Profile::P122}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::array<int, 3> codims(Profile p) {
  switch (p) {
    case Profile::P221: return {2, 2, 1};
    case Profile::P212: return {2, 1, 2};
    case Profile::P122: return {1, 2, 2};
  }
  return {0, 0, 0};
}

std::size_t line_view(Profile p) {
  auto c = codims(p);
  for (std::size_t i = 0; i < 3; ++i)
    if (c[i] == 1) return i;
  return 2;
}

namespace {

void check_camera_shape(std::size_t rows, std::size_t cols) {
  if (rows != 3 || cols != 5) throw Error(ErrorCode::InvalidParams, "camera must be 3x5");
}

bool is_zero(const Rational& v) { return sgn(v) == 0; }
double as_double(const Rational& v) { return v.get_d(); }
double as_double(double v) { return v; }

template <class T>
bool negligible(const Vec3<T>& v, double scale) {
  if constexpr (std::is_same_v<T, Rational>) {
    (void)scale;
    return is_zero(v[0]) && is_zero(v[1]) && is_zero(v[2]);
  } else {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return n <= 1e-12 * scale;
  }
}

template <class T>
double magnitude(const std::vector<T>& v) {
  double s = 0;
  for (const auto& a : v) {
    double d = as_double(a);
    s += d * d;
  }
  return std::sqrt(s);
}

template <class T>
Matrix<T> stack_for_221(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3, std::size_t i, std::size_t j,
                        std::size_t k) {
  Matrix<T> m(5, 5);
  std::size_t r = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    if (a == i) continue;
    for (std::size_t c = 0; c < 5; ++c) m(r, c) = p1(a, c);
    ++r;
  }
  for (std::size_t a = 0; a < 3; ++a) {
    if (a == j) continue;
    for (std::size_t c = 0; c < 5; ++c) m(r, c) = p2(a, c);
    ++r;
  }
  for (std::size_t c = 0; c < 5; ++c) m(4, c) = p3(k, c);
  return m;
}

template <class T>
Tensor<T> tensor_221(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3) {
  Tensor<T> t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        T d = determinant(stack_for_221(p1, p2, p3, i, j, k));
        t(i, j, k) = (i + j) % 2 ? T(-d) : d;
      }
  return t;
}

}  // namespace

std::vector<QVector> center(const QMatrix& camera) {
  check_camera_shape(camera.rows(), camera.cols());
  if (rank(camera) != 3) throw Error(ErrorCode::RankDeficient, "camera has rank below 3");
  return kernel_basis(camera);
}

std::vector<std::vector<double>> center(const DMatrix& camera) {
  check_camera_shape(camera.rows(), camera.cols());
  Eigen::Matrix<double, 3, 5> a;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 5; ++c) a(r, c) = camera(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(2) <= 1e-12 * s(0)) throw Error(ErrorCode::RankDeficient, "camera has rank below 3");
  std::vector<std::vector<double>> out;
  for (int c = 3; c < 5; ++c) {
    std::vector<double> v(5);
    for (int r = 0; r < 5; ++r) v[r] = svd.matrixV()(r, c);
    out.push_back(v);
  }
  return out;
}

template <class T>
Vec3<T> project(const Matrix<T>& camera, const std::vector<T>& point) {
  check_camera_shape(camera.rows(), camera.cols());
  if (point.size() != 5) throw Error(ErrorCode::InvalidParams, "scene point must have 5 coordinates");
  Vec3<T> out{};
  for (std::size_t r = 0; r < 3; ++r) {
    T s{};
    for (std::size_t c = 0; c < 5; ++c) s += camera(r, c) * point[c];
    out[r] = s;
  }
  if (negligible(out, magnitude(camera.data()) * magnitude(point))) {
    throw Error(ErrorCode::OnCenter, "point lies on the center of projection");
  }
  return out;
}

template <class T>
Vec3<T> line_through(const Vec3<T>& z, const Vec3<T>& w) {
  Vec3<T> p{z[1] * w[2] - z[2] * w[1], z[2] * w[0] - z[0] * w[2], z[0] * w[1] - z[1] * w[0]};
  std::vector<T> zv(z.begin(), z.end()), wv(w.begin(), w.end());
  if (negligible(p, magnitude(zv) * magnitude(wv))) throw Error(ErrorCode::DependentPoints, "points coincide");
  return p;
}

template <class T>
Vec3<T> epipole_line(const Matrix<T>& camera_r, const std::vector<std::vector<T>>& center_s) {
  if (center_s.size() != 2) throw Error(ErrorCode::InvalidParams, "center needs two basis vectors");
  Vec3<T> a = project(camera_r, center_s[0]);
  Vec3<T> b = project(camera_r, center_s[1]);
  try {
    return line_through(a, b);
  } catch (const Error&) {
    throw Error(ErrorCode::DegenerateImage, "center images coincide");
  }
}

template <class T>
Tensor<T> trifocal_tensor(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3, Profile profile) {
  check_camera_shape(p1.rows(), p1.cols());
  check_camera_shape(p2.rows(), p2.cols());
  check_camera_shape(p3.rows(), p3.cols());
  Tensor<T> out;
  out.profile = profile;
  switch (profile) {
    case Profile::P221:
      out.v = tensor_221(p1, p2, p3).v;
      break;
    case Profile::P212: {
      Tensor<T> base = tensor_221(p1, p3, p2);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t k = 0; k < 3; ++k) out(i, j, k) = base(i, k, j);
      break;
    }
    case Profile::P122: {
      Tensor<T> base = tensor_221(p2, p3, p1);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t k = 0; k < 3; ++k) out(i, j, k) = base(j, k, i);
      break;
    }
  }
  return out;
}

template <class T>
T grassmann_det(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3, const Vec3<T>& x, const Vec3<T>& y,
                const Vec3<T>& z, const Vec3<T>& w) {
  Matrix<T> m(9, 9);
  const Matrix<T>* cams[3] = {&p1, &p2, &p3};
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 5; ++c) m(3 * b + r, 4 + c) = (*cams[b])(r, c);
  for (std::size_t r = 0; r < 3; ++r) {
    m(r, 0) = x[r];
    m(3 + r, 1) = y[r];
    m(6 + r, 2) = z[r];
    m(6 + r, 3) = w[r];
  }
  return determinant(m);
}

template <class T>
T trilinear(const Tensor<T>& t, const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  T s{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) s += t(i, j, k) * a[i] * b[j] * c[k];
  return s;
}

DTensor to_double(const QTensor& t) {
  DTensor out;
  out.profile = t.profile;
  for (std::size_t i = 0; i < 27; ++i) out.v[i] = t.v[i].get_d();
  return out;
}

double frobenius_norm(const DTensor& t) {
  double s = 0;
  for (double a : t.v) s += a * a;
  return std::sqrt(s);
}

DTensor normalized(const DTensor& t) {
  double n = frobenius_norm(t);
  if (n == 0.0) throw Error(ErrorCode::InvalidParams, "zero tensor");
  DTensor out = t;
  for (double& a : out.v) a /= n;
  return out;
}

bool degenerate_structure_check(const DTensor& t, double tol) {
  if (frobenius_norm(t) == 0.0) return false;
  DTensor u = normalized(t);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        bool allowed = (i == 0 && j == 1) || (i == 1 && j == 0);
        if (!allowed && std::abs(u(i, j, k)) > tol) return false;
      }
  for (std::size_t k = 0; k < 3; ++k) {
    if (std::abs(u(0, 1, k) + u(1, 0, k)) > tol) return false;
  }
  return true;
}

#define CRITLOC_INSTANTIATE(T)                                                                                   \
  template Vec3<T> project(const Matrix<T>&, const std::vector<T>&);                                             \
  template Vec3<T> line_through(const Vec3<T>&, const Vec3<T>&);                                                 \
  template Vec3<T> epipole_line(const Matrix<T>&, const std::vector<std::vector<T>>&);                           \
  template Tensor<T> trifocal_tensor(const Matrix<T>&, const Matrix<T>&, const Matrix<T>&, Profile);             \
  template T grassmann_det(const Matrix<T>&, const Matrix<T>&, const Matrix<T>&, const Vec3<T>&, const Vec3<T>&, \
                           const Vec3<T>&, const Vec3<T>&);                                                      \
  template T trilinear(const Tensor<T>&, const Vec3<T>&, const Vec3<T>&, const Vec3<T>&);

CRITLOC_INSTANTIATE(Rational)
CRITLOC_INSTANTIATE(double)

#undef CRITLOC_INSTANTIATE

}  // namespace critloc
