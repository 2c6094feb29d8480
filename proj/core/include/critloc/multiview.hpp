#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "critloc/matrix.hpp"

namespace critloc {

// Codimensions (a1, a2, a3) of the corresponding spaces in the three views.
// The view with codimension 1 carries a line, the other two carry points.
enum class Profile { P221, P212, P122 };

std::string_view to_string(Profile p);
std::optional<Profile> profile_from_string(std::string_view s);
std::array<int, 3> codims(Profile p);
std::size_t line_view(Profile p);

template <class T>
using Vec3 = std::array<T, 3>;

// Entry (i, j, k) pairs coordinate i of view 1, j of view 2 and k of view 3.
// Flat storage index is 9*i + 3*j + k.
template <class T>
struct Tensor {
  std::array<T, 27> v{};
  Profile profile = Profile::P221;

  static constexpr std::size_t index(std::size_t i, std::size_t j, std::size_t k) { return 9 * i + 3 * j + k; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return v[index(i, j, k)]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return v[index(i, j, k)]; }
};
using QTensor = Tensor<Rational>;
using DTensor = Tensor<double>;

// Right kernel of a 3x5 camera: two vectors spanning the center line.
std::vector<QVector> center(const QMatrix& camera);
std::vector<std::vector<double>> center(const DMatrix& camera);

template <class T>
Vec3<T> project(const Matrix<T>& camera, const std::vector<T>& point);

// Dual coordinates of the line through z and w (their cross product).
template <class T>
Vec3<T> line_through(const Vec3<T>& z, const Vec3<T>& w);

// Line in view r spanned by the images of the center basis of view s.
template <class T>
Vec3<T> epipole_line(const Matrix<T>& camera_r, const std::vector<std::vector<T>>& center_s);

// For profile 221:
//   T(i,j,k) = (-1)^(i+j) det[P1 without row i; P2 without row j; row k of P3]
// with 0-based i, j, k. Other profiles permute the camera roles so that the
// line view plays the part of the third camera.
template <class T>
Tensor<T> trifocal_tensor(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3,
                          Profile profile = Profile::P221);

// Determinant of the 9x9 incidence system for profile 221 with points x, y and
// the line through z, w. Equals trilinear(T, x, y, line_through(z, w)).
template <class T>
T grassmann_det(const Matrix<T>& p1, const Matrix<T>& p2, const Matrix<T>& p3, const Vec3<T>& x, const Vec3<T>& y,
                const Vec3<T>& z, const Vec3<T>& w);

template <class T>
T trilinear(const Tensor<T>& t, const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c);

DTensor to_double(const QTensor& t);
double frobenius_norm(const DTensor& t);
// Unit Frobenius norm; throws InvalidParams on the zero tensor.
DTensor normalized(const DTensor& t);

// True iff the only nonzero entries are T(0,1,k) = -T(1,0,k), after
// normalization, within `tol`. The zero tensor is rejected.
bool degenerate_structure_check(const DTensor& t, double tol = 1e-9);

}  // namespace critloc
