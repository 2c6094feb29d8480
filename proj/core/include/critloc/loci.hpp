#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/classify.hpp"
#include "critloc/linform_matrix.hpp"
#include "critloc/random.hpp"

namespace critloc {

enum class ComponentKind {
  Hyperplane,
  Plane,
  Line,
  Point,
  QuadricHypersurface,
  QuadricSurface,
  Cone,
  TwistedCubic,
  CubicScroll,
};

std::string_view to_string(ComponentKind k);
int kind_dimension(ComponentKind k);
int kind_degree(ComponentKind k);

struct LocusComponent {
  ComponentKind kind = ComponentKind::Hyperplane;
  std::string name;                   // e.g. "H_B", "r_D"
  std::vector<Polynomial> generators;  // vanish on the component
  int dim = 0;
  int degree = 0;

  // Sampling data. `linear` are the linear generators (the ambient linear
  // space of a curve or surface). `block` is the 3x2 block of a scroll, or the
  // 2x3 block whose rank-one locus is a twisted cubic. `quadric` is the
  // quadratic generator; `anchor` a rational point on it used to sample lines.
  std::vector<LinearForm> linear;
  LinFormMatrix block;
  Polynomial quadric;
  QVector anchor;
};

enum class IncidenceKind {
  MeetDegree,   // comps {a, b}: a and b meet in `expected` points over C
  PointOn,      // comps {a, b, h}: a and b meet in one point lying on h
  Contained,    // comps {a, b}: a lies inside b
  ConicSection, // comps {plane, quadric}: the restriction is a nonzero conic
  QuadricRank,  // comps {q}: the 5x5 matrix of q has rank `expected`
  Vertex,       // comps {cone, point}: rank 4 with kernel the point
};

struct Incidence {
  IncidenceKind kind = IncidenceKind::MeetDegree;
  std::vector<std::size_t> comps;  // indices into components
  std::string fact;
  int expected = 0;
};

struct LocusDecomposition {
  Family family = Family::Unresolved;
  std::vector<LocusComponent> components;
  std::vector<Incidence> incidences;
};

// Throws InvalidParams for NonDegenerate or unresolved input and
// DegenerateInstance when the instance is too special for the closed forms.
LocusDecomposition decompose(const Canonicalization& c);

// 4x4 symmetric D with q(ell) = ell^T D ell for N = S1(ell) * X1. Entries are
// half-integer combinations of the 3x3 minors of the 6x3 matrix X1.
QMatrix symmetric_matrix_D(const QMatrix& x1);
// ell^T D ell with ell_i substituted by the given linear forms.
Polynomial quadratic_form(const QMatrix& d, const std::vector<LinearForm>& ell);

// Quadric of the S2 shape: ell2 (1,3,4) - ell3 (1,2,4) + ell4 (1,2,3), with
// (i,j,k) the 3x3 minors of X2 (first row linear, others constant).
Polynomial s2_quadric(const std::vector<LinearForm>& ell, const PolyMatrix& x2);

struct ComponentSample {
  std::vector<QVector> exact;
  std::vector<std::vector<double>> numeric;
  std::size_t size() const { return exact.size() + numeric.size(); }
};

// Exact rational points except for cones, which are sampled in floating point
// along random real lines. Throws SamplingFailed after bounded retries.
ComponentSample sample_component(const LocusComponent& comp, std::size_t n, Rng& rng);

// max |g(p)| over generators, with g scaled to unit coefficient norm and p to
// unit Euclidean norm.
double normalized_residual(const LocusComponent& comp, const std::vector<double>& p);
bool on_component(const LocusComponent& comp, const QVector& p);

struct RankDropReport {
  std::vector<int> ranks;
  bool all_dropped = true;  // every rank <= 2
};
RankDropReport verify_rank_drop(const LinFormMatrix& n, const std::vector<QVector>& pts);
RankDropReport verify_rank_drop(const LinFormMatrix& n, const std::vector<std::vector<double>>& pts,
                                double relative_tol = 1e-8);
// Number of `count` random integer points (entries in [-1000, 1000]) off every
// component of `d` at which N has full column rank. Points on a component are
// redrawn; small-coefficient hyperplanes do catch integer points now and then.
std::size_t full_rank_count(const LinFormMatrix& n, const LocusDecomposition& d, std::size_t count, Rng& rng);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Verifies each incidence by restriction to the relevant linear spaces. With
// `strict`, the first failure throws IncidenceMismatch.
std::vector<CheckResult> incidence_checks(const LocusDecomposition& d, bool strict = false);

// Intersection count over C with a random complementary linear space
// (line for dim 3, 2-plane for dim 2, hyperplane for dim 1), obtained from the
// degree of a restricted binary form with nonzero discriminant.
CheckResult degree_check(const LocusComponent& comp, Rng& rng);

// Rank-drop points of N on random lines and random 2-planes, found exactly or
// by companion-matrix roots, must lie near a declared component.
struct CompletenessReport {
  std::size_t points_found = 0;
  std::size_t points_unexplained = 0;
  double worst_residual = 0;
};
CompletenessReport completeness_check(const LinFormMatrix& n, const LocusDecomposition& d, std::size_t lines,
                                      std::size_t planes, Rng& rng, double tol = 1e-6);

// Decomposition plus all checks, as reported by `loci verify`.
struct LociVerification {
  Canonicalization canonical;
  LocusDecomposition decomposition;
  std::vector<CheckResult> checks;
  bool ok() const;
};
LociVerification verify_loci(const LinFormMatrix& n, std::size_t samples, Rng& rng);
LociVerification verify_loci(const LinFormMatrix& n, const Canonicalization& c, std::size_t samples, Rng& rng);

}  // namespace critloc
