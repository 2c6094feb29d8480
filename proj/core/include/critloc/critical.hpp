#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/linform_matrix.hpp"
#include "critloc/matrix.hpp"

namespace critloc {

// Two triples of 3x5 cameras; their critical locus is cut by the maximal
// minors of the 9x8 matrix [[P1 X, 0, 0, Q1], [0, P2 X, 0, Q2], [0, 0, P3 X, Q3]].
struct CameraPairConfig {
  std::array<QMatrix, 3> P;
  std::array<QMatrix, 3> Q;
};

enum class FixtureCase { ScrollI, ConeIV, QuadricV };

std::string_view to_string(FixtureCase c);
std::optional<FixtureCase> fixture_case_from_string(std::string_view s);

CameraPairConfig fixture(FixtureCase c);

// Cone case: the stated X1 and the matrix the fixture cameras actually
// realize. They differ in the sign of entry (0, 1).
QMatrix cone_x1_stated();
QMatrix cone_x1_realized();
Polynomial cone_equation();

// Throws InvalidConfig unless every camera is 3x5 of rank 3 and the stacked
// Q matrix has rank 5.
void validate(const CameraPairConfig& cfg);

PolyMatrix assemble_M(const CameraPairConfig& cfg);
QMatrix evaluate_M(const CameraPairConfig& cfg, const QVector& point);

struct ReducedCriticalMatrix {
  LinFormMatrix N;                     // A - B D^-1 C
  std::array<std::size_t, 4> top_rows;  // rows of M kept in A
  QMatrix D_inverse;
};

// All 4-subsets of the rows of M whose complement gives an invertible D, in
// lexicographic order.
std::vector<std::array<std::size_t, 4>> valid_partitions(const CameraPairConfig& cfg);
ReducedCriticalMatrix reduce_to_N(const CameraPairConfig& cfg);
ReducedCriticalMatrix reduce_to_N(const CameraPairConfig& cfg, const std::array<std::size_t, 4>& top_rows);

struct CriticalPointResult {
  bool critical = false;   // rank M(X) <= 7
  bool on_center = false;  // some P_i X vanishes, forcing the rank drop
};
CriticalPointResult critical_point_test(const CameraPairConfig& cfg, const QVector& point);

struct CenterCheckReport {
  bool ok = true;
  std::array<std::size_t, 3> column_span{};
  std::string message;
};
CenterCheckReport column_center_check(const ReducedCriticalMatrix& rcm, const CameraPairConfig& cfg);

}  // namespace critloc
