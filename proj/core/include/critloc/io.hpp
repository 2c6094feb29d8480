#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "critloc/critical.hpp"
#include "critloc/harness.hpp"
#include "critloc/linform_matrix.hpp"
#include "critloc/loci.hpp"
#include "critloc/multiview.hpp"
#include "critloc/recon.hpp"

// Text formats. Rationals are written as "p/q" strings and read from strings or
// JSON integers. Malformed input throws ParseError.
namespace critloc {

std::string read_text_file(const std::string& path);

// {"rows": r, "cols": c, "entries": [[[a1, .., a5], ...], ...]}, each entry the
// coefficients of x1..x5.
std::string linform_matrix_to_json(const LinFormMatrix& m);
LinFormMatrix linform_matrix_from_json(std::string_view text);

// {"P": [P1, P2, P3], "Q": [Q1, Q2, Q3]} with each camera a 3x5 array.
std::string camera_pair_to_json(const CameraPairConfig& cfg);
CameraPairConfig camera_pair_from_json(std::string_view text);

// {"cameras": [C1, C2, C3]}; a camera pair file is accepted too and its P
// triple is used.
CameraTriple<Rational> camera_triple_from_json(std::string_view text);

// {"profile": "221", "index": "9*i+3*j+k", "entries": [27 values]}.
std::string tensor_to_json(const QTensor& t);
std::string tensor_to_json(const DTensor& t);

// One triple per line: x0,x1,x2,y0,y1,y2,l0,l1,l2 in view order, after a
// header line.
inline constexpr std::string_view kTriplesCsvHeader = "v1_0,v1_1,v1_2,v2_0,v2_1,v2_2,v3_0,v3_1,v3_2";
void write_triples_csv(std::ostream& os, const std::vector<DTriple>& triples);
std::vector<DTriple> read_triples_csv(std::istream& is);

// Rows of M_T, 27 comma-separated values each.
void write_design_matrix_csv(std::ostream& os, const DMatrix& mt);

std::string canonicalization_to_json(const Canonicalization& c);
std::string loci_report_to_json(const LociVerification& v);
// Per-sigma aggregates plus the calibration used.
std::string sweep_summary_to_json(FixtureCase c, const SweepResult& r);

}  // namespace critloc
