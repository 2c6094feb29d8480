#include "critloc/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace critloc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Rational rational_of(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail("expected a rational as integer or \"p/q\" string, got " + j.dump());
}

json rational_json(const Rational& q) { return to_string(q); }

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

QMatrix qmatrix_of(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) fail("expected " + std::to_string(rows) + " rows");
  QMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_of(j[r][c]);
  }
  return m;
}

json qmatrix_json(const QMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rational_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

std::array<QMatrix, 3> cameras_of(const json& j) {
  if (!j.is_array() || j.size() != 3) fail("expected three cameras");
  return {qmatrix_of(j[0], 3, 5), qmatrix_of(j[1], 3, 5), qmatrix_of(j[2], 3, 5)};
}

json cameras_json(const std::array<QMatrix, 3>& cams) {
  return json::array({qmatrix_json(cams[0]), qmatrix_json(cams[1]), qmatrix_json(cams[2])});
}

json polys_json(const std::vector<Polynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string linform_matrix_to_json(const LinFormMatrix& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      json coeffs = json::array();
      for (int v = 0; v < kNumVars; ++v) coeffs.push_back(rational_json(m(r, c)[v]));
      row.push_back(coeffs);
    }
    entries.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}}.dump(1);
}

LinFormMatrix linform_matrix_from_json(std::string_view text) {
  json j = parse(text);
  const json& rows_j = field(j, "rows");
  const json& cols_j = field(j, "cols");
  if (!rows_j.is_number_unsigned() || !cols_j.is_number_unsigned()) fail("rows and cols must be positive integers");
  std::size_t rows = rows_j.get<std::size_t>(), cols = cols_j.get<std::size_t>();
  const json& e = field(j, "entries");
  if (!e.is_array() || e.size() != rows) fail("entries must have 'rows' rows");
  LinFormMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!e[r].is_array() || e[r].size() != cols) fail("row " + std::to_string(r) + " must have 'cols' entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& f = e[r][c];
      if (!f.is_array() || f.size() != kNumVars) fail("each entry needs 5 coefficients");
      std::array<Rational, kNumVars> coeffs;
      for (int v = 0; v < kNumVars; ++v) coeffs[v] = rational_of(f[v]);
      m(r, c) = LinearForm(coeffs);
    }
  }
  return m;
}

std::string camera_pair_to_json(const CameraPairConfig& cfg) {
  return json{{"P", cameras_json(cfg.P)}, {"Q", cameras_json(cfg.Q)}}.dump(1);
}

CameraPairConfig camera_pair_from_json(std::string_view text) {
  json j = parse(text);
  CameraPairConfig cfg;
  cfg.P = cameras_of(field(j, "P"));
  cfg.Q = cameras_of(field(j, "Q"));
  return cfg;
}

CameraTriple<Rational> camera_triple_from_json(std::string_view text) {
  json j = parse(text);
  if (j.is_object() && j.contains("cameras")) return cameras_of(j.at("cameras"));
  return cameras_of(field(j, "P"));
}

std::string tensor_to_json(const QTensor& t) {
  json e = json::array();
  for (const auto& v : t.v) e.push_back(rational_json(v));
  return json{{"profile", std::string(to_string(t.profile))}, {"index", "9*i+3*j+k"}, {"entries", e}}.dump();
}

std::string tensor_to_json(const DTensor& t) {
  json e = json::array();
  for (double v : t.v) e.push_back(v);
  return json{{"profile", std::string(to_string(t.profile))}, {"index", "9*i+3*j+k"}, {"entries", e}}.dump();
}

void write_triples_csv(std::ostream& os, const std::vector<DTriple>& triples) {
  os << kTriplesCsvHeader << '\n';
  for (const auto& t : triples) {
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t i = 0; i < 3; ++i) os << (v + i ? "," : "") << num(t.v[v][i]);
    os << '\n';
  }
}

std::vector<DTriple> read_triples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail("empty triples file");
  if (line != kTriplesCsvHeader) fail("unexpected triples header '" + line + "'");
  std::vector<DTriple> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    DTriple t;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t n = 0; n < 9; ++n) {
      double v = 0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) fail("bad number on line " + std::to_string(lineno));
      t.v[n / 3][n % 3] = v;
      p = res.ptr;
      if (n < 8) {
        if (p == end || *p != ',') fail("expected 9 values on line " + std::to_string(lineno));
        ++p;
      }
    }
    if (p != end) fail("trailing data on line " + std::to_string(lineno));
    out.push_back(t);
  }
  return out;
}

void write_design_matrix_csv(std::ostream& os, const DMatrix& mt) {
  for (std::size_t r = 0; r < mt.rows(); ++r) {
    for (std::size_t c = 0; c < mt.cols(); ++c) os << (c ? "," : "") << num(mt(r, c));
    os << '\n';
  }
}

std::string canonicalization_to_json(const Canonicalization& c) {
  json j{{"family", std::string(to_string(c.family))},
         {"flag", std::string(to_string(c.flag))},
         {"common_factor", c.common_factor.to_string()},
         {"factor_degree", c.factor_degree},
         {"R", qmatrix_json(c.R)},
         {"C", qmatrix_json(c.C)},
         {"canonical", json::parse(linform_matrix_to_json(c.canonical))}};
  if (!c.note.empty()) j["note"] = c.note;
  return j.dump(1);
}

std::string loci_report_to_json(const LociVerification& v) {
  json comps = json::array();
  for (const auto& comp : v.decomposition.components) {
    comps.push_back({{"name", comp.name},
                     {"kind", std::string(to_string(comp.kind))},
                     {"dim", comp.dim},
                     {"degree", comp.degree},
                     {"generators", polys_json(comp.generators)}});
  }
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return json{{"family", std::string(to_string(v.canonical.family))},
              {"components", comps},
              {"checks", checks},
              {"ok", v.ok()}}
      .dump(1);
}

std::string sweep_summary_to_json(FixtureCase c, const SweepResult& r) {
  json rows = json::array();
  for (const auto& s : r.summary) {
    rows.push_back({{"sigma", s.sigma},
                    {"near", s.near_count},
                    {"far", s.far_count},
                    {"mean_distance", s.mean_distance}});
  }
  return json{{"case", std::string(to_string(c))},
              {"m", r.calibration.m},
              {"delta", r.calibration.delta},
              {"calibration_trials", r.calibration.trials},
              {"per_sigma", rows}}
      .dump(1);
}

}  // namespace critloc
