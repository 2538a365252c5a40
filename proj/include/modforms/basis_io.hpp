#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "modforms/space_basis.hpp"

namespace modforms {

// Interchange format:
// {"weight": k, "level": N, "prec": B, "cuspidal": bool,
//  "basis": [["c0", "c1", ...], ...]} with rationals as "num/den" or "int".
inline nlohmann::json basis_to_json(const SpaceBasis& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < s.basis.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j <= s.prec; ++j) row.push_back(format_rat(s.basis.at(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"weight", s.weight},
          {"level", s.level},
          {"prec", s.prec},
          {"cuspidal", s.cuspidal},
          {"basis", std::move(rows)}};
}

inline std::string export_basis_string(const SpaceBasis& s) {
  return basis_to_json(s).dump(1) + "\n";
}

inline void export_basis(const SpaceBasis& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_data("io-error", "cannot open '" + path + "' for writing");
  out << export_basis_string(s);
  if (!out.good()) fail_data("io-error", "write failed for '" + path + "'");
}

inline SpaceBasis ingest_basis_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("weight") || !j.contains("level") ||
      !j.contains("prec") || !j.contains("cuspidal") || !j.contains("basis") ||
      !j["weight"].is_number_integer() || !j["level"].is_number_integer() ||
      !j["prec"].is_number_integer() || !j["cuspidal"].is_boolean() ||
      !j["basis"].is_array())
    fail_data("parse-error", "basis file missing required fields");
  int k = j["weight"].get<int>();
  long n = j["level"].get<long>();
  long prec = j["prec"].get<long>();
  bool cuspidal = j["cuspidal"].get<bool>();

  SpaceDims dims = dim_spaces(k, n);
  long expect = cuspidal ? dims.dim_s : dims.dim_m;
  if (static_cast<long>(j["basis"].size()) != expect)
    fail_data("dimension-mismatch",
              "basis file has " + std::to_string(j["basis"].size()) +
                  " rows, space dimension is " + std::to_string(expect));
  if (prec < sturm_bound(k, n))
    fail_data("insufficient-precision",
              "basis file precision below the Sturm bound");

  RatMatrix rows(j["basis"].size(), prec + 1);
  for (size_t i = 0; i < j["basis"].size(); ++i) {
    const auto& row = j["basis"][i];
    if (!row.is_array() || static_cast<long>(row.size()) != prec + 1)
      fail_data("parse-error", "basis row width disagrees with prec");
    for (long m = 0; m <= prec; ++m) {
      if (!row[m].is_string()) fail_data("parse-error", "coefficients must be strings");
      rows.at(i, m) = parse_rat(row[m].get<std::string>());
    }
  }
  auto [echelon, pivots] = rref(std::move(rows));
  if (static_cast<long>(echelon.rows) != expect)
    fail_data("dimension-mismatch", "basis rows are linearly dependent");
  if (cuspidal)
    for (size_t i = 0; i < echelon.rows; ++i)
      if (sgn(echelon.at(i, 0)) != 0)
        fail_data("cuspidal-mismatch", "cuspidal basis with nonzero c_0");
  return {k, n, prec, cuspidal, std::move(echelon), std::move(pivots), "fixture"};
}

inline SpaceBasis ingest_basis(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_data("parse-error", "cannot open basis file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail_data("parse-error", std::string("bad JSON: ") + e.what());
  }
  return ingest_basis_json(j);
}

// Directory holding shipped fixture bases, overridable via the
// MODFORMS_DATA_DIR environment variable or the CLI --data-dir flag.
inline std::string& fixture_dir() {
  static std::string dir = [] {
    const char* env = std::getenv("MODFORMS_DATA_DIR");
    return std::string(env ? env : "data");
  }();
  return dir;
}

inline std::string fixture_path(int k, long n, bool cuspidal) {
  return fixture_dir() + "/basis_k" + std::to_string(k) + "_N" +
         std::to_string(n) + (cuspidal ? "_S" : "_M") + ".json";
}

// Full construction pipeline: generator products, then the ratio
// bootstrap, then a shipped fixture file.
inline SpaceBasis space_basis_or_fixture(int k, long n, long prec,
                                         bool cuspidal) {
  try {
    return cuspidal ? sk_basis(k, n, prec) : mk_basis(k, n, prec);
  } catch (const Error& e) {
    if (e.code() != "basis-incomplete" && e.code() != "cusp-filter-inconsistent")
      throw;
    SpaceBasis fx = ingest_basis(fixture_path(k, n, cuspidal));
    if (fx.weight != k || fx.level != n || fx.cuspidal != cuspidal)
      fail_data("dimension-mismatch", "fixture tags disagree with request");
    if (fx.prec < prec)
      fail_data("insufficient-precision", "fixture precision below request");
    return slice_basis(fx, prec);
  }
}

}  // namespace modforms
