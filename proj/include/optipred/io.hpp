// Copyright 2026 The optipred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "optipred/design.hpp"
#include "optipred/errors.hpp"
#include "optipred/polybasis.hpp"

namespace optipred::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Writer: doubles always carry 17 significant digits so reports round-trip.

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

inline void write(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << "\n" << pad;
        first = false;
        write(os, e, indent, depth + 1);
      }
      if (!flat) os << "\n" << close;
      os << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

inline void write_json(std::ostream& os, const Json& j) {
  detail::write(os, j, 2, 0);
  os << "\n";
}

inline std::string to_string(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

// ---------------------------------------------------------------------------
// Reading helpers with field-path diagnostics.

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw InputError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

inline InputError field_error(const std::string& field, const std::string& what) {
  return InputError("field '" + field + "': " + what);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) throw field_error(field, "missing");
  return obj.at(key);
}

inline double get_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw field_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw field_error(field, "must be finite");
  return v;
}

inline int get_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw field_error(field, "expected an integer");
  return j.get<int>();
}

inline Complex get_complex(const Json& j, const std::string& field) {
  if (j.is_number()) return {get_number(j, field), 0.0};
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "re" && it.key() != "im") throw field_error(field + "." + it.key(), "unknown field");
    }
    return {get_number(require(j, "re", field), field + ".re"), get_number(require(j, "im", field), field + ".im")};
  }
  throw field_error(field, "expected a number or an object {\"re\": ..., \"im\": ...}");
}

inline Json complex_to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

inline Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Real vectors as numbers; vectors with a nonzero imaginary part as {re, im} objects.
inline Json vector_to_json(const Eigen::VectorXcd& v) {
  if (v.imag().isZero(0.0)) return vector_to_json(Eigen::VectorXd(v.real()));
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

inline Json point_to_json(const EvalPoint& z) {
  Json a = Json::array();
  for (const auto& c : z.coords()) {
    if (c.imag() == 0.0) {
      a.push_back(c.real());
    } else {
      a.push_back(complex_to_json(c));
    }
  }
  return a;
}

inline Json row_to_json(const Eigen::MatrixXd& m, Eigen::Index row) {
  Json a = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(row, c));
  return a;
}

inline Json matrix_rows_to_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(row_to_json(m, r));
  return a;
}

inline Eigen::VectorXd vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw field_error(field, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline Eigen::VectorXcd complex_vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw field_error(field, "expected an array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_complex(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field, std::optional<int> cols) {
  if (!j.is_array() || j.empty()) throw field_error(field, "expected a non-empty array of coordinate arrays");
  const std::size_t d = cols ? static_cast<std::size_t>(*cols) : (j[0].is_array() ? j[0].size() : 0);
  if (d == 0) throw field_error(field + "[0]", "expected a non-empty array of numbers");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string f = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != d) {
      throw field_error(f, "expected an array of " + std::to_string(d) + " numbers");
    }
    for (std::size_t c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_number(j[r][c], f + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
      throw field_error(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
  }
}

// ---------------------------------------------------------------------------
// Problem files.

enum class DomainType { chebyshev_extreme, points, grid };

/// Parsed and validated problem description.
///
///   {"schema_version": 1,
///    "domain": {"type": "chebyshev-extreme", "degree": 2}
///            | {"type": "points", "coords": [[...], ...]}
///            | {"type": "grid", "interval": [a, b], "count": m},
///    "degree": n, "dim": d, "basis": "chebyshev",
///    "external_point": [2.0] | [{"re": 0, "im": 1}]}
///
/// "dim" and "basis" are optional; "name" and "description" are ignored.
struct ProblemFile {
  DomainType domain = DomainType::chebyshev_extreme;
  int domain_degree = 0;
  Eigen::MatrixXd coords;
  double interval_lo = -1.0;
  double interval_hi = 1.0;
  int count = 0;
  int degree = 1;
  int dim = 1;
  BasisKind basis = BasisKind::chebyshev;
  EvalPoint external_point;

  Eigen::MatrixXd candidate_points() const {
    switch (domain) {
      case DomainType::chebyshev_extreme: return Eigen::MatrixXd(chebyshev_extreme_points(domain_degree));
      case DomainType::points: return coords;
      case DomainType::grid: {
        Eigen::MatrixXd x(count, 1);
        for (int i = 0; i < count; ++i) {
          x(i, 0) = interval_lo + (interval_hi - interval_lo) * static_cast<double>(i) / (count - 1);
        }
        x(count - 1, 0) = interval_hi;
        return x;
      }
    }
    return {};
  }

  PolyBasis make_basis() const { return PolyBasis(basis, degree, dim); }
  CandidateSet candidates() const { return CandidateSet{candidate_points(), external_point}; }
  DesignProblem problem() const { return make_problem(make_basis(), candidates()); }
};

inline ProblemFile parse_problem(const Json& j) {
  if (!j.is_object()) throw InputError("problem file must be a JSON object");
  reject_unknown(j, "", {"schema_version", "domain", "degree", "dim", "basis", "external_point", "name",
                         "description"});
  ProblemFile pf;
  const int version = get_int(require(j, "schema_version", ""), "schema_version");
  if (version != kSchemaVersion) {
    throw field_error("schema_version", "unsupported version " + std::to_string(version));
  }

  const Json& dom = require(j, "domain", "");
  if (!dom.is_object()) throw field_error("domain", "expected an object");
  const Json& type = require(dom, "type", "domain");
  if (!type.is_string()) throw field_error("domain.type", "expected a string");
  const auto t = type.get<std::string>();
  std::optional<int> inferred_dim;
  if (t == "chebyshev-extreme") {
    reject_unknown(dom, "domain", {"type", "degree"});
    pf.domain = DomainType::chebyshev_extreme;
    pf.domain_degree = get_int(require(dom, "degree", "domain"), "domain.degree");
    if (pf.domain_degree < 1) throw field_error("domain.degree", "must be >= 1");
    inferred_dim = 1;
  } else if (t == "points") {
    reject_unknown(dom, "domain", {"type", "coords"});
    pf.domain = DomainType::points;
    std::optional<int> d;
    if (j.contains("dim") && j.at("dim").is_number_integer()) d = j.at("dim").get<int>();
    pf.coords = matrix_from_json(require(dom, "coords", "domain"), "domain.coords", d);
    inferred_dim = static_cast<int>(pf.coords.cols());
  } else if (t == "grid") {
    reject_unknown(dom, "domain", {"type", "interval", "count"});
    pf.domain = DomainType::grid;
    const Json& iv = require(dom, "interval", "domain");
    if (!iv.is_array() || iv.size() != 2) throw field_error("domain.interval", "expected [a, b]");
    pf.interval_lo = get_number(iv[0], "domain.interval[0]");
    pf.interval_hi = get_number(iv[1], "domain.interval[1]");
    if (!(pf.interval_lo < pf.interval_hi)) throw field_error("domain.interval", "need a < b");
    pf.count = get_int(require(dom, "count", "domain"), "domain.count");
    if (pf.count < 2) throw field_error("domain.count", "must be >= 2");
    inferred_dim = 1;
  } else {
    throw field_error("domain.type", "expected one of \"chebyshev-extreme\", \"points\", \"grid\"; got \"" + t + "\"");
  }

  pf.degree = get_int(require(j, "degree", ""), "degree");
  if (pf.degree < 1) throw field_error("degree", "must be >= 1 (degree-0 designs are rejected)");

  pf.dim = *inferred_dim;
  if (j.contains("dim")) {
    const int d = get_int(j.at("dim"), "dim");
    if (d != pf.dim) {
      throw field_error("dim", "is " + std::to_string(d) + " but the domain has dimension " + std::to_string(pf.dim));
    }
  }

  pf.basis = default_basis_kind(pf.dim);
  if (j.contains("basis")) {
    if (!j.at("basis").is_string()) throw field_error("basis", "expected a string");
    const auto kind = parse_basis_kind(j.at("basis").get<std::string>());
    if (!kind) throw field_error("basis", "unknown basis \"" + j.at("basis").get<std::string>() + "\"");
    pf.basis = *kind;
    if ((pf.basis == BasisKind::monomial || pf.basis == BasisKind::chebyshev) && pf.dim != 1) {
      throw field_error("basis", "univariate basis used with dim " + std::to_string(pf.dim));
    }
  }

  const Json& ext = require(j, "external_point", "");
  if (!ext.is_array() || ext.size() != static_cast<std::size_t>(pf.dim)) {
    throw field_error("external_point", "expected an array of " + std::to_string(pf.dim) + " coordinates");
  }
  std::vector<Complex> z;
  for (std::size_t i = 0; i < ext.size(); ++i) z.push_back(get_complex(ext[i], "external_point[" + std::to_string(i) + "]"));
  pf.external_point = EvalPoint(std::move(z));
  return pf;
}

inline ProblemFile load_problem(const std::string& path) {
  try {
    return parse_problem(load_json_file(path));
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + what);
  }
}

// ---------------------------------------------------------------------------
// Report files.

struct CertificateSummary {
  double gap = 0.0;
  double sign_residual = 0.0;
  double off_support_excess = 0.0;
  bool lower_bound_check = false;
  std::string verdict = "not-applicable";
  double tolerance = 1e-8;
  std::string note;
};

struct ReportFile {
  std::string command = "design";
  std::optional<std::string> timestamp;
  std::string basis;
  int degree = 0;
  int dim = 1;
  EvalPoint external_point;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  std::vector<Eigen::Index> support;
  double christoffel_value = 0.0;
  double growth_value = 0.0;
  Eigen::VectorXcd primal_c;
  Eigen::VectorXd dual_z;
  std::string l1_status;
  bool degenerate = false;
  CertificateSummary certificate;
  std::optional<Json> check;
  std::vector<std::string> caveats;
};

inline Json report_to_json(const ReportFile& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = r.command;
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  j["basis"] = r.basis;
  j["degree"] = r.degree;
  j["dim"] = r.dim;
  j["external_point"] = point_to_json(r.external_point);
  j["nodes"] = matrix_rows_to_json(r.nodes);
  j["weights"] = vector_to_json(r.weights);
  Json support = Json::object();
  support["indices"] = Json::array();
  support["coordinates"] = Json::array();
  for (auto i : r.support) {
    support["indices"].push_back(i);
    support["coordinates"].push_back(row_to_json(r.nodes, i));
  }
  j["support"] = support;
  j["christoffel_value"] = r.christoffel_value;
  j["growth_value"] = r.growth_value;
  j["primal_c"] = vector_to_json(r.primal_c);
  j["dual_z"] = vector_to_json(r.dual_z);
  if (!r.l1_status.empty()) j["l1_status"] = r.l1_status;
  j["degenerate"] = r.degenerate;
  Json cert;
  cert["gap"] = r.certificate.gap;
  cert["sign_residual"] = r.certificate.sign_residual;
  cert["off_support_excess"] = r.certificate.off_support_excess;
  cert["lower_bound_check"] = r.certificate.lower_bound_check;
  cert["verdict"] = r.certificate.verdict;
  cert["tolerance"] = r.certificate.tolerance;
  if (!r.certificate.note.empty()) cert["note"] = r.certificate.note;
  j["certificate"] = cert;
  if (r.check) j["check"] = *r.check;
  j["caveats"] = r.caveats;
  return j;
}

inline ReportFile report_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("report file must be a JSON object");
  const int version = get_int(require(j, "schema_version", ""), "schema_version");
  if (version != kSchemaVersion) throw field_error("schema_version", "unsupported version " + std::to_string(version));
  ReportFile r;
  if (j.contains("command")) r.command = j.at("command").get<std::string>();
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  if (j.contains("basis")) r.basis = j.at("basis").get<std::string>();
  r.degree = get_int(require(j, "degree", ""), "degree");
  r.dim = get_int(require(j, "dim", ""), "dim");
  const Json& ext = require(j, "external_point", "");
  if (!ext.is_array()) throw field_error("external_point", "expected an array");
  std::vector<Complex> z;
  for (std::size_t i = 0; i < ext.size(); ++i) z.push_back(get_complex(ext[i], "external_point[" + std::to_string(i) + "]"));
  r.external_point = EvalPoint(std::move(z));
  r.nodes = matrix_from_json(require(j, "nodes", ""), "nodes", r.dim);
  r.weights = vector_from_json(require(j, "weights", ""), "weights");
  if (r.weights.size() != r.nodes.rows()) throw field_error("weights", "length differs from the node count");
  const Json& sup = require(j, "support", "");
  for (const auto& i : require(sup, "indices", "support")) r.support.push_back(i.get<Eigen::Index>());
  r.christoffel_value = get_number(require(j, "christoffel_value", ""), "christoffel_value");
  r.growth_value = get_number(require(j, "growth_value", ""), "growth_value");
  r.primal_c = complex_vector_from_json(require(j, "primal_c", ""), "primal_c");
  r.dual_z = vector_from_json(require(j, "dual_z", ""), "dual_z");
  if (j.contains("l1_status")) r.l1_status = j.at("l1_status").get<std::string>();
  if (j.contains("degenerate")) r.degenerate = j.at("degenerate").get<bool>();
  const Json& cert = require(j, "certificate", "");
  r.certificate.gap = get_number(require(cert, "gap", "certificate"), "certificate.gap");
  r.certificate.sign_residual = get_number(require(cert, "sign_residual", "certificate"), "certificate.sign_residual");
  if (cert.contains("off_support_excess")) {
    r.certificate.off_support_excess = get_number(cert.at("off_support_excess"), "certificate.off_support_excess");
  }
  if (cert.contains("lower_bound_check")) r.certificate.lower_bound_check = cert.at("lower_bound_check").get<bool>();
  r.certificate.verdict = require(cert, "verdict", "certificate").get<std::string>();
  if (cert.contains("tolerance")) r.certificate.tolerance = get_number(cert.at("tolerance"), "certificate.tolerance");
  if (cert.contains("note")) r.certificate.note = cert.at("note").get<std::string>();
  if (j.contains("check")) r.check = j.at("check");
  if (j.contains("caveats")) r.caveats = j.at("caveats").get<std::vector<std::string>>();
  return r;
}

inline ReportFile load_report(const std::string& path) {
  try {
    return report_from_json(load_json_file(path));
  } catch (const Json::exception& e) {
    throw InputError(path + ": malformed report: " + e.what());
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + what);
  }
}

/// (coordinates, weight) rows for plotting.
inline void write_csv(std::ostream& os, const Eigen::MatrixXd& nodes, const Eigen::VectorXd& weights) {
  for (Eigen::Index c = 0; c < nodes.cols(); ++c) {
    os << (nodes.cols() == 1 ? std::string("x") : "x" + std::to_string(c + 1)) << ",";
  }
  os << "weight\n";
  for (Eigen::Index r = 0; r < nodes.rows(); ++r) {
    for (Eigen::Index c = 0; c < nodes.cols(); ++c) os << detail::format_double(nodes(r, c)) << ",";
    os << detail::format_double(weights(r)) << "\n";
  }
}

/// Parses "2", "-1.5", "i", "-2i", "1+2i", "0.5-1e-3i" or {"re": x, "im": y}.
inline Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw) {
    if (ch != ' ') s += ch;
  }
  if (s.empty()) throw InputError("empty complex number");
  if (s.front() == '{') return get_complex(parse_json_text(s, "z0"), "z0");
  auto to_double = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    double v = 0.0;
    const char* begin = part.data() + (part.front() == '+' ? 1 : 0);
    const char* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) throw InputError("cannot parse number '" + raw + "'");
    return v;
  };
  if (s.back() != 'i') return {to_double(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

}  // namespace optipred::io
