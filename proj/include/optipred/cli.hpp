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

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "optipred/design.hpp"
#include "optipred/io.hpp"
#include "optipred/oracle.hpp"

// Command implementations behind the optipred executable. Each command writes
// human-readable progress to `out`, diagnostics to `err`, and returns the
// process exit code.

namespace optipred::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 1;
inline constexpr int certification_failure = 2;
inline constexpr int solver_failure = 3;
}  // namespace exit_code

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kOracleAgreement = 5e-3;
inline constexpr double kGradientAgreement = 1e-5;

/// OPTIPRED_TOL overrides the certificate tolerance.
inline double tolerance_from_env() {
  const char* raw = std::getenv("OPTIPRED_TOL");
  if (raw == nullptr || *raw == '\0') return kDefaultTolerance;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0)) throw InputError("OPTIPRED_TOL must be a positive number");
  return v;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Runs `body`, mapping library errors onto the exit-code contract.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SolverError& e) {
    err << "error: solver failure: " << e.what() << "\n";
    return exit_code::solver_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  } catch (const io::Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }
}

inline io::CertificateSummary summarize(const Certificate& c, double tol) {
  io::CertificateSummary s;
  s.gap = c.duality_gap;
  s.sign_residual = c.sign_residual;
  s.off_support_excess = c.off_support_excess;
  s.lower_bound_check = c.lower_bound_check;
  s.verdict = to_string(c.verdict);
  s.tolerance = tol;
  s.note = c.note;
  return s;
}

inline const char* kGridCaveat =
    "optimal for the given candidate set; optimality over a continuous domain requires the candidates "
    "to contain the support of an optimal measure";

/// Full design pipeline for a problem file: Vandermonde, l1 design, certificate.
/// The report carries no timestamp.
inline io::ReportFile design_report(const io::ProblemFile& pf, double tol) {
  const DesignProblem problem = pf.problem();
  const OptimalDesign od = optimal_design(problem);
  CertifyOptions copts;
  copts.tol = tol;
  if (od.solution) copts.l1_value = od.solution->value;
  const Certificate cert = certify(od.measure, problem.v.entries, problem.p, copts);

  io::ReportFile r;
  r.command = "design";
  r.basis = std::string(to_string(pf.basis));
  r.degree = pf.degree;
  r.dim = pf.dim;
  r.external_point = pf.external_point;
  r.nodes = problem.candidates.points;
  r.weights = od.measure.weights;
  r.support = od.measure.support;
  r.christoffel_value = od.measure.christoffel_value;
  r.growth_value = od.measure.growth_value;
  r.primal_c = od.coefficients;
  r.degenerate = od.measure.degenerate;
  r.certificate = summarize(cert, tol);
  r.caveats.push_back(kGridCaveat);
  if (od.solution) {
    const auto& s = *od.solution;
    r.dual_z = s.z;
    r.l1_status = to_string(s.status);
    io::Json check;
    check["l1_primal_value"] = s.primal_value();
    check["l1_dual_value"] = s.dual_value(problem.p_real());
    check["max_abs_Vz"] = (problem.v.entries * s.z).cwiseAbs().maxCoeff();
    r.check = check;
    if (s.status == L1Status::degenerate_warning) {
      r.caveats.push_back("alternative optimal designs may exist: a node outside the support has zero dual slack");
    }
  } else {
    r.dual_z = Eigen::VectorXd(0);
    r.l1_status = problem.candidates.size() == static_cast<Eigen::Index>(problem.basis.dimension())
                      ? "interpolation"
                      : "stacked-refined";
    r.caveats.push_back(
        "complex external point: weights certified by the stationarity bound only; l1 duality is not used");
  }
  if (od.measure.degenerate) {
    r.caveats.push_back(
        "degenerate design: the Gram matrix is singular, christoffel_value is the limit value ||c||_1^2");
  }
  return r;
}

inline int design_exit_code(const io::ReportFile& r, double tol) {
  if (r.certificate.verdict == "certified") return exit_code::ok;
  if (r.certificate.verdict == "failed") return exit_code::certification_failure;
  // Degenerate design: fall back on l1 strong duality.
  if (r.check && r.check->contains("l1_primal_value")) {
    const double pv = r.check->at("l1_primal_value").get<double>();
    const double dv = r.check->at("l1_dual_value").get<double>();
    if (std::abs(pv - dv) <= tol * std::max(1.0, pv)) return exit_code::ok;
  }
  return exit_code::certification_failure;
}

inline void write_report_to(const io::ReportFile& r, const std::string& path, std::ostream& out) {
  const io::Json j = io::report_to_json(r);
  if (path.empty() || path == "-") {
    io::write_json(out, j);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot write report");
  io::write_json(f, j);
}

struct DesignFlags {
  std::string output;
  std::optional<std::string> csv;
  bool timestamp = true;
};

inline int cmd_design(const std::string& problem_path, const DesignFlags& flags, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const double tol = tolerance_from_env();
    const io::ProblemFile pf = io::load_problem(problem_path);
    io::ReportFile r = design_report(pf, tol);
    if (flags.timestamp) r.timestamp = utc_timestamp();
    write_report_to(r, flags.output, out);
    if (flags.csv) {
      std::ofstream f(*flags.csv, std::ios::binary);
      if (!f) throw InputError(*flags.csv + ": cannot write CSV");
      io::write_csv(f, r.nodes, r.weights);
    }
    const int code = design_exit_code(r, tol);
    if (!flags.output.empty() && flags.output != "-") {
      out << "K = " << io::detail::format_double(r.christoffel_value) << ", support size " << r.support.size()
          << ", certificate " << r.certificate.verdict << "\n";
    }
    return code;
  });
}

/// Closed-form design on the Chebyshev extreme points, plus K = T_n(z0)^2 for real z0.
inline io::ReportFile hoel_levine_report(int degree, Complex z0, double tol) {
  if (degree < 1) throw InputError("degree must be >= 1");
  if (z0.imag() == 0.0 && std::abs(z0.real()) <= 1.0) {
    throw InputError("z0 = " + io::detail::format_double(z0.real()) + " lies in [-1, 1]; point not external");
  }
  const PolyBasis basis(BasisKind::chebyshev, degree);
  const Eigen::MatrixXd nodes = chebyshev_extreme_points(degree);
  const EvalPoint z({z0});
  const DesignMeasure m = hoel_levine_design(basis, nodes, z);
  const Eigen::MatrixXd v = evaluate_rows(basis, nodes);
  const Eigen::VectorXcd p = basis.eval(z);
  const Certificate cert = certify(m, v, p, CertifyOptions{tol, std::nullopt});

  io::ReportFile r;
  r.command = "hoel-levine";
  r.basis = std::string(to_string(basis.kind()));
  r.degree = degree;
  r.dim = 1;
  r.external_point = z;
  r.nodes = nodes;
  r.weights = m.weights;
  r.support = m.support;
  r.christoffel_value = m.christoffel_value;
  r.growth_value = m.growth_value;
  r.primal_c = lagrange_values(basis, nodes, z);
  r.dual_z = Eigen::VectorXd(0);
  r.l1_status = "interpolation";
  r.degenerate = m.degenerate;
  r.certificate = summarize(cert, tol);
  if (z0.imag() == 0.0) {
    const double ref = oracle::growth_oracle_univariate(degree, z0.real());
    const double rel = std::abs(m.christoffel_value - ref) / ref;
    io::Json check;
    check["chebyshev_growth_squared"] = ref;
    check["relative_error"] = rel;
    check["passed"] = rel <= tol;
    r.check = check;
  }
  return r;
}

struct HoelLevineFlags {
  std::string output;
  bool timestamp = true;
};

inline int cmd_hoel_levine(int degree, const std::string& z0_text, const HoelLevineFlags& flags,
                           std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = tolerance_from_env();
    io::ReportFile r = hoel_levine_report(degree, io::parse_complex(z0_text), tol);
    if (flags.timestamp) r.timestamp = utc_timestamp();
    write_report_to(r, flags.output, out);
    const bool check_ok = !r.check || r.check->at("passed").get<bool>();
    return (r.certificate.verdict == "certified" && check_ok) ? exit_code::ok : exit_code::certification_failure;
  });
}

/// Extremal polynomial Q_n read from the dual l1 solution.
inline io::Json growth_report(const io::ProblemFile& pf, double tol, bool* passed = nullptr) {
  if (!pf.external_point.is_real()) {
    throw InputError("growth: not applicable for complex z0 (the l1 duality statement is real)");
  }
  const DesignProblem problem = pf.problem();
  const OptimalDesign od = optimal_design(problem);
  const L1Solution& s = *od.solution;
  const Eigen::VectorXd p = problem.p_real();
  const ExtremalPolynomial q = extremal_polynomial(s, problem.v.entries, p);

  io::Json j;
  j["schema_version"] = io::kSchemaVersion;
  j["command"] = "growth";
  j["basis"] = std::string(to_string(pf.basis));
  j["degree"] = pf.degree;
  j["dim"] = pf.dim;
  j["external_point"] = io::point_to_json(pf.external_point);
  io::Json terms = io::Json::array();
  for (std::size_t k = 0; k < problem.basis.dimension(); ++k) terms.push_back(problem.basis.term_name(k));
  j["terms"] = terms;
  j["coefficients"] = io::vector_to_json(q.coefficients);
  j["value_at_z0"] = q.value_at_z0;
  j["sup_norm_on_candidates"] = q.sup_norm;
  j["l1_value"] = s.value;
  io::Json pattern = io::Json::array();
  const double scale = std::max(1.0, s.c.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < s.c.size(); ++i) {
    if (std::abs(s.c(i)) <= 1e-10 * scale) continue;
    io::Json e;
    e["index"] = i;
    e["coordinates"] = io::row_to_json(problem.candidates.points, i);
    e["q_value"] = q.node_values(i);
    e["sign_c"] = s.c(i) > 0 ? 1 : -1;
    pattern.push_back(e);
  }
  j["sign_pattern"] = pattern;
  bool ok = std::abs(q.sup_norm - 1.0) <= tol && std::abs(q.value_at_z0 - s.value) <= tol * std::max(1.0, s.value);
  for (const auto& e : pattern) {
    ok = ok && std::abs(e["q_value"].get<double>() - e["sign_c"].get<int>()) <= tol;
  }
  j["passed"] = ok;
  if (passed) *passed = ok;
  return j;
}

inline int cmd_growth(const std::string& problem_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = tolerance_from_env();
    bool ok = false;
    const io::Json j = growth_report(io::load_problem(problem_path), tol, &ok);
    io::write_json(out, j);
    return ok ? exit_code::ok : exit_code::certification_failure;
  });
}

struct VerifyFlags {
  bool oracle = false;
  int resolution = 200;
  int rounds = 4;
  double cap = 1e7;
};

inline int cmd_verify(const std::string& problem_path, const std::string& report_path, const VerifyFlags& flags,
                      std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const double tol = tolerance_from_env();
    const io::ProblemFile pf = io::load_problem(problem_path);
    const io::ReportFile r = io::load_report(report_path);
    const DesignProblem problem = pf.problem();
    const Eigen::MatrixXd& x = problem.candidates.points;
    if (r.nodes.rows() != x.rows() || r.nodes.cols() != x.cols() ||
        (r.nodes - x).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + x.cwiseAbs().maxCoeff())) {
      throw InputError("report nodes do not match the problem's candidate set");
    }
    if ((r.weights.array() < 0.0).any()) throw InputError("report has negative weights");
    bool pass = true;
    auto line = [&](const std::string& what, bool ok, const std::string& detail) {
      out << (ok ? "PASS " : "FAIL ") << what << ": " << detail << "\n";
      pass = pass && ok;
    };
    auto fmt = [](double v) { return io::detail::format_double(v); };

    DesignMeasure m;
    m.weights = r.weights;
    const double sum = m.weights.sum();
    if (std::abs(sum - 1.0) > 1e-12) {
      out << "note: weights sum to " << fmt(sum) << "; renormalized\n";
      m.weights /= sum;
    }
    m.support = support_of(m.weights);

    std::optional<double> l1_value;
    if (problem.real_mode()) {
      const OptimalDesign fresh = optimal_design(problem);
      l1_value = fresh.solution->value;
    }
    const Certificate cert = certify(m, problem.v.entries, problem.p, CertifyOptions{tol, l1_value});
    double reference_k = l1_value ? (*l1_value) * (*l1_value) : r.christoffel_value;

    if (cert.verdict == Verdict::not_applicable) {
      // Degenerate design: check the l1 solution the weights came from.
      const Eigen::VectorXcd& c = r.primal_c;
      if (c.size() != x.rows()) throw InputError("report primal_c length differs from the node count");
      const Eigen::VectorXcd resid = problem.v.entries.transpose().cast<Complex>() * c - problem.p;
      const double scale = 1.0 + problem.p.cwiseAbs().maxCoeff();
      line("feasibility", resid.cwiseAbs().maxCoeff() <= 1e-9 * scale,
           "max |V^t c - p| = " + fmt(resid.cwiseAbs().maxCoeff()));
      const double norm = c.cwiseAbs().sum();
      if (l1_value) {
        line("l1 optimality", std::abs(norm - *l1_value) <= tol * std::max(1.0, *l1_value),
             "||c||_1 = " + fmt(norm) + ", recomputed optimum " + fmt(*l1_value));
      }
      const double wdev = (c.cwiseAbs() / norm - m.weights).cwiseAbs().maxCoeff();
      line("weights = |c| / ||c||_1", wdev <= tol, "max deviation " + fmt(wdev));
      line("christoffel value", std::abs(r.christoffel_value - norm * norm) <= tol * norm * norm,
           "report " + fmt(r.christoffel_value) + ", ||c||_1^2 = " + fmt(norm * norm));
      out << "note: " << cert.note << "\n";
    } else {
      line("certificate", cert.verdict == Verdict::certified,
           "gap " + fmt(cert.duality_gap) + ", sign residual " + fmt(cert.sign_residual) + ", off-support excess " +
               fmt(cert.off_support_excess));
      line("lower bound ||c||_1 >= sqrt(K)", cert.lower_bound_check,
           "K = " + fmt(cert.christoffel_value) + ", bound^2 = " + fmt(cert.lower_bound * cert.lower_bound));
      line("reported K", std::abs(r.christoffel_value - cert.christoffel_value) <= tol * cert.christoffel_value,
           "report " + fmt(r.christoffel_value) + ", recomputed " + fmt(cert.christoffel_value));
      if (!l1_value) reference_k = cert.christoffel_value;
    }

    if (flags.oracle) {
      const oracle::GridResult g =
          oracle::grid_min_christoffel(problem, oracle::GridSpec{flags.resolution, flags.rounds, flags.cap});
      const double rel = std::abs(g.christoffel_value - reference_k) / reference_k;
      line("oracle agreement", rel <= kOracleAgreement,
           "grid K = " + fmt(g.christoffel_value) + " vs " + fmt(reference_k) + " (relative " + fmt(rel) + ")");
      if (l1_value) {
        line("oracle above l1 bound", g.christoffel_value >= reference_k - 1e-9 * std::max(1.0, reference_k),
             "grid K - ||c||_1^2 = " + fmt(g.christoffel_value - reference_k));
      }
      const Eigen::VectorXd blend =
          0.5 * m.weights + Eigen::VectorXd::Constant(m.weights.size(), 0.5 / static_cast<double>(m.weights.size()));
      const oracle::GradientCheck fd = oracle::fd_gradient_check(problem, blend);
      line("finite-difference gradient", fd.max_deviation <= kGradientAgreement,
           "max relative deviation " + fmt(fd.max_deviation));
    }
    out << (pass ? "verified" : "verification failed") << "\n";
    return pass ? exit_code::ok : exit_code::certification_failure;
  });
}

}  // namespace optipred::cli
