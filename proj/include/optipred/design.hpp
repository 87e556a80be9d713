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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "optipred/errors.hpp"
#include "optipred/l1solver.hpp"
#include "optipred/polybasis.hpp"

namespace optipred {

/// Finite candidate set X = {x_1, ..., x_M} (rows of `points`) and the point
/// z0 where the prediction variance is minimized.
struct CandidateSet {
  Eigen::MatrixXd points;
  EvalPoint external_point;

  Eigen::Index size() const { return points.rows(); }
  int spatial_dim() const { return static_cast<int>(points.cols()); }
};

/// Throws InputError unless the points are finite and distinct and z0 is
/// external. z0 is external when it is not a node; for d = 1 and real z0 it
/// must also lie outside [min X, max X].
inline void validate(const CandidateSet& set) {
  const auto& x = set.points;
  if (x.rows() == 0 || x.cols() == 0) throw InputError("candidate set is empty");
  if (!x.allFinite()) throw InputError("candidate points must be finite");
  if (set.external_point.dim() != static_cast<std::size_t>(x.cols())) {
    throw InputError("external point has dimension " + std::to_string(set.external_point.dim()) +
                     ", candidates have dimension " + std::to_string(x.cols()));
  }
  for (const auto& c : set.external_point.coords()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InputError("external point must be finite");
    }
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      if (x.row(i) == x.row(j)) {
        throw InputError("candidate points " + std::to_string(i) + " and " + std::to_string(j) +
                         " coincide");
      }
    }
  }
  if (!set.external_point.is_real()) return;
  const std::vector<double> z = set.external_point.real_coords();
  const Eigen::Map<const Eigen::RowVectorXd> zr(z.data(), static_cast<Eigen::Index>(z.size()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if ((x.row(i) - zr).norm() <= 1e-14 * (1.0 + zr.norm())) {
      throw InputError("external point coincides with candidate " + std::to_string(i));
    }
  }
  if (x.cols() == 1 && z[0] >= x.col(0).minCoeff() && z[0] <= x.col(0).maxCoeff()) {
    throw InputError("external point lies inside the candidate interval; z0 must be external");
  }
}

/// M x N matrix with entries P_j(x_i); row k is R_k^t.
struct VandermondeMatrix {
  Eigen::MatrixXd entries;
  Eigen::Index rank = 0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

inline VandermondeMatrix vandermonde(const PolyBasis& basis, const CandidateSet& candidates,
                                     double rank_tol = 1e-10) {
  VandermondeMatrix out;
  out.entries = evaluate_rows(basis, candidates.points);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(out.entries);
  qr.setThreshold(rank_tol);
  out.rank = qr.rank();
  if (out.rank < out.cols()) {
    throw UnisolvenceError("candidate set not unisolvent for degree " + std::to_string(basis.degree()) +
                           " (rank " + std::to_string(out.rank) + " < N = " +
                           std::to_string(out.cols()) + ")");
  }
  return out;
}

/// Basis, validated candidates, Vandermonde matrix and p = (P_j(z0)).
struct DesignProblem {
  PolyBasis basis;
  CandidateSet candidates;
  VandermondeMatrix v;
  Eigen::VectorXcd p;

  bool real_mode() const { return candidates.external_point.is_real(); }
  Eigen::VectorXd p_real() const { return p.real(); }
};

inline DesignProblem make_problem(const PolyBasis& basis, CandidateSet candidates) {
  if (candidates.spatial_dim() != basis.spatial_dim()) {
    throw InputError("candidate dimension " + std::to_string(candidates.spatial_dim()) +
                     " does not match basis dimension " + std::to_string(basis.spatial_dim()));
  }
  validate(candidates);
  if (candidates.size() < static_cast<Eigen::Index>(basis.dimension())) {
    throw InputError("need M >= N: " + std::to_string(candidates.size()) + " candidates for " +
                     std::to_string(basis.dimension()) + " basis functions");
  }
  VandermondeMatrix v = vandermonde(basis, candidates);
  Eigen::VectorXcd p = basis.eval(candidates.external_point);
  return DesignProblem{basis, std::move(candidates), std::move(v), std::move(p)};
}

/// G = V^t W V. Weights must be nonnegative; they need not sum to one.
inline Eigen::MatrixXd gram(const Eigen::MatrixXd& v, const Eigen::VectorXd& w) {
  if (w.size() != v.rows()) throw InputError("weight vector length does not match the node count");
  if ((w.array() < 0.0).any() || !w.allFinite()) throw InputError("weights must be finite and nonnegative");
  return v.transpose() * w.asDiagonal() * v;
}

/// Relative pivot below which a Gram matrix is treated as singular.
inline constexpr double kGramPivotTol = 1e-12;

/// G^{-1} p through a pivoted LDL^t factorization; no regularization.
inline Eigen::VectorXcd solve_gram(const Eigen::MatrixXd& g, const Eigen::VectorXcd& p) {
  if (g.rows() != g.cols() || g.rows() != p.size()) throw InputError("Gram matrix and p sizes differ");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  if (ldlt.info() != Eigen::Success || d.size() == 0 || !(dmax > 0.0) ||
      d.minCoeff() <= kGramPivotTol * dmax) {
    throw DegenerateDesignError("degenerate design: some polynomial has zero variance (singular Gram matrix)");
  }
  Eigen::VectorXcd x(p.size());
  x.real() = ldlt.solve(Eigen::VectorXd(p.real()));
  x.imag() = ldlt.solve(Eigen::VectorXd(p.imag()));
  return x;
}

/// K = p^* G^{-1} p, the reciprocal Christoffel function at z0. The conjugate
/// pairing keeps K = sum |q_k(z0)|^2 for complex z0.
inline double christoffel(const Eigen::MatrixXd& g, const Eigen::VectorXcd& p) {
  const Eigen::VectorXcd x = solve_gram(g, p);
  return p.dot(x).real();
}

/// Stationarity values a_k = R_k^t G^{-1} p for every node.
inline Eigen::VectorXcd stationarity(const Eigen::MatrixXd& v, const Eigen::MatrixXd& g,
                                     const Eigen::VectorXcd& p) {
  return v * solve_gram(g, p);
}

/// Analytic gradient dK/dw_k = -|R_k^t G^{-1} p|^2.
inline Eigen::VectorXd christoffel_gradient(const Eigen::MatrixXd& v, const Eigen::VectorXd& w,
                                            const Eigen::VectorXcd& p) {
  return -stationarity(v, gram(v, w), p).cwiseAbs2();
}

/// Probability weights on the candidates with the attained K.
struct DesignMeasure {
  Eigen::VectorXd weights;
  std::vector<Eigen::Index> support;
  double christoffel_value = 0.0;
  double growth_value = 0.0;
  bool degenerate = false;
};

inline constexpr double kSupportThreshold = 1e-10;

inline std::vector<Eigen::Index> support_of(const Eigen::VectorXd& w, double threshold = kSupportThreshold) {
  std::vector<Eigen::Index> s;
  const double cut = threshold * (w.size() ? w.maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > cut) s.push_back(i);
  }
  return s;
}

inline DesignMeasure make_measure(Eigen::VectorXd weights, double k, bool degenerate) {
  DesignMeasure m;
  m.support = support_of(weights);
  m.weights = std::move(weights);
  m.christoffel_value = k;
  m.growth_value = std::sqrt(k);
  m.degenerate = degenerate;
  return m;
}

/// Closed-form optimal design for N unisolvent nodes: w_i = |l_i(z0)| / sum_j |l_j(z0)|
/// and K = (sum_j |l_j(z0)|)^2. Zero weights are allowed and mark the design
/// degenerate.
inline DesignMeasure hoel_levine_design(const PolyBasis& basis, const Eigen::MatrixXd& nodes,
                                        const EvalPoint& z0) {
  const Eigen::VectorXcd ell = lagrange_values(basis, nodes, z0);
  const Eigen::VectorXd mag = ell.cwiseAbs();
  const double lebesgue = mag.sum();
  if (!(lebesgue > 0.0)) throw InputError("all Lagrange values vanish at z0");
  DesignMeasure m = make_measure(mag / lebesgue, lebesgue * lebesgue, false);
  m.degenerate = m.support.size() < static_cast<std::size_t>(nodes.rows());
  return m;
}

/// Hoel-Levine design on the n + 1 Chebyshev extreme points of [-1, 1].
inline DesignMeasure hoel_levine_chebyshev(int degree, const EvalPoint& z0) {
  const Eigen::VectorXd x = chebyshev_extreme_points(degree);
  return hoel_levine_design(PolyBasis(BasisKind::chebyshev, degree), Eigen::MatrixXd(x), z0);
}

/// c = W V G^{-1} p. At an optimal design this equals sqrt(K) W s and solves V^t c = p.
inline Eigen::VectorXcd reconstruct_coefficients(const Eigen::MatrixXd& v, const Eigen::VectorXd& w,
                                                 const Eigen::VectorXcd& p) {
  return w.cast<Complex>().asDiagonal() * stationarity(v, gram(v, w), p);
}

struct DesignOptions {
  L1Options l1{};
  /// Stationarity gap at which the complex-mode fixed-point refinement stops.
  double refinement_tol = 1e-12;
  int max_refinement_iterations = 50000;
};

struct OptimalDesign {
  DesignMeasure measure;
  /// Primal/dual l1 pair; empty in complex mode.
  std::optional<L1Solution> solution;
  /// Coefficients c with V^t c = p (complex only in complex mode).
  Eigen::VectorXcd coefficients;
  bool complex_mode = false;
  int refinement_iterations = 0;
};

namespace detail {

inline bool gram_is_singular(const Eigen::MatrixXd& v, const Eigen::VectorXd& w) {
  try {
    (void)solve_gram(gram(v, w), Eigen::VectorXcd::Zero(v.cols()));
    return false;
  } catch (const DegenerateDesignError&) {
    return true;
  }
}

// Iterates w <- |c| / ||c||_1 with c = W V G^{-1} p. Fixed points satisfy
// |R_k^t G^{-1} p| = sqrt(K) on the support.
inline int refine_complex(const Eigen::MatrixXd& v, const Eigen::VectorXcd& p, Eigen::VectorXd& w,
                          const DesignOptions& opts) {
  int it = 0;
  for (; it < opts.max_refinement_iterations; ++it) {
    const Eigen::VectorXd mag = stationarity(v, gram(v, w), p).cwiseAbs();
    const double k = w.dot(mag.cwiseAbs2());
    if (mag.cwiseAbs2().maxCoeff() / k - 1.0 <= opts.refinement_tol) break;
    w = w.cwiseProduct(mag);
    w /= w.sum();
  }
  return it;
}

}  // namespace detail

/// Optimal design for a finite candidate set through l1 minimization:
/// c = argmin{||c||_1 : V^t c = p}, w = |c| / ||c||_1, K = ||c||_1^2.
///
/// Complex z0 with M = N uses the exact interpolation formula. Complex z0 with
/// M > N starts from the stacked real/imaginary l1 solution and refines the
/// weights by the fixed-point map until the stationarity conditions hold.
inline OptimalDesign optimal_design(const Eigen::MatrixXd& v, const Eigen::VectorXcd& p,
                                    const DesignOptions& opts = {}) {
  OptimalDesign out;
  const bool real = p.imag().isZero(0.0);
  if (real) {
    const Eigen::MatrixXd vt = v.transpose();
    L1Solution s = solve_l1_primal(vt, p.real(), opts.l1);
    if (!is_optimal(s.status)) {
      throw SolverError(std::string("l1 problem ended with status ") + to_string(s.status));
    }
    const double norm = s.c.lpNorm<1>();
    if (!(norm > 0.0)) throw InputError("p = 0: every polynomial vanishes at z0");
    Eigen::VectorXd w = s.c.cwiseAbs() / norm;
    const bool degenerate = detail::gram_is_singular(v, w);
    out.measure = make_measure(std::move(w), norm * norm, degenerate);
    out.coefficients = s.c.cast<Complex>();
    out.solution = std::move(s);
    return out;
  }

  out.complex_mode = true;
  if (v.rows() == v.cols()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(v.transpose());
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw UnisolvenceError("square candidate set is not unisolvent");
    Eigen::VectorXcd c(p.size());
    c.real() = lu.solve(Eigen::VectorXd(p.real()));
    c.imag() = lu.solve(Eigen::VectorXd(p.imag()));
    const double norm = c.cwiseAbs().sum();
    Eigen::VectorXd w = c.cwiseAbs() / norm;
    const bool degenerate = detail::gram_is_singular(v, w);
    out.measure = make_measure(std::move(w), norm * norm, degenerate);
    out.coefficients = std::move(c);
    return out;
  }

  const StackedL1Solution s = solve_l1_stacked(v.transpose(), p, opts.l1);
  if (!is_optimal(s.status)) {
    throw SolverError(std::string("stacked l1 problem ended with status ") + to_string(s.status));
  }
  const double m = static_cast<double>(v.rows());
  Eigen::VectorXd w = 0.5 * s.c.cwiseAbs() / s.c.cwiseAbs().sum() + Eigen::VectorXd::Constant(v.rows(), 0.5 / m);
  out.refinement_iterations = detail::refine_complex(v, p, w, opts);
  const double k = christoffel(gram(v, w), p);
  out.coefficients = reconstruct_coefficients(v, w, p);
  out.measure = make_measure(std::move(w), k, false);
  return out;
}

inline OptimalDesign optimal_design(const DesignProblem& problem, const DesignOptions& opts = {}) {
  return optimal_design(problem.v.entries, problem.p, opts);
}

inline OptimalDesign optimal_design(const PolyBasis& basis, const CandidateSet& candidates,
                                    const DesignOptions& opts = {}) {
  return optimal_design(make_problem(basis, candidates), opts);
}

/// The dual vector read as a polynomial Q_n in the working basis.
struct ExtremalPolynomial {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd node_values;  ///< Q_n(x_i)
  double sup_norm = 0.0;        ///< max_i |Q_n(x_i)|
  double value_at_z0 = 0.0;     ///< |Q_n(z0)|
};

inline ExtremalPolynomial extremal_polynomial(const L1Solution& solution, const Eigen::MatrixXd& v,
                                              const Eigen::VectorXd& p) {
  if (solution.z.size() != v.cols()) throw InputError("dual vector does not match the basis");
  ExtremalPolynomial q;
  q.coefficients = solution.z;
  q.node_values = v * solution.z;
  q.sup_norm = q.node_values.cwiseAbs().maxCoeff();
  q.value_at_z0 = std::abs(p.dot(solution.z));
  return q;
}

enum class Verdict { certified, failed, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::failed: return "failed";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "unknown";
}

/// Numerical evidence for the optimality conditions of a design.
///
/// With a_k = R_k^t G^{-1} p and K = sum_k w_k |a_k|^2:
///  - sign_residual = max over the support of | |a_k| / sqrt(K) - 1 |
///  - off_support_excess = max(0, max off the support of |a_k| / sqrt(K) - 1)
///  - duality_gap = K / L^2 - 1, where L is a lower bound on the optimal
///    sqrt(K): the l1 optimum when supplied, else K / max_k |a_k| (the value
///    at z0 of the polynomial G^{-1} p scaled to sup-norm one on X).
struct Certificate {
  double christoffel_value = 0.0;
  double lower_bound = 0.0;
  double duality_gap = 0.0;
  double sign_residual = 0.0;
  double off_support_excess = 0.0;
  Eigen::VectorXcd stationarity;
  bool lower_bound_check = false;
  Verdict verdict = Verdict::not_applicable;
  std::string note;
};

struct CertifyOptions {
  double tol = 1e-8;
  std::optional<double> l1_value;
};

inline Certificate certify(const DesignMeasure& design, const Eigen::MatrixXd& v, const Eigen::VectorXcd& p,
                           const CertifyOptions& opts = {}) {
  Certificate cert;
  const Eigen::VectorXd& w = design.weights;
  if (w.size() != v.rows()) throw InputError("design has " + std::to_string(w.size()) +
                                             " weights for " + std::to_string(v.rows()) + " candidates");
  if (std::abs(w.sum() - 1.0) > 1e-9) throw InputError("design weights do not sum to one");
  Eigen::MatrixXd g = gram(v, w);
  try {
    cert.stationarity = stationarity(v, g, p);
  } catch (const DegenerateDesignError& e) {
    cert.verdict = Verdict::not_applicable;
    cert.note = e.what();
    return cert;
  }
  const Eigen::VectorXd mag = cert.stationarity.cwiseAbs();
  const double k = w.dot(mag.cwiseAbs2());
  const double root = std::sqrt(k);
  cert.christoffel_value = k;

  std::vector<bool> on_support(static_cast<std::size_t>(w.size()), false);
  for (auto i : support_of(w)) on_support[static_cast<std::size_t>(i)] = true;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double ratio = mag(i) / root;
    if (on_support[static_cast<std::size_t>(i)]) {
      cert.sign_residual = std::max(cert.sign_residual, std::abs(ratio - 1.0));
    } else {
      cert.off_support_excess = std::max(cert.off_support_excess, ratio - 1.0);
    }
  }
  cert.lower_bound = opts.l1_value ? *opts.l1_value : k / mag.maxCoeff();
  cert.duality_gap = k / (cert.lower_bound * cert.lower_bound) - 1.0;
  cert.lower_bound_check = k >= cert.lower_bound * cert.lower_bound * (1.0 - opts.tol);
  const bool ok = std::abs(cert.duality_gap) <= opts.tol && cert.sign_residual <= opts.tol &&
                  cert.off_support_excess <= opts.tol && cert.lower_bound_check;
  cert.verdict = ok ? Verdict::certified : Verdict::failed;
  return cert;
}

}  // namespace optipred
