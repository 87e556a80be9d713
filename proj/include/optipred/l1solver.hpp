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

#include <cmath>
#include <string>

#include "optipred/errors.hpp"
#include "optipred/simplex.hpp"

namespace optipred {

enum class L1Status { optimal, infeasible, unbounded, degenerate_warning };

inline const char* to_string(L1Status s) {
  switch (s) {
    case L1Status::optimal: return "optimal";
    case L1Status::infeasible: return "infeasible";
    case L1Status::unbounded: return "unbounded";
    case L1Status::degenerate_warning: return "degenerate-warning";
  }
  return "unknown";
}

inline bool is_optimal(L1Status s) {
  return s == L1Status::optimal || s == L1Status::degenerate_warning;
}

struct L1Options {
  SimplexOptions simplex{};
  /// |c_i| above this (relative to max(1, max|c|)) puts node i in the support.
  double support_threshold = 1e-10;
  /// Off-support nodes with |(Vz)_i| >= 1 - slack_tol flag alternative optima.
  double slack_tol = 1e-9;
  double rank_tol = 1e-10;
};

/// Solution pair of  min ||c||_1 s.t. V^t c = p  and  max z^t p s.t. ||V z||_inf <= 1.
struct L1Solution {
  Eigen::VectorXd c;  ///< M primal coefficients
  Eigen::VectorXd z;  ///< N coefficients of the extremal polynomial
  double value = 0.0;
  L1Status status = L1Status::infeasible;
  int iterations = 0;

  double primal_value() const { return c.lpNorm<1>(); }
  double dual_value(const Eigen::VectorXd& p) const { return z.dot(p); }
};

/// Stacked real/imaginary solution of V^t c = p for complex p and real V.
struct StackedL1Solution {
  Eigen::VectorXcd c;
  double value = 0.0;  ///< ||Re c||_1 + ||Im c||_1
  L1Status status = L1Status::infeasible;
  int iterations = 0;
};

namespace detail {

inline void require_full_row_rank(const Eigen::MatrixXd& vt, double tol) {
  if (vt.cols() < vt.rows()) {
    throw InputError("need at least as many candidate points (" + std::to_string(vt.cols()) +
                     ") as basis functions (" + std::to_string(vt.rows()) + ")");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vt);
  qr.setThreshold(tol);
  if (qr.rank() < vt.rows()) {
    throw UnisolvenceError("V^t is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                           std::to_string(vt.rows()) + "): candidate set not unisolvent");
  }
}

inline L1Status status_from(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return L1Status::optimal;
    case LpStatus::infeasible: return L1Status::infeasible;
    case LpStatus::unbounded: return L1Status::unbounded;
    case LpStatus::iteration_limit: break;
  }
  throw SolverError("simplex iteration limit reached");
}

// A node outside the support whose dual slack is zero means another optimal
// vertex may exist.
inline L1Status classify(const Eigen::MatrixXd& vt, L1Solution& s, const L1Options& opts) {
  const Eigen::VectorXd vz = vt.transpose() * s.z;
  const double scale = std::max(1.0, s.c.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < s.c.size(); ++i) {
    if (std::abs(s.c(i)) <= opts.support_threshold * scale && std::abs(vz(i)) >= 1.0 - opts.slack_tol) {
      return L1Status::degenerate_warning;
    }
  }
  return L1Status::optimal;
}

}  // namespace detail

/// Basis pursuit in primal form: c = c+ - c-, min 1^t(c+ + c-) s.t.
/// V^t(c+ - c-) = p, c+/- >= 0. The dual vector z is read from the simplex
/// multipliers of the equality rows.
inline L1Solution solve_l1_primal(const Eigen::MatrixXd& vt, const Eigen::VectorXd& p,
                                  const L1Options& opts = {}) {
  if (p.size() != vt.rows()) throw InputError("p has wrong length for V^t");
  detail::require_full_row_rank(vt, opts.rank_tol);
  const Eigen::Index n = vt.rows();
  const Eigen::Index m = vt.cols();

  LinearProgram lp;
  lp.constraints.resize(n, 2 * m);
  lp.constraints << vt, -vt;
  lp.rhs = p;
  lp.objective = Eigen::VectorXd::Ones(2 * m);
  const SimplexResult r = simplex_solve(lp, opts.simplex);

  L1Solution out;
  out.iterations = r.iterations;
  out.status = detail::status_from(r.status);
  if (r.status != LpStatus::optimal) return out;
  out.c = r.x.head(m) - r.x.tail(m);
  out.z = r.duals;
  out.value = out.c.lpNorm<1>();
  out.status = detail::classify(vt, out, opts);
  return out;
}

/// Basis pursuit in dual form: max p^t z s.t. -1 <= (V z)_i <= 1, written as
/// min -p^t(z+ - z-) with  V z + s1 = 1, -V z + s2 = 1. The primal c is
/// recovered from the row multipliers: c = y2 - y1.
inline L1Solution solve_l1_dual(const Eigen::MatrixXd& vt, const Eigen::VectorXd& p,
                                const L1Options& opts = {}) {
  if (p.size() != vt.rows()) throw InputError("p has wrong length for V^t");
  detail::require_full_row_rank(vt, opts.rank_tol);
  const Eigen::Index n = vt.rows();
  const Eigen::Index m = vt.cols();
  const Eigen::MatrixXd v = vt.transpose();

  LinearProgram lp;
  lp.constraints = Eigen::MatrixXd::Zero(2 * m, 2 * n + 2 * m);
  lp.constraints.block(0, 0, m, n) = v;
  lp.constraints.block(0, n, m, n) = -v;
  lp.constraints.block(m, 0, m, n) = -v;
  lp.constraints.block(m, n, m, n) = v;
  lp.constraints.block(0, 2 * n, 2 * m, 2 * m).setIdentity();
  lp.rhs = Eigen::VectorXd::Ones(2 * m);
  lp.objective = Eigen::VectorXd::Zero(2 * n + 2 * m);
  lp.objective.head(n) = -p;
  lp.objective.segment(n, n) = p;
  const SimplexResult r = simplex_solve(lp, opts.simplex);

  L1Solution out;
  out.iterations = r.iterations;
  out.status = detail::status_from(r.status);
  if (r.status != LpStatus::optimal) return out;
  out.z = r.x.head(n) - r.x.segment(n, n);
  out.c = r.duals.tail(m) - r.duals.head(m);
  out.value = out.z.dot(p);
  out.status = detail::classify(vt, out, opts);
  return out;
}

/// Complex right-hand side with real V: the real and imaginary parts of c are
/// independent real unknowns, giving the 2N-row system
///   [V^t 0; 0 V^t] [Re c; Im c] = [Re p; Im p]
/// minimized in the stacked l1 norm. This is feasible and an upper bound for
/// sum |c_i|, but it is not the complex l1 problem.
inline StackedL1Solution solve_l1_stacked(const Eigen::MatrixXd& vt, const Eigen::VectorXcd& p,
                                          const L1Options& opts = {}) {
  const L1Solution re = solve_l1_primal(vt, p.real(), opts);
  const L1Solution im = solve_l1_primal(vt, p.imag(), opts);
  StackedL1Solution out;
  out.iterations = re.iterations + im.iterations;
  if (!is_optimal(re.status) || !is_optimal(im.status)) {
    out.status = is_optimal(re.status) ? im.status : re.status;
    return out;
  }
  out.c.resize(vt.cols());
  out.c.real() = re.c;
  out.c.imag() = im.c;
  out.value = re.value + im.value;
  out.status = (re.status == L1Status::degenerate_warning || im.status == L1Status::degenerate_warning)
                   ? L1Status::degenerate_warning
                   : L1Status::optimal;
  return out;
}

}  // namespace optipred
