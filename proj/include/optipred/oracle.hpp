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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "optipred/design.hpp"
#include "optipred/errors.hpp"

// Brute-force verifiers. Nothing here calls the simplex or l1 code, and the
// Christoffel values are computed by a separate Cholesky routine.

namespace optipred::oracle {

struct GridSpec {
  int resolution = 100;         ///< weights are multiples of 1 / resolution
  int refinement_rounds = 0;    ///< step halvings after the exhaustive pass
  double cap = 1e7;             ///< maximum number of grid points enumerated
};

struct GridResult {
  Eigen::VectorXd weights;
  double christoffel_value = 0.0;
  /// Best K after the grid pass (entry 0) and after every refinement round.
  std::vector<double> history;
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
};

/// binomial(r + M - 1, M - 1), in floating point to survive large inputs.
inline double grid_point_count(Eigen::Index m, int r) {
  double count = 1.0;
  for (Eigen::Index k = 1; k < m; ++k) {
    count = count * static_cast<double>(r + k) / static_cast<double>(k);
  }
  return std::round(count);
}

/// K(w) = p^* (V^t W V)^{-1} p by an unpivoted Cholesky on scratch storage.
/// Returns nullopt when the Gram matrix is numerically singular.
class ChristoffelEvaluator {
 public:
  ChristoffelEvaluator(const Eigen::MatrixXd& v, const Eigen::VectorXcd& p)
      : v_(v), pr_(p.real()), pi_(p.imag()), complex_(!p.imag().isZero(0.0)),
        n_(static_cast<std::size_t>(v.cols())), g_(n_ * n_), y_(n_) {
    if (p.size() != v.cols()) throw InputError("p has wrong length for V");
  }

  std::optional<double> operator()(const Eigen::VectorXd& w) {
    std::fill(g_.begin(), g_.end(), 0.0);
    for (Eigen::Index k = 0; k < v_.rows(); ++k) {
      const double wk = w(k);
      if (wk == 0.0) continue;
      for (std::size_t i = 0; i < n_; ++i) {
        const double a = wk * v_(k, static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j <= i; ++j) g_[i * n_ + j] += a * v_(k, static_cast<Eigen::Index>(j));
      }
    }
    double dmax = 0.0;
    for (std::size_t i = 0; i < n_; ++i) dmax = std::max(dmax, g_[i * n_ + i]);
    if (!(dmax > 0.0)) return std::nullopt;
    for (std::size_t j = 0; j < n_; ++j) {
      double d = g_[j * n_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= g_[j * n_ + k] * g_[j * n_ + k];
      if (d <= 1e-12 * dmax) return std::nullopt;
      const double l = std::sqrt(d);
      g_[j * n_ + j] = l;
      for (std::size_t i = j + 1; i < n_; ++i) {
        double s = g_[i * n_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= g_[i * n_ + k] * g_[j * n_ + k];
        g_[i * n_ + j] = s / l;
      }
    }
    double k = forward_norm2(pr_);
    if (complex_) k += forward_norm2(pi_);
    return k;
  }

 private:
  // ||L^{-1} b||^2 = b^t G^{-1} b.
  double forward_norm2(const Eigen::VectorXd& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = b(static_cast<Eigen::Index>(i));
      for (std::size_t k = 0; k < i; ++k) s -= g_[i * n_ + k] * y_[k];
      y_[i] = s / g_[i * n_ + i];
      sum += y_[i] * y_[i];
    }
    return sum;
  }

  const Eigen::MatrixXd& v_;
  Eigen::VectorXd pr_;
  Eigen::VectorXd pi_;
  bool complex_;
  std::size_t n_;
  std::vector<double> g_;
  std::vector<double> y_;
};

namespace detail {

// Pairwise transfers of mass `step` (or all of w_j when smaller) from j to i,
// accepted only on strict decrease.
inline void pattern_search(ChristoffelEvaluator& eval, Eigen::VectorXd& w, double& best, double step,
                           std::uint64_t& evaluated) {
  const Eigen::Index m = w.size();
  for (int pass = 0; pass < 100000; ++pass) {
    bool improved = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i == j || w(j) <= 0.0) continue;
        const double t = std::min(step, w(j));
        Eigen::VectorXd trial = w;
        trial(i) += t;
        trial(j) -= t;
        if (t == w(j)) trial(j) = 0.0;
        ++evaluated;
        const auto k = eval(trial);
        if (k && *k < best) {
          best = *k;
          w = trial;
          improved = true;
        }
      }
    }
    if (!improved) return;
  }
}

}  // namespace detail

/// Exhaustive minimization of K over the weight simplex quantized to
/// multiples of 1/r, followed by local pattern search with halving steps.
/// Grid points with a singular Gram matrix are skipped. Enumeration is in
/// lexicographic order and only strict improvements replace the incumbent,
/// so ties resolve to the lexicographically smallest weight vector.
inline GridResult grid_min_christoffel(const Eigen::MatrixXd& v, const Eigen::VectorXcd& p,
                                       const GridSpec& spec) {
  if (spec.resolution < 1) throw InputError("grid resolution must be positive");
  if (spec.refinement_rounds < 0) throw InputError("refinement rounds must be nonnegative");
  const Eigen::Index m = v.rows();
  const double count = grid_point_count(m, spec.resolution);
  if (count > spec.cap) {
    throw OracleCapError("oracle grid has " + std::to_string(static_cast<long long>(count)) +
                         " points, above the cap of " + std::to_string(static_cast<long long>(spec.cap)));
  }
  ChristoffelEvaluator eval(v, p);
  GridResult out;
  const int r = spec.resolution;
  std::vector<int> parts(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd w(m);
  double best = std::numeric_limits<double>::infinity();

  // Iterate compositions of r into m parts in lexicographic order.
  parts.back() = r;
  while (true) {
    for (Eigen::Index i = 0; i < m; ++i) w(i) = static_cast<double>(parts[static_cast<std::size_t>(i)]) / r;
    ++out.evaluated;
    const auto k = eval(w);
    if (!k) {
      ++out.skipped;
    } else if (*k < best) {
      best = *k;
      out.weights = w;
    }
    // Advance: find the rightmost position before the last that can grow.
    Eigen::Index pos = m - 2;
    while (pos >= 0) {
      int tail = 0;
      for (Eigen::Index j = pos + 1; j < m; ++j) tail += parts[static_cast<std::size_t>(j)];
      if (tail > 0) {
        ++parts[static_cast<std::size_t>(pos)];
        for (Eigen::Index j = pos + 1; j < m; ++j) parts[static_cast<std::size_t>(j)] = 0;
        parts.back() = tail - 1;
        break;
      }
      --pos;
    }
    if (pos < 0) break;
  }
  if (!std::isfinite(best)) throw DegenerateDesignError("every grid point gives a singular Gram matrix");
  out.history.push_back(best);
  double step = 1.0 / r;
  for (int round = 0; round < spec.refinement_rounds; ++round) {
    step *= 0.5;
    detail::pattern_search(eval, out.weights, best, step, out.evaluated);
    out.history.push_back(best);
  }
  out.christoffel_value = best;
  return out;
}

inline GridResult grid_min_christoffel(const DesignProblem& problem, const GridSpec& spec) {
  return grid_min_christoffel(problem.v.entries, problem.p, spec);
}

struct GradientCheck {
  double max_deviation = 0.0;
  Eigen::VectorXd analytic;
  Eigen::VectorXd numeric;
  double christoffel_value = 0.0;
  /// |sum_k w_k dK/dw_k + K| / K
  double euler_residual = 0.0;
};

/// Central differences of K (independent Cholesky) against the analytic
/// gradient -(R_k^t G^{-1} p)^2. The deviation of coordinate k is relative to
/// max(|analytic_k|, 1e-8 max_j |analytic_j|).
inline GradientCheck fd_gradient_check(const Eigen::MatrixXd& v, const Eigen::VectorXcd& p,
                                       const Eigen::VectorXd& w, double step = 1e-6) {
  if (w.size() != v.rows()) throw InputError("weight vector length does not match the node count");
  if ((w.array() <= 0.0).any()) throw InputError("finite-difference check needs strictly positive weights");
  if (!(step > 0.0)) throw InputError("finite-difference step must be positive");
  GradientCheck out;
  out.analytic = christoffel_gradient(v, w, p);
  ChristoffelEvaluator eval(v, p);
  const auto k0 = eval(w);
  if (!k0) throw DegenerateDesignError("singular Gram matrix at the check point");
  out.christoffel_value = *k0;
  out.numeric.resize(w.size());
  const double floor = 1e-8 * out.analytic.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    Eigen::VectorXd plus = w;
    Eigen::VectorXd minus = w;
    plus(k) += step;
    minus(k) -= step;
    const auto kp = eval(plus);
    const auto km = eval(minus);
    if (!kp || !km) throw DegenerateDesignError("singular Gram matrix near the check point");
    out.numeric(k) = (*kp - *km) / (2.0 * step);
    const double denom = std::max(std::abs(out.analytic(k)), floor);
    out.max_deviation = std::max(out.max_deviation, std::abs(out.numeric(k) - out.analytic(k)) / denom);
  }
  out.euler_residual = std::abs(w.dot(out.analytic) + out.christoffel_value) / out.christoffel_value;
  return out;
}

inline GradientCheck fd_gradient_check(const DesignProblem& problem, const Eigen::VectorXd& w,
                                       double step = 1e-6) {
  return fd_gradient_check(problem.v.entries, problem.p, w, step);
}

/// T_n(z0)^2 by the three-term recurrence: the extremal growth value on [-1, 1].
inline double growth_oracle_univariate(int n, double z0) {
  if (n < 0) throw InputError("degree must be nonnegative");
  if (!(std::abs(z0) > 1.0)) throw InputError("z0 must lie outside [-1, 1]");
  double prev = 1.0;
  double cur = z0;
  if (n == 0) return 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * z0 * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur * cur;
}

}  // namespace optipred::oracle
