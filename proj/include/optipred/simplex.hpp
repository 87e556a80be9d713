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
#include <vector>

#include "optipred/errors.hpp"

namespace optipred {

/// min cost^t x  subject to  A x = b, x >= 0.
struct LinearProgram {
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double ratio_tol = 1e-10;
  /// Phase-1 residual allowed, relative to 1 + max|b|.
  double feasibility_tol = 1e-9;
  int max_iterations = 200000;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

struct SimplexResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  /// Constraint multipliers y: A^t y <= cost and b^t y = cost^t x at an optimum.
  Eigen::VectorXd duals;
  double objective_value = 0.0;
  /// Basic column per row. Values >= number of variables denote an artificial
  /// left in a redundant row.
  std::vector<Eigen::Index> basis;
  std::vector<Eigen::Index> redundant_rows;
  int iterations = 0;
};

namespace detail {

class DenseTableau {
 public:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DenseTableau(const LinearProgram& lp, const SimplexOptions& opts) : opts_(opts) {
    const auto& a = lp.constraints;
    rows_ = a.rows();
    vars_ = a.cols();
    if (lp.rhs.size() != rows_ || lp.objective.size() != vars_) {
      throw InputError("linear program dimensions are inconsistent");
    }
    sign_ = Eigen::VectorXd::Ones(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (lp.rhs(r) < 0) sign_(r) = -1.0;
    }
    flipped_ = sign_.asDiagonal() * a;
    b_ = sign_.cwiseProduct(lp.rhs);
    cost_ = lp.objective;

    // Unit columns (slacks) start in the basis; every other row gets an artificial.
    basis_.assign(static_cast<std::size_t>(rows_), -1);
    for (Eigen::Index j = 0; j < vars_; ++j) {
      Eigen::Index hit = -1;
      bool unit = true;
      for (Eigen::Index r = 0; r < rows_ && unit; ++r) {
        const double v = flipped_(r, j);
        if (v == 0.0) continue;
        if (v == 1.0 && hit < 0) {
          hit = r;
        } else {
          unit = false;
        }
      }
      if (unit && hit >= 0 && basis_[static_cast<std::size_t>(hit)] < 0) {
        basis_[static_cast<std::size_t>(hit)] = j;
      }
    }
    Eigen::Index artificials = 0;
    for (auto b : basis_) {
      if (b < 0) ++artificials;
    }
    cols_ = vars_ + artificials;
    tab_ = RowMatrix::Zero(rows_, cols_);
    tab_.leftCols(vars_) = flipped_;
    rhs_ = b_;
    Eigen::Index next = vars_;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < 0) {
        tab_(r, next) = 1.0;
        basis_[static_cast<std::size_t>(r)] = next++;
      }
    }
  }

  SimplexResult solve() {
    SimplexResult result;
    if (cols_ > vars_) {
      Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols_);
      phase1.tail(cols_ - vars_).setOnes();
      load_objective(phase1);
      const LpStatus s = iterate(result.iterations);
      if (s == LpStatus::iteration_limit) {
        result.status = s;
        return result;
      }
      const double scale = 1.0 + (b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
      if (objective_ > opts_.feasibility_tol * scale) {
        result.status = LpStatus::infeasible;
        return result;
      }
      drive_out_artificials(result.redundant_rows);
    }
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols_);
    phase2.head(vars_) = cost_;
    load_objective(phase2);
    result.status = iterate(result.iterations);
    if (result.status != LpStatus::optimal) return result;
    extract(result);
    return result;
  }

 private:
  void load_objective(const Eigen::VectorXd& cost) {
    current_cost_ = cost;
    reduced_ = cost;
    objective_ = 0.0;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const double cb = cost(basis_[static_cast<std::size_t>(r)]);
      if (cb == 0.0) continue;
      reduced_ -= cb * tab_.row(r).transpose();
      objective_ += cb * rhs_(r);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    const double piv = tab_(r, j);
    tab_.row(r) /= piv;
    rhs_(r) /= piv;
    tab_(r, j) = 1.0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = tab_(i, j);
      if (f == 0.0) continue;
      tab_.row(i) -= f * tab_.row(r);
      tab_(i, j) = 0.0;
      rhs_(i) -= f * rhs_(r);
      if (rhs_(i) < 0.0 && rhs_(i) > -opts_.ratio_tol) rhs_(i) = 0.0;
    }
    const double d = reduced_(j);
    if (d != 0.0) {
      reduced_ -= d * tab_.row(r).transpose();
      reduced_(j) = 0.0;
      objective_ += d * rhs_(r);
    }
    basis_[static_cast<std::size_t>(r)] = j;
  }

  // Bland's rule: lowest-index improving column enters; among tied ratios the
  // row whose basic variable has the lowest index leaves.
  LpStatus iterate(int& iterations) {
    const double opt_tol = opts_.pivot_tol * (1.0 + current_cost_.cwiseAbs().maxCoeff());
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < vars_; ++j) {
        if (reduced_(j) < -opt_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      if (++iterations > opts_.max_iterations) return LpStatus::iteration_limit;

      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const double a = tab_(r, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = rhs_(r) / a;
        if (leave < 0 || ratio < best - opts_.ratio_tol * (1.0 + std::abs(best))) {
          leave = r;
          best = ratio;
        } else if (ratio <= best + opts_.ratio_tol * (1.0 + std::abs(best)) &&
                   basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = r;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials(std::vector<Eigen::Index>& redundant) {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < vars_) continue;
      Eigen::Index best = -1;
      double mag = opts_.pivot_tol;
      for (Eigen::Index j = 0; j < vars_; ++j) {
        if (std::abs(tab_(r, j)) > mag) {
          mag = std::abs(tab_(r, j));
          best = j;
        }
      }
      if (best < 0) {
        redundant.push_back(r);
        continue;
      }
      rhs_(r) = 0.0;
      pivot(r, best);
    }
  }

  // Recompute the basic solution and the multipliers from the original data
  // so the returned vertex is accurate to working precision.
  void extract(SimplexResult& result) const {
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    Eigen::VectorXd cb(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      if (j < vars_) {
        basis_matrix.col(r) = flipped_.col(j);
        cb(r) = cost_(j);
      } else {
        basis_matrix.col(r) = Eigen::VectorXd::Unit(rows_, r);
        cb(r) = 0.0;
      }
    }
    result.x = Eigen::VectorXd::Zero(vars_);
    Eigen::VectorXd xb = rhs_;
    Eigen::VectorXd yflipped = Eigen::VectorXd::Zero(rows_);
    if (rows_ > 0) {
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
      const Eigen::VectorXd polished = lu.solve(b_);
      if (polished.allFinite()) xb = polished;
      yflipped = lu.transpose().solve(cb);
    }
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      if (j < vars_) result.x(j) = std::max(0.0, xb(r));
    }
    result.duals = sign_.cwiseProduct(yflipped);
    result.basis = basis_;
    result.objective_value = cost_.dot(result.x);
  }

  SimplexOptions opts_;
  Eigen::Index rows_ = 0;
  Eigen::Index vars_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::VectorXd sign_;
  Eigen::MatrixXd flipped_;
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;
  RowMatrix tab_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd current_cost_;
  Eigen::VectorXd reduced_;
  double objective_ = 0.0;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
///
/// Unit columns of A (after making b nonnegative) seed the starting basis;
/// artificials cover the remaining rows. The final vertex and its multipliers
/// are recomputed from the original data by an LU solve on the optimal basis.
inline SimplexResult simplex_solve(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  detail::DenseTableau tableau(lp, opts);
  return tableau.solve();
}

}  // namespace optipred
