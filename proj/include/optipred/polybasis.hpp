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
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optipred/errors.hpp"

namespace optipred {

using Complex = std::complex<double>;

/// A point in R^d or C^d. Candidate nodes are always real; only the external
/// point z0 may carry nonzero imaginary parts.
class EvalPoint {
 public:
  EvalPoint() = default;
  EvalPoint(std::initializer_list<double> coords) : coords_(coords.begin(), coords.end()) {}
  explicit EvalPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {}

  static EvalPoint real(std::span<const double> coords) {
    return EvalPoint(std::vector<Complex>(coords.begin(), coords.end()));
  }
  static EvalPoint real(const Eigen::Ref<const Eigen::VectorXd>& coords) {
    return real(std::span<const double>(coords.data(), static_cast<std::size_t>(coords.size())));
  }

  std::size_t dim() const { return coords_.size(); }
  const std::vector<Complex>& coords() const { return coords_; }
  Complex operator[](std::size_t i) const { return coords_[i]; }

  bool is_real() const {
    for (const auto& c : coords_) {
      if (c.imag() != 0.0) return false;
    }
    return true;
  }

  std::vector<double> real_coords() const {
    if (!is_real()) throw InputError("point has complex coordinates");
    std::vector<double> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(c.real());
    return out;
  }

 private:
  std::vector<Complex> coords_;
};

enum class BasisKind {
  monomial,                        ///< 1, x, x^2, ... (d = 1)
  chebyshev,                       ///< T_0, T_1, ..., T_n (d = 1)
  total_degree_monomial,           ///< x^a with |a| <= n
  total_degree_chebyshev_product,  ///< T_{a_1}(x_1)...T_{a_d}(x_d) with |a| <= n
};

inline std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::monomial: return "monomial";
    case BasisKind::chebyshev: return "chebyshev";
    case BasisKind::total_degree_monomial: return "total-degree-monomial";
    case BasisKind::total_degree_chebyshev_product: return "total-degree-chebyshev-product";
  }
  return "unknown";
}

inline std::optional<BasisKind> parse_basis_kind(std::string_view name) {
  for (auto kind : {BasisKind::monomial, BasisKind::chebyshev, BasisKind::total_degree_monomial,
                    BasisKind::total_degree_chebyshev_product}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

/// Chebyshev on intervals, total-degree monomials in higher dimension.
inline BasisKind default_basis_kind(int spatial_dim) {
  return spatial_dim == 1 ? BasisKind::chebyshev : BasisKind::total_degree_monomial;
}

/// binomial(n + d, d), the dimension of polynomials of total degree <= n in d variables.
inline std::size_t polynomial_space_dimension(int degree, int spatial_dim) {
  std::size_t result = 1;
  for (int k = 1; k <= spatial_dim; ++k) {
    result = result * static_cast<std::size_t>(degree + k) / static_cast<std::size_t>(k);
  }
  return result;
}

/// A graded polynomial basis {P_1, ..., P_N} of total degree <= n in d variables.
///
/// Basis functions are ordered by total degree; within one degree the exponent
/// vectors are sorted lexicographically descending, so x_1 carries the highest
/// power first. For d = 2 and n = 2 the order is 1, x, y, x^2, xy, y^2. The
/// order is graded, so the degree-n' basis is a prefix of the degree-n basis
/// for every n' < n.
class PolyBasis {
 public:
  PolyBasis(BasisKind kind, int degree, int spatial_dim = 1)
      : kind_(kind), degree_(degree), spatial_dim_(spatial_dim) {
    if (degree < 0) throw InputError("polynomial degree must be nonnegative");
    if (spatial_dim < 1) throw InputError("spatial dimension must be positive");
    if ((kind == BasisKind::monomial || kind == BasisKind::chebyshev) && spatial_dim != 1) {
      throw InputError("basis '" + std::string(to_string(kind)) +
                       "' is univariate; use a total-degree basis for dim > 1");
    }
    build_exponents();
  }

  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int spatial_dim() const { return spatial_dim_; }
  std::size_t dimension() const { return exponents_.size(); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  bool is_chebyshev() const {
    return kind_ == BasisKind::chebyshev || kind_ == BasisKind::total_degree_chebyshev_product;
  }

  /// Values (P_1(x), ..., P_N(x)). Chebyshev factors use the three-term
  /// recurrence, valid for complex and off-interval arguments.
  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval(std::span<const Scalar> point) const {
    if (point.size() != static_cast<std::size_t>(spatial_dim_)) {
      throw InputError("point dimension " + std::to_string(point.size()) +
                       " does not match basis dimension " + std::to_string(spatial_dim_));
    }
    const auto n = static_cast<std::size_t>(degree_);
    std::vector<Scalar> table(static_cast<std::size_t>(spatial_dim_) * (n + 1));
    for (std::size_t c = 0; c < point.size(); ++c) {
      Scalar* row = table.data() + c * (n + 1);
      const Scalar x = point[c];
      row[0] = Scalar(1);
      if (n >= 1) row[1] = x;
      for (std::size_t k = 2; k <= n; ++k) {
        row[k] = is_chebyshev() ? Scalar(2) * x * row[k - 1] - row[k - 2] : x * row[k - 1];
      }
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(static_cast<Eigen::Index>(exponents_.size()));
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      Scalar v(1);
      for (std::size_t c = 0; c < point.size(); ++c) {
        v *= table[c * (n + 1) + static_cast<std::size_t>(exponents_[j][c])];
      }
      out(static_cast<Eigen::Index>(j)) = v;
    }
    return out;
  }

  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& point) const {
    return eval<double>(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
  }

  Eigen::VectorXcd eval(const EvalPoint& point) const {
    return eval<Complex>(std::span<const Complex>(point.coords()));
  }

  /// Human-readable name of basis function j, e.g. "T2(x1)*T1(x2)" or "x1^2".
  std::string term_name(std::size_t j) const {
    std::string name;
    for (int c = 0; c < spatial_dim_; ++c) {
      const int e = exponents_.at(j)[static_cast<std::size_t>(c)];
      const std::string var = spatial_dim_ == 1 ? "x" : "x" + std::to_string(c + 1);
      if (is_chebyshev()) {
        if (e == 0) continue;
        if (!name.empty()) name += "*";
        name += "T" + std::to_string(e) + "(" + var + ")";
      } else {
        if (e == 0) continue;
        if (!name.empty()) name += "*";
        name += e == 1 ? var : var + "^" + std::to_string(e);
      }
    }
    return name.empty() ? "1" : name;
  }

 private:
  void build_exponents() {
    std::vector<int> current(static_cast<std::size_t>(spatial_dim_), 0);
    for (int total = 0; total <= degree_; ++total) append_degree(current, 0, total);
  }

  void append_degree(std::vector<int>& current, std::size_t coord, int remaining) {
    if (coord + 1 == current.size()) {
      current[coord] = remaining;
      exponents_.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[coord] = e;
      append_degree(current, coord + 1, remaining - e);
    }
  }

  BasisKind kind_;
  int degree_;
  int spatial_dim_;
  std::vector<std::vector<int>> exponents_;
};

inline std::size_t dimension(const PolyBasis& basis) { return basis.dimension(); }

inline Eigen::VectorXcd eval_basis(const PolyBasis& basis, const EvalPoint& point) {
  return basis.eval(point);
}

/// Real basis values at every row of `nodes` (M x d), giving the M x N matrix
/// with entries P_j(x_i).
inline Eigen::MatrixXd evaluate_rows(const PolyBasis& basis, const Eigen::MatrixXd& nodes) {
  if (nodes.cols() != basis.spatial_dim()) {
    throw InputError("node dimension " + std::to_string(nodes.cols()) +
                     " does not match basis dimension " + std::to_string(basis.spatial_dim()));
  }
  Eigen::MatrixXd out(nodes.rows(), static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    const Eigen::VectorXd x = nodes.row(i).transpose();
    out.row(i) = basis.eval(x).transpose();
  }
  return out;
}

/// The n + 1 extreme points cos(k pi / n) of T_n, ascending. The sine form
/// keeps the set exactly symmetric with exact endpoints and an exact zero.
inline Eigen::VectorXd chebyshev_extreme_points(int n) {
  if (n < 1) throw InputError("Chebyshev extreme points need degree n >= 1");
  Eigen::VectorXd x(n + 1);
  for (int k = 0; k <= n; ++k) {
    x(k) = std::sin(std::numbers::pi * static_cast<double>(2 * k - n) / static_cast<double>(2 * n));
  }
  x(0) = -1.0;
  x(n) = 1.0;
  return x;
}

/// Fundamental Lagrange polynomial values (l_1(z0), ..., l_N(z0)) for a
/// unisolvent node set, obtained by solving V^t c = p with p_j = P_j(z0).
inline Eigen::VectorXcd lagrange_values(const PolyBasis& basis, const Eigen::MatrixXd& nodes,
                                        const EvalPoint& z0) {
  const auto n = static_cast<Eigen::Index>(basis.dimension());
  if (nodes.rows() != n) {
    throw InputError("Lagrange values need exactly N = " + std::to_string(n) + " nodes, got " +
                     std::to_string(nodes.rows()));
  }
  const Eigen::MatrixXd v = evaluate_rows(basis, nodes);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v.transpose());
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw UnisolvenceError("node set is not unisolvent for degree " + std::to_string(basis.degree()));
  }
  const Eigen::VectorXcd p = basis.eval(z0);
  Eigen::VectorXcd c(n);
  c.real() = lu.solve(Eigen::VectorXd(p.real()));
  c.imag() = lu.solve(Eigen::VectorXd(p.imag()));
  return c;
}

}  // namespace optipred
