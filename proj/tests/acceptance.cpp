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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "optipred/design.hpp"
#include "optipred/oracle.hpp"
#include "reference.hpp"

namespace {

using namespace optipred;
using Clock = std::chrono::steady_clock;

// Tolerances.
constexpr double kHoelLevineRel = 1e-8;
constexpr double kWeightAbs = 1e-8;
constexpr double kTriangleAbs = 1e-10;
constexpr double kDualityRel = 1e-8;
constexpr double kSignAbs = 1e-8;
constexpr double kOracleRel = 5e-3;
constexpr double kOracleFloor = 1e-9;
constexpr double kGradientDev = 1e-5;
constexpr double kEulerRel = 1e-8;
constexpr double kHomogeneityRel = 1e-10;
constexpr double kCauchySchwarzAbs = 1e-9;
constexpr double kGridAbs = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::MatrixXd column(const std::vector<double>& xs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = xs[i];
  return m;
}

const std::vector<double>& sweep_points() {
  static const std::vector<double> z{1.1, -1.1, 1.5, -1.5, 2.0, -2.0, 5.0, -5.0};
  return z;
}

Outcome hoel_levine_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const PolyBasis basis(BasisKind::chebyshev, n);
    const Eigen::MatrixXd x = chebyshev_extreme_points(n);
    for (double z0 : sweep_points()) {
      const OptimalDesign d = optimal_design(basis, CandidateSet{x, EvalPoint{z0}});
      const double t = testing::chebyshev_closed_form(n, z0);
      const double rel = std::abs(d.measure.christoffel_value - t * t) / (t * t);
      worst = std::max(worst, rel);
      if (rel > kHoelLevineRel) o.fail("n=" + std::to_string(n) + fmt(" z0=%g", z0) + fmt(" rel=%.3e", rel));
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) o.fail(fmt("runtime %.3f s", elapsed));
  if (o.pass) o.detail = fmt("max rel err %.2e", worst) + fmt(", %.3f s", elapsed);
  return o;
}

Outcome weight_formula() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const PolyBasis basis(BasisKind::chebyshev, n);
    const Eigen::VectorXd x = chebyshev_extreme_points(n);
    const std::vector<double> xs(x.data(), x.data() + x.size());
    for (double z0 : sweep_points()) {
      const OptimalDesign d = optimal_design(basis, CandidateSet{Eigen::MatrixXd(x), EvalPoint{z0}});
      const auto ell = testing::lagrange_product(xs, z0);
      double lebesgue = 0.0;
      for (auto e : ell) lebesgue += std::abs(e);
      for (std::size_t i = 0; i < ell.size(); ++i) {
        const double err = std::abs(d.measure.weights(static_cast<Eigen::Index>(i)) - std::abs(ell[i]) / lebesgue);
        worst = std::max(worst, err);
        if (err > kWeightAbs) o.fail("n=" + std::to_string(n) + fmt(" z0=%g", z0) + fmt(" err=%.3e", err));
      }
    }
  }
  if (o.pass) o.detail = fmt("max abs err %.2e", worst);
  return o;
}

Outcome triangle() {
  Outcome o;
  Eigen::MatrixXd verts(3, 2);
  verts << 0, 0, 0, 1, 1, 0;
  const PolyBasis basis(BasisKind::total_degree_monomial, 1, 2);
  struct Case {
    double x, y;
    bool edge;
  };
  const std::vector<Case> cases{{1, 1, false}, {2, 0.5, false}, {0.45, 1.05, false}, {0.3, 0.7, true}, {0.6, 0.4, true}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const OptimalDesign d = optimal_design(basis, CandidateSet{verts, EvalPoint{c.x, c.y}});
    const double lambda = 2.0 * (c.x + c.y) - 1.0;
    const Eigen::Vector3d ref((c.x + c.y - 1.0) / lambda, c.y / lambda, c.x / lambda);
    const double err = (d.measure.weights - ref).cwiseAbs().maxCoeff();
    const double kerr = std::abs(d.measure.christoffel_value - lambda * lambda);
    worst = std::max({worst, err, kerr});
    const std::string at = fmt("(%g, ", c.x) + fmt("%g)", c.y);
    if (err > kTriangleAbs) o.fail(at + fmt(" weight err %.3e", err));
    if (kerr > kTriangleAbs) o.fail(at + fmt(" K err %.3e", kerr));
    if (c.edge && (d.measure.weights(0) != 0.0 || !d.measure.degenerate)) o.fail(at + " edge point not flagged degenerate");
    if (!c.edge && d.measure.degenerate) o.fail(at + " interior case flagged degenerate");
  }
  if (o.pass) o.detail = fmt("5 points, max err %.2e", worst);
  return o;
}

std::optional<DesignProblem> random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> coin(0, 2);
  try {
    if (coin(rng) > 0) {
      const int n = std::uniform_int_distribution<int>(1, 9)(rng);
      const int m = std::uniform_int_distribution<int>(n + 1, 30)(rng);
      std::vector<double> xs;
      for (int i = 0; i < m; ++i) xs.push_back(u(rng));
      const double z0 = (u(rng) < 0 ? -1.0 : 1.0) * (1.05 + 2.0 * std::abs(u(rng)));
      return make_problem(PolyBasis(BasisKind::chebyshev, n), CandidateSet{column(xs), EvalPoint{z0}});
    }
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const PolyBasis basis(BasisKind::total_degree_chebyshev_product, n, 2);
    const int m = std::uniform_int_distribution<int>(static_cast<int>(basis.dimension()), 30)(rng);
    Eigen::MatrixXd pts(m, 2);
    for (int i = 0; i < m; ++i) pts.row(i) << u(rng), u(rng);
    return make_problem(basis, CandidateSet{pts, EvalPoint{1.0 + std::abs(u(rng)), u(rng) * 2.0}});
  } catch (const UnisolvenceError&) {
    return std::nullopt;
  }
}

Outcome strong_duality() {
  Outcome o;
  std::mt19937_64 rng(20260401);
  int done = 0;
  double worst_gap = 0.0;
  double worst_sign = 0.0;
  while (done < 200) {
    const auto prob = random_instance(rng);
    if (!prob) continue;
    ++done;
    const Eigen::MatrixXd vt = prob->v.entries.transpose();
    const Eigen::VectorXd p = prob->p_real();
    const L1Solution primal = solve_l1_primal(vt, p);
    const L1Solution dual = solve_l1_dual(vt, p);
    const double pv = primal.c.lpNorm<1>();
    const double rel = std::max(std::abs(pv - dual.z.dot(p)), std::abs(pv - primal.z.dot(p))) / std::max(1.0, pv);
    worst_gap = std::max(worst_gap, rel);
    if (rel > kDualityRel) o.fail("instance " + std::to_string(done) + fmt(" gap %.3e", rel));
    const Eigen::VectorXd vz = prob->v.entries * primal.z;
    const double scale = std::max(1.0, primal.c.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < vz.size(); ++i) {
      if (std::abs(primal.c(i)) <= 1e-10 * scale) continue;
      const double err = std::abs(vz(i) - (primal.c(i) > 0 ? 1.0 : -1.0));
      worst_sign = std::max(worst_sign, err);
      if (err > kSignAbs) o.fail("instance " + std::to_string(done) + fmt(" sign err %.3e", err));
    }
  }
  if (o.pass) o.detail = "200 instances, max gap " + fmt("%.2e", worst_gap) + fmt(", max sign err %.2e", worst_sign);
  return o;
}

std::vector<std::pair<std::string, DesignProblem>> oracle_corpus() {
  std::vector<std::pair<std::string, DesignProblem>> c;
  const PolyBasis cheb1(BasisKind::chebyshev, 1);
  const PolyBasis cheb2(BasisKind::chebyshev, 2);
  const PolyBasis cheb3(BasisKind::chebyshev, 3);
  const PolyBasis tri(BasisKind::total_degree_monomial, 1, 2);
  Eigen::MatrixXd verts(3, 2);
  verts << 0, 0, 0, 1, 1, 0;
  c.emplace_back("two nodes, z0 = 2", make_problem(cheb1, CandidateSet{column({-1, 1}), EvalPoint{2.0}}));
  c.emplace_back("chebyshev_n2", make_problem(cheb2, CandidateSet{column({-1, 0, 1}), EvalPoint{2.0}}));
  c.emplace_back("triangle", make_problem(tri, CandidateSet{verts, EvalPoint{1.0, 1.0}}));
  c.emplace_back("triangle_edge", make_problem(tri, CandidateSet{verts, EvalPoint{0.3, 0.7}}));
  c.emplace_back("four points, degree 2",
                 make_problem(cheb2, CandidateSet{column({-1, -0.2, 0.5, 1}), EvalPoint{1.3}}));
  c.emplace_back("five_points", make_problem(cheb2, CandidateSet{column({-1, -0.6, 0.1, 0.7, 1}), EvalPoint{-1.5}}));
  c.emplace_back("five points, degree 3",
                 make_problem(cheb3, CandidateSet{column({-1, -0.5, 0, 0.4, 1}), EvalPoint{2.5}}));
  return c;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int count = 0;
  for (const auto& [name, prob] : oracle_corpus()) {
    if (prob.v.rows() > 6) continue;
    ++count;
    const double l1 = optimal_design(prob).solution->value;
    const double bound = l1 * l1;
    const oracle::GridResult g = oracle::grid_min_christoffel(prob, {200, 4, 1e8});
    const double rel = std::abs(g.christoffel_value - bound) / bound;
    worst = std::max(worst, rel);
    if (rel > kOracleRel) o.fail(name + fmt(": rel diff %.3e", rel));
    if (g.christoffel_value < bound - kOracleFloor) o.fail(name + fmt(": oracle below l1 bound by %.3e", bound - g.christoffel_value));
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 60.0) o.fail(fmt("runtime %.1f s", elapsed));
  if (o.pass) o.detail = std::to_string(count) + " instances, max rel diff " + fmt("%.2e", worst) + fmt(", %.1f s", elapsed);
  return o;
}

std::vector<DesignProblem> property_instances() {
  std::vector<DesignProblem> out;
  out.push_back(make_problem(PolyBasis(BasisKind::chebyshev, 2), CandidateSet{column({-1, -0.5, 0, 0.5, 1}), EvalPoint{2.0}}));
  out.push_back(make_problem(PolyBasis(BasisKind::chebyshev, 4),
                             CandidateSet{column({-1, -0.8, -0.4, 0, 0.3, 0.7, 1}), EvalPoint{-1.5}}));
  Eigen::MatrixXd grid(9, 2);
  int r = 0;
  for (double x : {-1.0, 0.0, 1.0}) {
    for (double y : {-1.0, 0.0, 1.0}) grid.row(r++) << x, y;
  }
  out.push_back(make_problem(PolyBasis(BasisKind::total_degree_monomial, 2, 2), CandidateSet{grid, EvalPoint{1.5, 0.5}}));
  out.push_back(make_problem(PolyBasis(BasisKind::chebyshev, 3),
                             CandidateSet{column({-1, -0.3, 0.2, 0.6, 1}), EvalPoint(std::vector<Complex>{{0.4, 1.2}})}));
  return out;
}

Outcome gradient_check() {
  Outcome o;
  std::mt19937_64 rng(77);
  const auto instances = property_instances();
  double worst_dev = 0.0;
  double worst_euler = 0.0;
  for (int t = 0; t < 50; ++t) {
    const DesignProblem& prob = instances[static_cast<std::size_t>(t) % instances.size()];
    const Eigen::VectorXd w = testing::random_simplex_point(prob.v.rows(), rng, 0.05);
    const oracle::GradientCheck g = oracle::fd_gradient_check(prob, w);
    worst_dev = std::max(worst_dev, g.max_deviation);
    worst_euler = std::max(worst_euler, g.euler_residual);
    if (g.max_deviation > kGradientDev) o.fail("vector " + std::to_string(t) + fmt(" deviation %.3e", g.max_deviation));
    if (g.euler_residual > kEulerRel) o.fail("vector " + std::to_string(t) + fmt(" Euler residual %.3e", g.euler_residual));
  }
  if (o.pass) o.detail = "50 vectors, max deviation " + fmt("%.2e", worst_dev) + fmt(", max Euler residual %.2e", worst_euler);
  return o;
}

Outcome homogeneity() {
  Outcome o;
  std::mt19937_64 rng(78);
  double worst = 0.0;
  for (const auto& prob : property_instances()) {
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXd w = testing::random_simplex_point(prob.v.rows(), rng, 0.02);
      const double k = christoffel(gram(prob.v.entries, w), prob.p);
      for (double s : {0.5, 2.0, 10.0}) {
        const double ks = christoffel(gram(prob.v.entries, s * w), prob.p);
        const double rel = std::abs(ks - k / s) / (k / s);
        worst = std::max(worst, rel);
        if (rel > kHomogeneityRel) o.fail(fmt("t=%g", s) + fmt(" rel err %.3e", rel));
      }
    }
  }
  if (o.pass) o.detail = fmt("max rel err %.2e", worst);
  return o;
}

Outcome cauchy_schwarz() {
  Outcome o;
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(-1, 1);
  double min_margin = std::numeric_limits<double>::infinity();
  int done = 0;
  while (done < 500) {
    const int n = 1 + done % 6;
    std::vector<double> xs;
    for (int i = 0; i <= n; ++i) xs.push_back(u(rng));
    std::sort(xs.begin(), xs.end());
    bool distinct = true;
    for (std::size_t i = 1; i < xs.size(); ++i) distinct = distinct && xs[i] - xs[i - 1] > 0.05;
    if (!distinct) continue;
    const Complex z0 = done % 5 == 4 ? Complex(u(rng), 0.2 + std::abs(u(rng)))
                                     : Complex((u(rng) < 0 ? -1.0 : 1.0) * (1.05 + std::abs(u(rng))), 0.0);
    const PolyBasis basis(BasisKind::chebyshev, n);
    const Eigen::MatrixXd v = evaluate_rows(basis, column(xs));
    const Eigen::VectorXcd p = basis.eval(EvalPoint(std::vector<Complex>{z0}));
    const auto ell = testing::lagrange_product(xs, z0);
    double lebesgue = 0.0;
    for (auto e : ell) lebesgue += std::abs(e);
    const Eigen::VectorXd w = testing::random_simplex_point(n + 1, rng, 0.01);
    const double k = christoffel(gram(v, w), p);
    const double margin = k - lebesgue * lebesgue;
    min_margin = std::min(min_margin, margin / (lebesgue * lebesgue));
    if (margin < -kCauchySchwarzAbs * std::max(1.0, lebesgue * lebesgue)) {
      o.fail("draw " + std::to_string(done) + fmt(" K below bound by %.3e", -margin));
    }
    ++done;
  }
  if (o.pass) o.detail = "500 draws, min relative margin " + fmt("%.2e", min_margin);
  return o;
}

Outcome grid_superset() {
  Outcome o;
  std::vector<double> xs;
  for (int i = 0; i < 33; ++i) xs.push_back(-1.0 + 2.0 * i / 32.0);
  const OptimalDesign d = optimal_design(PolyBasis(BasisKind::chebyshev, 2), CandidateSet{column(xs), EvalPoint{2.0}});
  const std::vector<Eigen::Index> want{0, 16, 32};
  if (d.measure.support != want) o.fail("support is not {-1, 0, 1}");
  const double werr = std::max({std::abs(d.measure.weights(0) - 1.0 / 7), std::abs(d.measure.weights(16) - 3.0 / 7),
                                std::abs(d.measure.weights(32) - 3.0 / 7)});
  const double kerr = std::abs(d.measure.christoffel_value - 49.0);
  if (werr > kGridAbs) o.fail(fmt("weight err %.3e", werr));
  if (kerr > kGridAbs * 49.0) o.fail(fmt("K err %.3e", kerr));
  if (o.pass) o.detail = "support {-1, 0, 1}, " + fmt("K = %.15g", d.measure.christoffel_value);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"hoel-levine identity", hoel_levine_identity},
      {"optimal weight formula", weight_formula},
      {"triangle closed form", triangle},
      {"strong duality and sign condition", strong_duality},
      {"oracle equivalence", oracle_equivalence},
      {"analytic gradient", gradient_check},
      {"homogeneity", homogeneity},
      {"cauchy-schwarz bound", cauchy_schwarz},
      {"grid superset stability", grid_superset},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
