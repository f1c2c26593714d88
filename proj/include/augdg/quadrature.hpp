#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "augdg/polynomial.hpp"

namespace augdg {

enum class QuadKind { GaussLegendre, GaussLobatto };

struct QuadratureRule {
  QuadKind kind;
  int dim = 1;
  int n_per_axis = 1;
  int exact_degree = 0;  // highest per-axis polynomial degree integrated exactly
  std::vector<Point> points;
  std::vector<double> weights;
};

namespace detail {

// Legendre P_n(x) and P_n'(x) by recurrence.
inline std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double om = 1.0 - x * x;
  const double dp = (om > 1e-300) ? n * (p0 - x * p1) / om : 0.0;
  return {p1, dp};
}

inline std::vector<double> gauss_legendre_nodes_1d(int n, std::vector<double>& weights) {
  std::vector<double> x(n);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, refined by Newton to 1e-15.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      auto [pv, dpv] = legendre(n, t);
      p = pv;
      dp = dpv;
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    auto [pv, dpv] = legendre(n, t);
    x[n - 1 - i] = t;
    weights[n - 1 - i] = 2.0 / ((1.0 - t * t) * dpv * dpv);
  }
  return x;
}

inline std::vector<double> gauss_lobatto_nodes_1d(int n, std::vector<double>& weights) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: need n >= 2");
  std::vector<double> x(n);
  weights.assign(n, 0.0);
  x[0] = -1.0;
  x[n - 1] = 1.0;
  const int m = n - 1;  // interior nodes are roots of P_m'
  for (int i = 1; i < n - 1; ++i) {
    double t = std::cos(M_PI * i / m);  // descending guesses, re-sorted below
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(m, t);
      // Legendre ODE: (1-x^2) P'' = 2x P' - m(m+1) P
      const double d2p = (2.0 * t * dp - m * (m + 1) * p) / (1.0 - t * t);
      const double step = dp / d2p;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[n - 1 - i] = t;
  }
  for (int i = 0; i < n; ++i) {
    auto [p, dp] = legendre(m, x[i]);
    weights[i] = 2.0 / (m * (m + 1) * p * p);
  }
  return x;
}

inline QuadratureRule tensorize(QuadKind kind, int n, int dim, const std::vector<double>& x1,
                                const std::vector<double>& w1, int exact_degree) {
  QuadratureRule rule;
  rule.kind = kind;
  rule.dim = dim;
  rule.n_per_axis = n;
  rule.exact_degree = exact_degree;
  const int total = static_cast<int>(std::pow(n, dim));
  rule.points.reserve(total);
  rule.weights.reserve(total);
  std::array<int, 3> idx = {0, 0, 0};
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = rem % n;
      rem /= n;
    }
    Point p = {0.0, 0.0, 0.0};
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      p[a] = x1[idx[a]];
      w *= w1[idx[a]];
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
  return rule;
}

}  // namespace detail

/// Tensor-product Gauss-Legendre rule; exact per axis up to degree 2n-1.
inline std::shared_ptr<const QuadratureRule> gauss_legendre(int n, int dim) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  if (dim < 1 || dim > 3) throw std::invalid_argument("gauss_legendre: dim must be 1..3");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, dim);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> w;
  const auto x = detail::gauss_legendre_nodes_1d(n, w);
  auto rule = std::make_shared<QuadratureRule>(
      detail::tensorize(QuadKind::GaussLegendre, n, dim, x, w, 2 * n - 1));
  cache[key] = rule;
  return rule;
}

/// Tensor-product Gauss-Lobatto rule; includes the +-1 endpoints per axis,
/// exact per axis up to degree 2n-3, all weights strictly positive.
inline std::shared_ptr<const QuadratureRule> gauss_lobatto(int n, int dim) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: need n >= 2");
  if (dim < 1 || dim > 3) throw std::invalid_argument("gauss_lobatto: dim must be 1..3");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, dim);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> w;
  const auto x = detail::gauss_lobatto_nodes_1d(n, w);
  auto rule = std::make_shared<QuadratureRule>(
      detail::tensorize(QuadKind::GaussLobatto, n, dim, x, w, 2 * n - 3));
  cache[key] = rule;
  return rule;
}

/// Points per axis so that products u*v of two members of a space whose
/// maximal per-axis degree is `max_axis_degree` integrate exactly:
/// 2n-1 >= 2*max_axis_degree.
inline int required_points_for(int max_axis_degree) { return max_axis_degree + 1; }

}  // namespace augdg
