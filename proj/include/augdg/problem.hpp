#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "augdg/polynomial.hpp"

namespace augdg {

using ScalarFn = std::function<double(const Point&)>;  // physical coordinates

/// PDE coefficient: a positive constant or a scalar field.
struct Coef {
  double value = 0.0;
  ScalarFn fn;

  Coef() = default;
  Coef(double v) : value(v) {}  // NOLINT: implicit by design
  Coef(ScalarFn f) : fn(std::move(f)) {}

  double operator()(const Point& x) const { return fn ? fn(x) : value; }
  bool is_constant() const { return !fn; }
};

/// Coefficients of the model equation: sum_a d(adv_a u)/dx_a + gamma u = f.
/// In the space-time (1+2)d setting adv = (alpha, beta, 1).
struct PdeCoefficients {
  std::array<Coef, 3> adv = {Coef(1.0), Coef(1.0), Coef(1.0)};
  Coef gamma = Coef(0.0);
  ScalarFn source;  // null means zero
};

/// Tensor-product Cartesian mesh; axis widths may vary per index.
struct CartesianMesh {
  int dim = 2;
  std::array<std::vector<double>, 3> edges;  // edges[a] has count(a)+1 entries

  static CartesianMesh uniform(int dim, const std::array<double, 3>& lo,
                               const std::array<double, 3>& hi, const std::array<int, 3>& n) {
    CartesianMesh m;
    m.dim = dim;
    for (int a = 0; a < dim; ++a) {
      if (n[a] < 1 || !(hi[a] > lo[a]))
        throw std::invalid_argument("CartesianMesh: bad extents");
      m.edges[a].resize(n[a] + 1);
      for (int i = 0; i <= n[a]; ++i)
        m.edges[a][i] = lo[a] + (hi[a] - lo[a]) * static_cast<double>(i) / n[a];
    }
    for (int a = dim; a < 3; ++a) m.edges[a] = {0.0, 1.0};
    return m;
  }

  int count(int axis) const { return static_cast<int>(edges[axis].size()) - 1; }
  int cells() const {
    int c = 1;
    for (int a = 0; a < dim; ++a) c *= count(a);
    return c;
  }
  double width(int axis, int i) const { return edges[axis][i + 1] - edges[axis][i]; }

  int flat_index(const std::array<int, 3>& idx) const {
    int f = 0;
    for (int a = dim - 1; a >= 0; --a) f = f * count(a) + idx[a];
    return f;
  }
  std::array<int, 3> unflatten(int flat) const {
    std::array<int, 3> idx = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      idx[a] = flat % count(a);
      flat /= count(a);
    }
    return idx;
  }
};

/// Quadrature rule in reference coordinates for sources supported on a
/// sub-region of the cell (weights carry the region map Jacobian).
struct RegionRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Everything one cell-local solve needs.
struct LocalProblem {
  int dim = 2;
  Point lo = {0, 0, 0};
  Point width = {1, 1, 1};
  const PdeCoefficients* coeffs = nullptr;
  // Inflow trace on the low face of each axis, as a function of the
  // physical coordinates of face points; null means zero inflow.
  std::array<ScalarFn, 3> inflow;
  // When set, replaces the volume quadrature of the source term.
  const RegionRule* source_region = nullptr;

  Point to_physical(const Point& ref) const {
    Point x = {0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = lo[a] + 0.5 * (ref[a] + 1.0) * width[a];
    return x;
  }
  Point to_reference(const Point& phys) const {
    Point r = {0, 0, 0};
    for (int a = 0; a < dim; ++a) r[a] = 2.0 * (phys[a] - lo[a]) / width[a] - 1.0;
    return r;
  }
  double measure() const {
    double m = 1.0;
    for (int a = 0; a < dim; ++a) m *= width[a];
    return m;
  }
};

/// Check the sign preconditions of the model problem at a set of reference
/// points of the cell; returns a description of the first violation.
inline std::string check_positivity_preconditions(const LocalProblem& p,
                                                  const std::vector<Point>& ref_points) {
  for (const Point& r : ref_points) {
    const Point x = p.to_physical(r);
    for (int a = 0; a < p.dim; ++a)
      if (!(p.coeffs->adv[a](x) > 0.0)) return "advection coefficient not positive";
    if (p.coeffs->gamma(x) < 0.0) return "gamma negative";
    if (p.coeffs->source && p.coeffs->source(x) < 0.0) return "source negative";
  }
  return {};
}

}  // namespace augdg
