#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "augdg/assembly.hpp"
#include "augdg/problem.hpp"
#include "augdg/quadrature.hpp"
#include "augdg/spaces.hpp"

namespace augdg {

/// Piecewise-polynomial DG solution; cells may carry different local spaces
/// (troubled cells hold the augmented one).
struct DgField {
  CartesianMesh mesh;
  std::vector<std::shared_ptr<const BasisSet>> spaces;
  std::vector<int> space_id;                // per cell
  std::vector<std::vector<double>> coef;    // per cell

  const BasisSet& cell_space(int cell) const { return *spaces[space_id[cell]]; }

  LocalProblem cell_geometry(int cell) const {
    const auto idx = mesh.unflatten(cell);
    LocalProblem g;
    g.dim = mesh.dim;
    for (int a = 0; a < mesh.dim; ++a) {
      g.lo[a] = mesh.edges[a][idx[a]];
      g.width[a] = mesh.width(a, idx[a]);
    }
    return g;
  }

  double eval_ref(int cell, const Point& ref) const {
    const BasisSet& s = cell_space(cell);
    double v = 0.0;
    for (int i = 0; i < s.size(); ++i) v += coef[cell][i] * s.fn[i].eval(ref);
    return v;
  }

  int locate(const Point& phys) const {
    std::array<int, 3> idx = {0, 0, 0};
    for (int a = 0; a < mesh.dim; ++a) {
      const auto& e = mesh.edges[a];
      auto it = std::upper_bound(e.begin(), e.end(), phys[a]);
      int i = static_cast<int>(it - e.begin()) - 1;
      idx[a] = std::clamp(i, 0, mesh.count(a) - 1);
    }
    return mesh.flat_index(idx);
  }

  double eval_phys(const Point& phys) const {
    const int cell = locate(phys);
    return eval_ref(cell, cell_geometry(cell).to_reference(phys));
  }
};

struct CellAverage {
  int cell = 0;
  double value = 0.0;
};

inline CellAverage cell_average(const DgField& f, int cell) {
  const LocalProblem g = f.cell_geometry(cell);
  const BasisSet& s = f.cell_space(cell);
  const std::vector<double> m = basis_cell_integrals(s, g);
  double v = 0.0;
  for (int i = 0; i < s.size(); ++i) v += m[i] * f.coef[cell][i];
  return {cell, v / g.measure()};
}

/// Global L2 error against an exact solution, by Gauss quadrature with at
/// least k+2 points per axis.
inline double l2_error(const DgField& f, const ScalarFn& exact, int n_points = 0) {
  double err2 = 0.0;
  for (int cell = 0; cell < f.mesh.cells(); ++cell) {
    const BasisSet& s = f.cell_space(cell);
    const LocalProblem g = f.cell_geometry(cell);
    const int n = std::max(n_points, s.spec.k + 2);
    const auto rule = gauss_legendre(n, f.mesh.dim);
    double jac = 1.0;
    for (int a = 0; a < f.mesh.dim; ++a) jac *= 0.5 * g.width[a];
    for (size_t q = 0; q < rule->points.size(); ++q) {
      const double d = f.eval_ref(cell, rule->points[q]) - exact(g.to_physical(rule->points[q]));
      err2 += rule->weights[q] * jac * d * d;
    }
  }
  return std::sqrt(err2);
}

/// Minimum point value over a per-cell tensor sample set.
inline double min_point_value(const DgField& f, const QuadratureRule& sample) {
  double mn = std::numeric_limits<double>::infinity();
  for (int cell = 0; cell < f.mesh.cells(); ++cell)
    for (const Point& p : sample.points) mn = std::min(mn, f.eval_ref(cell, p));
  return mn;
}

}  // namespace augdg
