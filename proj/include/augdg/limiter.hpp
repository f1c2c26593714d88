#pragma once

#include <stdexcept>
#include <vector>

#include "augdg/assembly.hpp"
#include "augdg/field.hpp"
#include "augdg/quadrature.hpp"
#include "augdg/spaces.hpp"

namespace augdg {

struct CellLimitResult {
  double theta = 1.0;
  double min_before = 0.0;
  double min_after = 0.0;
  bool limited = false;
};

struct LimiterReport {
  std::vector<double> theta;  // per cell
  int limited_count = 0;
  double limited_fraction = 0.0;
  double min_before = 0.0;
  double min_after = 0.0;
};

/// Lobatto control set used by the scaling limiter: max(k+1, 2) points per
/// axis, endpoints included so face values are controlled.
inline std::shared_ptr<const QuadratureRule> limiter_point_set(int k, int dim) {
  return gauss_lobatto(std::max(k + 1, 2), dim);
}

/// Zhang-Shu scaling toward the cell average: u~ = theta (u - ubar) + ubar
/// with theta = min over control points with u(p) < 0 of ubar/(ubar - u(p)).
/// The transform is affine with the mean fixed, so the cell average is
/// preserved exactly.  Requires ubar >= 0 up to roundoff; a negative average
/// means the augmentation failed and cannot be rescued here.
inline CellLimitResult limit_cell(std::vector<double>& coef, const BasisSet& space,
                                  const std::vector<double>& one_coef, double ubar,
                                  const QuadratureRule& points, AssemblyWorkspace& ws) {
  const auto& tab = ws.table(space, points, -1);
  const int nq = static_cast<int>(tab.points.size());
  CellLimitResult res;
  std::vector<double> u(nq);
  res.min_before = std::numeric_limits<double>::infinity();
  for (int q = 0; q < nq; ++q) {
    double s = 0.0;
    for (int i = 0; i < space.size(); ++i) s += coef[i] * tab.val(q, i);
    u[q] = s;
    res.min_before = std::min(res.min_before, s);
  }
  res.min_after = res.min_before;

  if (ubar < -1e-12)
    throw std::runtime_error("limit_cell: negative cell average " + std::to_string(ubar) +
                             "; scaling cannot restore positivity");
  if (res.min_before >= 0.0) {
    res.theta = 1.0;
    return res;
  }
  if (ubar <= 0.0) {
    // ubar in [-1e-12, 0]: the formula degenerates to theta = 0.
    res.theta = 0.0;
    for (int i = 0; i < space.size(); ++i) coef[i] = ubar * one_coef[i];
    res.min_after = ubar;
    res.limited = true;
    return res;
  }
  double theta = 1.0;
  // points within evaluation roundoff of zero do not trigger scaling,
  // otherwise re-limiting an already-limited cell would keep nudging it
  const double tiny = -1e-14 * std::max(1.0, std::abs(ubar));
  for (int q = 0; q < nq; ++q) {
    if (u[q] >= tiny) continue;
    if (std::abs(u[q] - ubar) <= 1e-14) continue;  // flat-cell guard
    theta = std::min(theta, ubar / (ubar - u[q]));
  }
  res.theta = theta;
  if (theta < 1.0) {
    for (int i = 0; i < space.size(); ++i)
      coef[i] = theta * coef[i] + (1.0 - theta) * ubar * one_coef[i];
    res.limited = true;
    res.min_after = std::numeric_limits<double>::infinity();
    for (int q = 0; q < nq; ++q)
      res.min_after = std::min(res.min_after, theta * (u[q] - ubar) + ubar);
  }
  return res;
}

/// Post-hoc limiting of a solved field, cell by cell.  Traces already
/// consumed by downstream cells are unaffected; use the sweep's inline
/// limiter when downstream positivity of the inflow matters.
inline LimiterReport limit_field(DgField& f) {
  AssemblyWorkspace ws;
  LimiterReport rep;
  const int n_cells = f.mesh.cells();
  rep.theta.assign(n_cells, 1.0);
  rep.min_before = std::numeric_limits<double>::infinity();
  rep.min_after = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ones(f.spaces.size());
  for (int cell = 0; cell < n_cells; ++cell) {
    const BasisSet& space = f.cell_space(cell);
    auto& one = ones[f.space_id[cell]];
    if (one.empty()) one = constant_one_coefficients(space);
    const double ubar = cell_average(f, cell).value;
    const auto lob = limiter_point_set(space.spec.k, f.mesh.dim);
    const CellLimitResult r = limit_cell(f.coef[cell], space, one, ubar, *lob, ws);
    rep.theta[cell] = r.theta;
    if (r.limited) ++rep.limited_count;
    rep.min_before = std::min(rep.min_before, r.min_before);
    rep.min_after = std::min(rep.min_after, r.min_after);
  }
  rep.limited_fraction = n_cells > 0 ? static_cast<double>(rep.limited_count) / n_cells : 0.0;
  return rep;
}

}  // namespace augdg
