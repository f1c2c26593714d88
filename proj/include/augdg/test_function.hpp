#pragma once

#include <limits>
#include <vector>

#include "augdg/assembly.hpp"

namespace augdg {

/// Witness that the local space admits a test function v with
/// L(u,v) = int_S u for all u in the space and v >= 0 on the check points.
struct PositivityCertificate {
  std::vector<Point> check_points;  // reference coordinates (the set G)
  std::vector<double> values;       // v at the check points
  std::vector<double> v_coef;       // v over the space's basis
  double min_v = std::numeric_limits<double>::quiet_NaN();
  double solve_residual = 0.0;

  bool valid() const { return min_v >= -1e-12; }
};

/// Solve the transposed local system <L(phi_b, .), v> = int phi_b for all
/// trial functions phi_b, and record min v over the rule's points (plus the
/// inflow-face points when `include_inflow_faces` is set, which covers every
/// evaluation point of the right-hand side functional R).
inline PositivityCertificate special_test_function(const BasisSet& space,
                                                   const LocalProblem& prob,
                                                   const QuadratureRule& rule,
                                                   AssemblyWorkspace& ws,
                                                   bool include_inflow_faces = false) {
  LocalSystem sys = assemble_local(prob, space, space, rule, ws);
  const std::vector<double> m = basis_cell_integrals(space, prob);
  const Mat at = sys.a.transposed();
  LuSolveResult sol = solve_dense(at, m);

  PositivityCertificate cert;
  cert.v_coef = sol.x;
  cert.solve_residual = sol.residual_inf;

  auto add_points = [&](const detail::BasisTable& tab) {
    for (size_t q = 0; q < tab.points.size(); ++q) {
      double v = 0.0;
      for (int i = 0; i < space.size(); ++i)
        v += cert.v_coef[i] * tab.val(static_cast<int>(q), i);
      cert.check_points.push_back(tab.points[q]);
      cert.values.push_back(v);
    }
  };
  add_points(ws.table(space, rule, -1));
  if (include_inflow_faces)
    for (int axis = 0; axis < prob.dim; ++axis) add_points(ws.table(space, rule, 2 * axis));

  cert.min_v = std::numeric_limits<double>::infinity();
  for (double v : cert.values) cert.min_v = std::min(cert.min_v, v);
  return cert;
}

/// Minimum of sum_i coef_i phi_i over a uniform tensor grid on the
/// reference cell (used to report cell-wide minima of test functions).
inline double min_on_reference_grid(const BasisSet& space, const std::vector<double>& coef,
                                    int n_per_axis) {
  const int dim = space.spec.dim;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= n_per_axis;
  double mn = std::numeric_limits<double>::infinity();
  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    Point p = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      p[a] = -1.0 + 2.0 * (rem % n_per_axis) / (n_per_axis - 1);
      rem /= n_per_axis;
    }
    double v = 0.0;
    for (int i = 0; i < space.size(); ++i) v += coef[i] * space.fn[i].eval(p);
    mn = std::min(mn, v);
  }
  return mn;
}

}  // namespace augdg
