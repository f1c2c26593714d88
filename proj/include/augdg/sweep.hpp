#pragma once

#include <memory>
#include <vector>

#include "augdg/assembly.hpp"
#include "augdg/field.hpp"
#include "augdg/limiter.hpp"
#include "augdg/problem.hpp"

namespace augdg {

enum class AugmentApply { Off, All, Adaptive };

struct SweepOptions {
  AugmentApply augment = AugmentApply::Off;
  std::shared_ptr<const BasisSet> augmented_space;  // base + psi, for All/Adaptive
  bool limiter = false;
  int quad_points = 0;      // explicit points per axis (raised to exactness)
  int min_quad_points = 0;  // floor for non-polynomial or concentrated data
  bool record_audit = false;
};

struct AuditEntry {
  int cell = 0;
  double ubar_base = 0.0;  // average of the unaugmented solve (NaN if skipped)
  bool augmented = false;
  double ubar_final = 0.0;
};

struct SweepResult {
  DgField field;
  std::vector<AuditEntry> audit;
  LimiterReport limiter_report;
  double max_solve_residual = 0.0;
  int augmented_cells = 0;
};

/// Solve the mesh cell by cell in upwind (lexicographic, first axis fastest)
/// order.  All advection coefficients must be positive so every dependency
/// points from lower to higher indices.  With the limiter on, cells are
/// limited as soon as they are solved, so downstream inflow reads the
/// limited trace.
inline SweepResult sweep_solve(const CartesianMesh& mesh, const PdeCoefficients& coeffs,
                               const std::array<ScalarFn, 3>& boundary_inflow,
                               std::shared_ptr<const BasisSet> base_space,
                               const SweepOptions& opts,
                               const RegionRule* source_region = nullptr) {
  const int dim = mesh.dim;
  AssemblyWorkspace ws;
  SweepResult out;
  DgField& f = out.field;
  f.mesh = mesh;
  f.spaces.push_back(base_space);
  const bool may_augment = opts.augment != AugmentApply::Off;
  if (may_augment) {
    if (!opts.augmented_space)
      throw std::invalid_argument("sweep_solve: augmented space required for this mode");
    f.spaces.push_back(opts.augmented_space);
  }
  const int n_cells = mesh.cells();
  f.space_id.assign(n_cells, 0);
  f.coef.resize(n_cells);

  auto pick_n = [&](const BasisSet& s) {
    int n = required_points_for(s.max_axis_degree);
    n = std::max(n, opts.quad_points);
    n = std::max(n, opts.min_quad_points);
    return n;
  };
  const auto rule_base = gauss_legendre(pick_n(*base_space), dim);
  const auto rule_aug =
      may_augment ? gauss_legendre(pick_n(*opts.augmented_space), dim) : rule_base;

  const std::vector<double> one_base = constant_one_coefficients(*base_space);
  const std::vector<double> one_aug =
      may_augment ? constant_one_coefficients(*opts.augmented_space) : std::vector<double>();
  const auto lob = limiter_point_set(base_space->spec.k, dim);

  std::vector<double> ref_int_base(base_space->size());
  for (int i = 0; i < base_space->size(); ++i)
    ref_int_base[i] = base_space->fn[i].integrate_cell();
  std::vector<double> ref_int_aug;
  if (may_augment) {
    ref_int_aug.resize(opts.augmented_space->size());
    for (int i = 0; i < opts.augmented_space->size(); ++i)
      ref_int_aug[i] = opts.augmented_space->fn[i].integrate_cell();
  }

  out.limiter_report.theta.assign(n_cells, 1.0);
  out.limiter_report.min_before = std::numeric_limits<double>::infinity();
  out.limiter_report.min_after = std::numeric_limits<double>::infinity();

  for (int cell = 0; cell < n_cells; ++cell) {
    const auto idx = mesh.unflatten(cell);
    LocalProblem prob = f.cell_geometry(cell);
    prob.coeffs = &coeffs;
    prob.source_region = source_region;
    for (int a = 0; a < dim; ++a) {
      if (idx[a] == 0) {
        prob.inflow[a] = boundary_inflow[a];
      } else {
        auto nb_idx = idx;
        nb_idx[a] -= 1;
        const int nb = mesh.flat_index(nb_idx);
        const LocalProblem nb_geom = f.cell_geometry(nb);
        prob.inflow[a] = [&f, nb, nb_geom, a](const Point& x) {
          Point ref = nb_geom.to_reference(x);
          ref[a] = 1.0;  // trace from the neighbor's outflow face
          return f.eval_ref(nb, ref);
        };
      }
    }

    double jac_vol = 1.0;
    for (int a = 0; a < dim; ++a) jac_vol *= 0.5 * prob.width[a];
    const double measure = prob.measure();

    auto run = [&](const BasisSet& space, const QuadratureRule& rule,
                   const std::vector<double>& ref_int) {
      LocalSystem sys = assemble_local(prob, space, space, rule, ws);
      LuSolveResult sol;
      try {
        sol = solve_local(sys.a, sys.rhs);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " in cell (" +
                                 std::to_string(idx[0]) + "," + std::to_string(idx[1]) +
                                 (dim == 3 ? "," + std::to_string(idx[2]) : "") + ")");
      }
      out.max_solve_residual = std::max(out.max_solve_residual, sol.residual_inf);
      double ubar = 0.0;
      for (size_t i = 0; i < sol.x.size(); ++i) ubar += ref_int[i] * sol.x[i];
      ubar *= jac_vol / measure;
      return std::make_pair(std::move(sol.x), ubar);
    };

    AuditEntry entry;
    entry.cell = cell;
    int sid = 0;
    std::vector<double> coef;
    double ubar = 0.0;
    if (opts.augment == AugmentApply::All) {
      entry.ubar_base = std::numeric_limits<double>::quiet_NaN();
      std::tie(coef, ubar) = run(*opts.augmented_space, *rule_aug, ref_int_aug);
      sid = 1;
      entry.augmented = true;
    } else {
      std::tie(coef, ubar) = run(*base_space, *rule_base, ref_int_base);
      entry.ubar_base = ubar;
      if (opts.augment == AugmentApply::Adaptive && ubar < 0.0) {
        std::tie(coef, ubar) = run(*opts.augmented_space, *rule_aug, ref_int_aug);
        sid = 1;
        entry.augmented = true;
      }
    }
    entry.ubar_final = ubar;
    if (entry.augmented) ++out.augmented_cells;

    if (opts.limiter) {
      const BasisSet& space = sid == 0 ? *base_space : *opts.augmented_space;
      const auto& one = sid == 0 ? one_base : one_aug;
      const CellLimitResult lr = limit_cell(coef, space, one, ubar, *lob, ws);
      out.limiter_report.theta[cell] = lr.theta;
      if (lr.limited) ++out.limiter_report.limited_count;
      out.limiter_report.min_before = std::min(out.limiter_report.min_before, lr.min_before);
      out.limiter_report.min_after = std::min(out.limiter_report.min_after, lr.min_after);
    }

    f.space_id[cell] = sid;
    f.coef[cell] = std::move(coef);
    if (opts.record_audit) out.audit.push_back(entry);
  }
  out.limiter_report.limited_fraction =
      n_cells > 0 ? static_cast<double>(out.limiter_report.limited_count) / n_cells : 0.0;
  return out;
}

}  // namespace augdg
