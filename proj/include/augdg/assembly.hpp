#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "augdg/linalg.hpp"
#include "augdg/problem.hpp"
#include "augdg/quadrature.hpp"
#include "augdg/spaces.hpp"

namespace augdg {

struct LocalSystem {
  Mat a;                    // a(test, trial) = L(phi_trial, phi_test)
  std::vector<double> rhs;  // rhs(test) = R(phi_test)
};

namespace detail {

struct BasisTable {
  std::vector<Point> points;  // reference coordinates (faces: pinned axis included)
  Mat val;                    // val(q, i)
  std::array<Mat, 3> grad;    // grad[axis](q, i), volume tables only
  bool has_grad = false;
};

}  // namespace detail

/// Caches basis evaluations per (basis, rule, face) triple.  One workspace
/// per thread; the cached tables are immutable once built.
class AssemblyWorkspace {
 public:
  // face = -1 for volume; otherwise 2*axis + (side > 0 ? 1 : 0)
  const detail::BasisTable& table(const BasisSet& basis, const QuadratureRule& vol_rule,
                                  int face) {
    const Key key{basis.uid, &vol_rule, face};
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    detail::BasisTable t;
    if (face < 0) {
      t.points = vol_rule.points;
      t.has_grad = true;
    } else {
      const int axis = face / 2;
      const double side = (face % 2 == 0) ? -1.0 : 1.0;
      const auto fr = face_rule(vol_rule, basis.spec.dim);
      t.points.reserve(fr->points.size());
      for (const Point& fp : fr->points) {
        Point p = {0, 0, 0};
        int f = 0;
        for (int a = 0; a < basis.spec.dim; ++a) p[a] = (a == axis) ? side : fp[f++];
        t.points.push_back(p);
      }
    }
    const int nq = static_cast<int>(t.points.size());
    t.val = Mat(nq, basis.size());
    for (int q = 0; q < nq; ++q)
      for (int i = 0; i < basis.size(); ++i) t.val(q, i) = basis.fn[i].eval(t.points[q]);
    if (t.has_grad) {
      for (int a = 0; a < basis.spec.dim; ++a) {
        t.grad[a] = Mat(nq, basis.size());
        for (int q = 0; q < nq; ++q)
          for (int i = 0; i < basis.size(); ++i)
            t.grad[a](q, i) = basis.dfn[i][a].eval(t.points[q]);
      }
    }
    return tables_.emplace(key, std::move(t)).first->second;
  }

  /// The (dim-1)-dimensional rule matching a volume rule's nodes per axis.
  static std::shared_ptr<const QuadratureRule> face_rule(const QuadratureRule& vol, int dim) {
    if (dim == 2) return gauss_legendre(vol.n_per_axis, 1);
    return gauss_legendre(vol.n_per_axis, 2);
  }

 private:
  struct Key {
    uint64_t basis_uid;
    const QuadratureRule* rule;  // rules are cached for the process lifetime
    int face;
    bool operator<(const Key& o) const {
      return std::tie(basis_uid, rule, face) < std::tie(o.basis_uid, o.rule, o.face);
    }
  };
  std::map<Key, detail::BasisTable> tables_;
};

/// Assemble the cell-local system of the upwind DG scheme:
///   L(u,v) = -int u * sum_a adv_a dv/dx_a + int gamma u v + outflow faces,
///   R(v)   =  int f v + inflow faces.
/// The rule must integrate all trial*test products exactly for constant
/// coefficients; with coefficient fields it is a declared approximation.
inline LocalSystem assemble_local(const LocalProblem& prob, const BasisSet& trial,
                                  const BasisSet& test, const QuadratureRule& rule,
                                  AssemblyWorkspace& ws) {
  const int dim = prob.dim;
  const int nt = test.size(), nu = trial.size();
  LocalSystem sys;
  sys.a = Mat(nt, nu);
  sys.rhs.assign(nt, 0.0);

  double jac_vol = 1.0;
  for (int a = 0; a < dim; ++a) jac_vol *= 0.5 * prob.width[a];

  // volume terms
  const auto& tu = ws.table(trial, rule, -1);
  const auto& tv = ws.table(test, rule, -1);
  const int nq = static_cast<int>(rule.points.size());
  std::vector<double> adv_q(dim);
  for (int q = 0; q < nq; ++q) {
    const Point x = prob.to_physical(rule.points[q]);
    for (int a = 0; a < dim; ++a) adv_q[a] = prob.coeffs->adv[a](x);
    const double gam = prob.coeffs->gamma(x);
    const double wj = rule.weights[q] * jac_vol;
    for (int i = 0; i < nt; ++i) {
      double adv_dot_grad = 0.0;
      for (int a = 0; a < dim; ++a)
        adv_dot_grad += adv_q[a] * (2.0 / prob.width[a]) * tv.grad[a](q, i);
      const double mass_i = gam * tv.val(q, i);
      for (int j = 0; j < nu; ++j)
        sys.a(i, j) += wj * tu.val(q, j) * (mass_i - adv_dot_grad);
    }
    if (prob.coeffs->source && !prob.source_region) {
      const double f = prob.coeffs->source(x);
      if (f != 0.0)
        for (int i = 0; i < nt; ++i) sys.rhs[i] += wj * f * tv.val(q, i);
    }
  }

  // concentrated source on a sub-region, integrated by its own mapped rule
  if (prob.coeffs->source && prob.source_region) {
    const auto& reg = *prob.source_region;
    for (size_t q = 0; q < reg.points.size(); ++q) {
      const Point x = prob.to_physical(reg.points[q]);
      const double f = prob.coeffs->source(x);
      if (f == 0.0) continue;
      const double wj = reg.weights[q] * jac_vol;
      for (int i = 0; i < nt; ++i) sys.rhs[i] += wj * f * test.fn[i].eval(reg.points[q]);
    }
  }

  // face terms: outflow (+1) into the matrix, inflow (-1) into the rhs
  for (int axis = 0; axis < dim; ++axis) {
    const double jac_face = jac_vol / (0.5 * prob.width[axis]);
    const auto fr = AssemblyWorkspace::face_rule(rule, dim);

    const auto& fu = ws.table(trial, rule, 2 * axis + 1);
    const auto& fv = ws.table(test, rule, 2 * axis + 1);
    for (size_t q = 0; q < fu.points.size(); ++q) {
      const Point x = prob.to_physical(fu.points[q]);
      const double wj = fr->weights[q] * jac_face * prob.coeffs->adv[axis](x);
      for (int i = 0; i < nt; ++i) {
        const double vi = wj * fv.val(static_cast<int>(q), i);
        for (int j = 0; j < nu; ++j) sys.a(i, j) += vi * fu.val(static_cast<int>(q), j);
      }
    }

    if (prob.inflow[axis]) {
      const auto& gv = ws.table(test, rule, 2 * axis);
      for (size_t q = 0; q < gv.points.size(); ++q) {
        const Point x = prob.to_physical(gv.points[q]);
        const double g = prob.inflow[axis](x);
        if (g == 0.0) continue;
        const double wj = fr->weights[q] * jac_face * prob.coeffs->adv[axis](x) * g;
        for (int i = 0; i < nt; ++i) sys.rhs[i] += wj * gv.val(static_cast<int>(q), i);
      }
    }
  }
  return sys;
}

/// Dense direct solve of the assembled system, with residual report.
inline LuSolveResult solve_local(const Mat& a, const std::vector<double>& rhs) {
  return solve_dense(a, rhs);
}

/// Exact integrals of the basis over the physical cell (the "mass" vector
/// m_i = int_S phi_i used by cell averages and the special test function).
inline std::vector<double> basis_cell_integrals(const BasisSet& basis,
                                                const LocalProblem& prob) {
  double jac_vol = 1.0;
  for (int a = 0; a < prob.dim; ++a) jac_vol *= 0.5 * prob.width[a];
  std::vector<double> m(basis.size());
  for (int i = 0; i < basis.size(); ++i) m[i] = basis.fn[i].integrate_cell() * jac_vol;
  return m;
}

}  // namespace augdg
