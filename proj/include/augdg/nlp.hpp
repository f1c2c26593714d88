#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "augdg/linalg.hpp"

namespace augdg {

/// Smooth inequality-constrained problem: minimize f(d) subject to g(d) >= 0.
struct NlpProblem {
  int n_vars = 0;
  // Returns f(d); fills *grad (size n_vars) when grad != nullptr.
  std::function<double(const std::vector<double>&, std::vector<double>*)> objective;
  std::function<std::vector<double>(const std::vector<double>&)> constraints;
  // Optional analytic Jacobian, row j = grad g_j; finite differences otherwise.
  std::function<Mat(const std::vector<double>&)> constraint_jacobian;
};

struct SolverOptions {
  double feas_tol = 1e-10;
  double opt_tol = 1e-8;
  int max_iter = 500;       // outer (multiplier) iterations
  int inner_iter = 200;     // BFGS iterations per outer step
  double penalty0 = 10.0;
  double penalty_growth = 4.0;
  double fd_step = 1e-7;
  bool stop_when_feasible = false;
};

enum class NlpStatus { FeasibleOptimal, Feasible, InfeasibleMaxIter };

struct NlpResult {
  std::vector<double> x;
  NlpStatus status = NlpStatus::InfeasibleMaxIter;
  double objective = 0.0;
  double min_constraint = 0.0;
  int outer_iters = 0;
};

namespace detail {

inline void check_finite(const std::vector<double>& v, const std::vector<double>& x,
                         const char* what) {
  for (double a : v)
    if (!std::isfinite(a)) {
      std::ostringstream os;
      os << what << " returned a non-finite value at d = [";
      for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
      os << "]";
      throw std::runtime_error(os.str());
    }
}

inline Mat fd_jacobian(const NlpProblem& p, const std::vector<double>& x,
                       const std::vector<double>& g0, double step) {
  Mat j(static_cast<int>(g0.size()), p.n_vars);
  std::vector<double> xp = x;
  for (int c = 0; c < p.n_vars; ++c) {
    const double h = step * std::max(1.0, std::abs(x[c]));
    xp[c] = x[c] + h;
    const std::vector<double> gp = p.constraints(xp);
    xp[c] = x[c];
    for (size_t r = 0; r < g0.size(); ++r)
      j(static_cast<int>(r), c) = (gp[r] - g0[r]) / h;
  }
  return j;
}

}  // namespace detail

/// Augmented-Lagrangian (Powell-Hestenes-Rockafellar) outer loop with a BFGS
/// inner solve.  Returned feasible points satisfy min_j g_j(x) >= -feas_tol,
/// re-checked with a direct constraint evaluation.
inline NlpResult minimize(const NlpProblem& prob, std::vector<double> x0,
                          const SolverOptions& opts = {}) {
  const int n = prob.n_vars;
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("minimize: x0 has wrong length");

  std::vector<double> g0 = prob.constraints(x0);
  detail::check_finite(g0, x0, "constraint evaluator");
  const int m = static_cast<int>(g0.size());
  std::vector<double> lambda(m, 0.0);
  double mu = opts.penalty0;

  auto jac = [&](const std::vector<double>& x, const std::vector<double>& g) {
    return prob.constraint_jacobian ? prob.constraint_jacobian(x)
                                    : detail::fd_jacobian(prob, x, g, opts.fd_step);
  };

  // PHR merit: f + 1/(2 mu) sum_j (max(0, lambda_j - mu g_j)^2 - lambda_j^2)
  auto merit = [&](const std::vector<double>& x, std::vector<double>* grad,
                   std::vector<double>* g_out) {
    std::vector<double> fgrad;
    double val = prob.objective(x, grad ? &fgrad : nullptr);
    std::vector<double> g = prob.constraints(x);
    detail::check_finite(g, x, "constraint evaluator");
    if (grad) *grad = fgrad;
    Mat J;
    if (grad) J = jac(x, g);
    for (int j = 0; j < m; ++j) {
      const double t = std::max(0.0, lambda[j] - mu * g[j]);
      val += (t * t - lambda[j] * lambda[j]) / (2.0 * mu);
      if (grad && t > 0.0)
        for (int c = 0; c < n; ++c) (*grad)[c] -= t * J(j, c);
    }
    if (g_out) *g_out = std::move(g);
    return val;
  };

  std::vector<double> x = std::move(x0);
  double viol_prev = std::numeric_limits<double>::infinity();
  NlpResult res;
  bool inner_converged = false;

  for (int outer = 0; outer < opts.max_iter; ++outer) {
    res.outer_iters = outer + 1;

    // inner BFGS on the merit function
    Mat h_inv(n, n);
    for (int i = 0; i < n; ++i) h_inv(i, i) = 1.0;
    std::vector<double> grad(n), gvals;
    double fx = merit(x, &grad, &gvals);
    inner_converged = false;
    for (int it = 0; it < opts.inner_iter; ++it) {
      const double gnorm = inf_norm(grad);
      if (gnorm <= opts.opt_tol * std::max(1.0, std::abs(fx))) {
        inner_converged = true;
        break;
      }
      std::vector<double> dir(n, 0.0);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += h_inv(i, j) * grad[j];
        dir[i] = -s;
      }
      double slope = 0.0;
      for (int i = 0; i < n; ++i) slope += dir[i] * grad[i];
      if (slope >= 0.0) {  // reset to steepest descent
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) h_inv(i, j) = (i == j) ? 1.0 : 0.0;
        for (int i = 0; i < n; ++i) dir[i] = -grad[i];
        slope = -inf_norm(grad) * inf_norm(grad);
      }
      double step = 1.0;
      std::vector<double> xn(n), gn(n);
      double fn = fx;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        for (int i = 0; i < n; ++i) xn[i] = x[i] + step * dir[i];
        fn = merit(xn, nullptr, nullptr);
        if (fn <= fx + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      std::vector<double> grad_n(n), g_inner;
      fn = merit(xn, &grad_n, &g_inner);
      bool early_feasible = false;
      if (opts.stop_when_feasible) {
        early_feasible = true;
        for (double g : g_inner)
          if (g < -opts.feas_tol) {
            early_feasible = false;
            break;
          }
      }
      // BFGS inverse update
      std::vector<double> s(n), y(n);
      double sy = 0.0;
      for (int i = 0; i < n; ++i) {
        s[i] = xn[i] - x[i];
        y[i] = grad_n[i] - grad[i];
        sy += s[i] * y[i];
      }
      if (sy > 1e-12 * inf_norm(s) * inf_norm(y)) {
        std::vector<double> hy(n, 0.0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) hy[i] += h_inv(i, j) * y[j];
        double yhy = 0.0;
        for (int i = 0; i < n; ++i) yhy += y[i] * hy[i];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            h_inv(i, j) += ((sy + yhy) * s[i] * s[j]) / (sy * sy) -
                           (hy[i] * s[j] + s[i] * hy[j]) / sy;
      }
      x = xn;
      fx = fn;
      grad = grad_n;
      if (early_feasible) break;
    }

    gvals = prob.constraints(x);
    double min_g = std::numeric_limits<double>::infinity();
    double viol = 0.0;
    for (double g : gvals) {
      min_g = std::min(min_g, g);
      viol = std::max(viol, std::max(0.0, -g));
    }
    res.min_constraint = min_g;

    const bool feasible = min_g >= -opts.feas_tol;
    if (feasible && opts.stop_when_feasible) {
      res.x = x;
      res.status = NlpStatus::Feasible;
      res.objective = prob.objective(x, nullptr);
      return res;
    }
    // multiplier convergence: feasible and complementarity settled
    double lambda_change = 0.0;
    for (int j = 0; j < m; ++j) {
      const double ln = std::max(0.0, lambda[j] - mu * gvals[j]);
      lambda_change = std::max(lambda_change, std::abs(ln - lambda[j]));
      lambda[j] = ln;
    }
    if (feasible && inner_converged &&
        lambda_change <= 1e-6 * std::max(1.0, inf_norm(lambda))) {
      res.x = x;
      res.status = NlpStatus::FeasibleOptimal;
      res.objective = prob.objective(x, nullptr);
      return res;
    }
    if (viol > 0.25 * viol_prev) mu = std::min(mu * opts.penalty_growth, 1e12);
    viol_prev = std::max(viol, 1e-300);
  }

  res.x = x;
  res.objective = prob.objective(x, nullptr);
  res.status = res.min_constraint >= -opts.feas_tol ? NlpStatus::Feasible
                                                    : NlpStatus::InfeasibleMaxIter;
  return res;
}

}  // namespace augdg
