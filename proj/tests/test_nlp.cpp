#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "augdg/nlp.hpp"

using namespace augdg;

namespace {

NlpProblem quadratic_objective(int n) {
  NlpProblem p;
  p.n_vars = n;
  p.objective = [n](const std::vector<double>& x, std::vector<double>* g) {
    double f = 0.0;
    if (g) g->assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      f += x[i] * x[i];
      if (g) (*g)[i] = 2.0 * x[i];
    }
    return f;
  };
  return p;
}

}  // namespace

TEST_CASE("minimize |d|^2 subject to d1 >= 1") {
  NlpProblem p = quadratic_objective(2);
  p.constraints = [](const std::vector<double>& x) { return std::vector<double>{x[0] - 1.0}; };
  auto r = minimize(p, {0.0, 0.0});
  CHECK(r.status != NlpStatus::InfeasibleMaxIter);
  CHECK(r.x[0] == Catch::Approx(1.0).margin(1e-6));
  CHECK(r.x[1] == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("minimize |d|^2 subject to d1 + d2 >= 2") {
  // KKT: 2d = lambda (1,1), d1 + d2 = 2 -> d = (1,1)
  NlpProblem p = quadratic_objective(2);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] + x[1] - 2.0};
  };
  auto r = minimize(p, {0.0, 0.0});
  CHECK(r.x[0] == Catch::Approx(1.0).margin(1e-6));
  CHECK(r.x[1] == Catch::Approx(1.0).margin(1e-6));
  SECTION("returned point re-checks as feasible") {
    const auto g = p.constraints(r.x);
    for (double v : g) CHECK(v >= -1e-10);
  }
}

TEST_CASE("contradictory constraints are reported infeasible") {
  NlpProblem p = quadratic_objective(1);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] - 1.0, -x[0] - 1.0};
  };
  SolverOptions o;
  o.max_iter = 25;
  auto r = minimize(p, {0.0}, o);
  CHECK(r.status == NlpStatus::InfeasibleMaxIter);
  CHECK(r.min_constraint < -0.5);
}

TEST_CASE("determinism: identical inputs give bitwise-identical results") {
  NlpProblem p = quadratic_objective(3);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] + 0.5 * x[1] - 1.0, x[2] + x[0] - 0.3};
  };
  auto r1 = minimize(p, {0.1, -0.2, 0.4});
  auto r2 = minimize(p, {0.1, -0.2, 0.4});
  CHECK(r1.x == r2.x);
}

TEST_CASE("NaN from an evaluator is reported with the offending point") {
  NlpProblem p = quadratic_objective(1);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] > 0.4 ? std::nan("") : x[0]};
  };
  CHECK_THROWS_WITH(minimize(p, {1.0}), Catch::Matchers::ContainsSubstring("non-finite"));
}

TEST_CASE("finite-difference Jacobians track analytic ones") {
  // g(x) = (sin x0 + x1^2, x0 x1); compare on random probes
  NlpProblem p = quadratic_objective(2);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{std::sin(x[0]) + x[1] * x[1], x[0] * x[1]};
  };
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 10; ++s) {
    const std::vector<double> x = {u(rng), u(rng)};
    const auto g0 = p.constraints(x);
    const Mat j = detail::fd_jacobian(p, x, g0, 1e-7);
    const double a[2][2] = {{std::cos(x[0]), 2 * x[1]}, {x[1], x[0]}};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const double scale = std::max(1.0, std::abs(a[r][c]));
        CHECK(std::abs(j(r, c) - a[r][c]) / scale < 1e-5);
      }
  }
}

TEST_CASE("stop_when_feasible returns early with a feasible point") {
  NlpProblem p = quadratic_objective(2);
  p.constraints = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] - 0.1, x[1] - 0.1};
  };
  SolverOptions o;
  o.stop_when_feasible = true;
  auto r = minimize(p, {1.0, 1.0}, o);  // already feasible
  CHECK(r.status == NlpStatus::Feasible);
  CHECK(r.min_constraint >= -o.feas_tol);
}
