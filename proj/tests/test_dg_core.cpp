#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "augdg/augment.hpp"
#include "augdg/field.hpp"
#include "augdg/sweep.hpp"
#include "augdg/test_function.hpp"

using namespace augdg;

TEST_CASE("solve_local") {
  SECTION("identity system returns the rhs") {
    Mat a(4, 4);
    for (int i = 0; i < 4; ++i) a(i, i) = 1.0;
    const std::vector<double> b = {1, -2, 3, 0.5};
    auto r = solve_local(a, b);
    for (int i = 0; i < 4; ++i) CHECK(r.x[i] == Catch::Approx(b[i]));
    CHECK(r.residual_inf < 1e-14);
  }
  SECTION("well-conditioned random system has a tiny residual") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(10, 10);
    std::vector<double> b(10);
    for (int i = 0; i < 10; ++i) {
      b[i] = u(rng);
      for (int j = 0; j < 10; ++j) a(i, j) = u(rng) + (i == j ? 10.0 : 0.0);
    }
    CHECK(solve_local(a, b).residual_inf < 1e-12);
  }
  SECTION("rank-deficient system is reported singular") {
    Mat a(3, 3);
    a(0, 0) = 1;
    a(1, 0) = 2;  // rows 1,2 multiples of row 0
    a(2, 0) = 3;
    CHECK_THROWS_WITH(solve_local(a, {1, 2, 3}), Catch::Matchers::ContainsSubstring("singular"));
  }
}

namespace {

struct CellSetup {
  CartesianMesh mesh;
  PdeCoefficients pc;
  std::array<ScalarFn, 3> inflow;
};

CellSetup constant_setup(int dim, double c, double a0, double a1, double a2 = 1.0) {
  CellSetup s;
  s.mesh = dim == 2 ? CartesianMesh::uniform(2, {0, 0, 0}, {0.7, 1.3, 0}, {3, 2, 1})
                    : CartesianMesh::uniform(3, {0, 0, 0}, {0.7, 1.3, 0.4}, {2, 2, 2});
  s.pc.adv[0] = Coef(a0);
  s.pc.adv[1] = Coef(a1);
  s.pc.adv[2] = Coef(a2);
  ScalarFn cf = [c](const Point&) { return c; };
  s.inflow = {cf, cf, dim == 3 ? cf : ScalarFn{}};
  return s;
}

}  // namespace

TEST_CASE("constant solutions are reproduced exactly") {
  for (int dim : {2, 3}) {
    auto s = constant_setup(dim, 0.37, 2.0, 0.5);
    for (auto spec : {SpaceSpec{SpaceFamily::Q, 2, dim}, SpaceSpec{SpaceFamily::P, 1, dim}}) {
      auto base = build_basis(spec);
      auto res = sweep_solve(s.mesh, s.pc, s.inflow, base, {});
      for (int cell = 0; cell < s.mesh.cells(); ++cell) {
        CHECK(cell_average(res.field, cell).value == Catch::Approx(0.37).epsilon(1e-10));
        // coefficients match the constant's representation: first monomial
        CHECK(res.field.coef[cell][0] == Catch::Approx(0.37).epsilon(1e-10));
        for (size_t i = 1; i < res.field.coef[cell].size(); ++i)
          CHECK(std::abs(res.field.coef[cell][i]) < 1e-10);
      }
    }
  }
}

TEST_CASE("single cell with zero data stays zero") {
  auto mesh = CartesianMesh::uniform(3, {0, 0, 0}, {1, 1, 1}, {1, 1, 1});
  PdeCoefficients pc;
  auto base = build_basis({SpaceFamily::Q, 2, 3});
  auto res = sweep_solve(mesh, pc, {}, base, {});
  for (double c : res.field.coef[0]) CHECK(std::abs(c) < 1e-14);
}

TEST_CASE("polynomial exact solutions are captured by the space") {
  // u = (x + t)^2 lies in Q2; upwind DG with exact quadrature reproduces it
  ScalarFn uex = [](const Point& p) { return (p[0] + p[1]) * (p[0] + p[1]); };
  ScalarFn src = [](const Point& p) { return 2.0 * (p[0] + p[1]) * (1.0 + 1.0); };
  auto mesh = CartesianMesh::uniform(2, {0, 0, 0}, {1, 1, 0}, {3, 3, 1});
  PdeCoefficients pc;
  pc.source = src;
  auto base = build_basis({SpaceFamily::Q, 2, 2});
  auto res = sweep_solve(mesh, pc, {uex, uex, {}}, base, {});
  CHECK(l2_error(res.field, uex) < 1e-12);
}

TEST_CASE("upwind locality: downstream data never affects upstream cells") {
  ScalarFn inflow = [](const Point& p) { return 1.0 + 0.3 * p[0] * p[0] + 0.1 * p[1]; };
  auto mesh = CartesianMesh::uniform(2, {0, 0, 0}, {1, 1, 0}, {4, 4, 1});
  PdeCoefficients pc;
  pc.adv[0] = Coef(1.0);
  pc.adv[1] = Coef(2.0);
  pc.source = [](const Point&) { return 0.5; };
  PdeCoefficients pc2 = pc;
  pc2.source = [](const Point& p) {
    return 0.5 + ((p[0] > 0.5 && p[1] > 0.5) ? 10.0 * p[0] : 0.0);  // downstream bump
  };
  auto base = build_basis({SpaceFamily::P, 2, 2});
  auto r1 = sweep_solve(mesh, pc, {inflow, inflow, {}}, base, {});
  auto r2 = sweep_solve(mesh, pc2, {inflow, inflow, {}}, base, {});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int cell = mesh.flat_index({i, j, 0});
      CHECK(r1.field.coef[cell] == r2.field.coef[cell]);  // bitwise
    }
}

TEST_CASE("orders of accuracy sit in the expected window") {
  // smooth manufactured solution, halved meshes, observed order in [k+0.5, k+1.5]
  ScalarFn uex = [](const Point& p) {
    const double c = std::cos(p[1] - p[0]);
    return c * c + 1e-14;
  };
  PdeCoefficients pc;
  pc.gamma = Coef(1.0);
  pc.source = uex;
  for (auto spec : {SpaceSpec{SpaceFamily::Q, 2, 2}, SpaceSpec{SpaceFamily::S, 2, 2},
                    SpaceSpec{SpaceFamily::P, 1, 2}}) {
    auto base = build_basis(spec);
    double prev = 0.0;
    std::vector<double> errs;
    for (int n : {10, 20}) {
      auto mesh = CartesianMesh::uniform(2, {0, 0, 0}, {0.1, 2 * M_PI, 0}, {n, n, 1});
      auto res = sweep_solve(mesh, pc, {uex, uex, {}}, base, {});
      errs.push_back(l2_error(res.field, uex, spec.k + 3));
      (void)prev;
    }
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order > spec.k + 0.5);
    CHECK(order < spec.k + 1.5);
  }
}

TEST_CASE("variable-coefficient divergence-free field preserves constants") {
  // alpha = e^{-x-y}, beta = C - e^{-x-y} gives alpha_x + beta_y = 0
  PdeCoefficients pc;
  pc.adv[0] = Coef(ScalarFn([](const Point& p) { return std::exp(-p[0] - p[1]); }));
  pc.adv[1] = Coef(ScalarFn([](const Point& p) { return 9.0 - std::exp(-p[0] - p[1]); }));
  ScalarFn one = [](const Point&) { return 1.0; };
  auto mesh = CartesianMesh::uniform(2, {0, 0, 0}, {1, 1, 0}, {2, 2, 1});
  auto base = build_basis({SpaceFamily::Q, 2, 2});
  SweepOptions so;
  so.quad_points = 16;  // entire-function coefficients: declared approximation
  auto res = sweep_solve(mesh, pc, {one, one, {}}, base, so);
  ScalarFn exact_one = one;
  CHECK(l2_error(res.field, exact_one) < 1e-9);
}

TEST_CASE("the unaugmented Q2 test function dips negative at B = 0.1") {
  // single cell, alpha = 1, beta = 1/10, gamma = 0, dx = dy = 0.1
  PdeCoefficients pc;
  pc.adv[0] = Coef(1.0);
  pc.adv[1] = Coef(0.1);
  LocalProblem prob;
  prob.dim = 2;
  prob.width = {0.1, 0.1, 1};
  prob.coeffs = &pc;
  AssemblyWorkspace ws;
  auto base = build_basis({SpaceFamily::Q, 2, 2});
  auto cert = special_test_function(*base, prob, *gauss_legendre(3, 2), ws);
  // the dip sits near the cell boundary, outside the interior Gauss points
  CHECK(min_on_reference_grid(*base, cert.v_coef, 201) < 0.0);

  // with the published low-B augmentation the certificate holds
  auto aug = make_augmented_space(*base, explicit_psi(SpaceFamily::Q, 2, Regime::LowB));
  auto cert2 = special_test_function(*aug, prob, *gauss_legendre(9, 2), ws);
  CHECK(cert2.min_v >= -1e-12);
}

TEST_CASE("cell averages and the positivity mechanism") {
  SECTION("constant field average") {
    auto s = constant_setup(2, 2.5, 1.0, 1.0);
    auto base = build_basis({SpaceFamily::S, 2, 2});
    auto res = sweep_solve(s.mesh, s.pc, s.inflow, base, {});
    CHECK(cell_average(res.field, 3).value == Catch::Approx(2.5).epsilon(1e-12));
  }
  SECTION("certified space, non-negative data, non-negative average") {
    // f >= 0 concentrated near the outflow corner; inflow zero
    PdeCoefficients pc;
    pc.adv[0] = Coef(1.0);
    pc.adv[1] = Coef(0.25);
    pc.source = [](const Point& p) {
      return std::pow(p[0], 6) * std::pow(0.1 - p[1], 6) * 1e9;
    };
    auto mesh = CartesianMesh::uniform(2, {0, 0, 0}, {0.1, 0.1, 0}, {1, 1, 1});
    auto base = build_basis({SpaceFamily::Q, 2, 2});
    SweepOptions so;
    so.augment = AugmentApply::All;
    so.augmented_space =
        make_augmented_space(*base, explicit_psi(SpaceFamily::Q, 2, Regime::LowB));
    auto res = sweep_solve(mesh, pc, {}, base, so);
    CHECK(cell_average(res.field, 0).value >= -1e-12);
  }
}

TEST_CASE("field evaluation utilities") {
  auto s = constant_setup(2, 1.0, 1.0, 1.0);
  auto base = build_basis({SpaceFamily::P, 1, 2});
  auto res = sweep_solve(s.mesh, s.pc, s.inflow, base, {});
  CHECK(res.field.eval_phys({0.35, 0.65, 0}) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(min_point_value(res.field, *gauss_lobatto(2, 2)) == Catch::Approx(1.0).epsilon(1e-12));
}
