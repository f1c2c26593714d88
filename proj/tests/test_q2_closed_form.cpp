#include <catch2/catch_amalgamated.hpp>

#include "augdg/q2_closed_form.hpp"

using namespace augdg;

TEST_CASE("closed-form coefficients at B = 0") {
  const auto qc = q2_coefficients(0.0, 1.0);
  CHECK(qc.lambda == Catch::Approx(2350.0));
  CHECK(q2_pi(1, 0.0) == Catch::Approx(2350.0));
  CHECK(qc.c[0] == Catch::Approx(1.0));   // c1 = dx * p1 / ((B+1) Lambda) = dx
  CHECK(qc.c[9] == Catch::Approx(0.0));   // p10(0) = 0
  for (int i = 1; i <= 10; ++i) CHECK(q2_pi(i, 0.0) >= 0.0);
  SECTION("c scales linearly with dx") {
    const auto qc2 = q2_coefficients(0.3, 0.25);
    const auto qc1 = q2_coefficients(0.3, 1.0);
    for (int i = 0; i < 10; ++i) CHECK(qc2.c[i] == Catch::Approx(0.25 * qc1.c[i]));
  }
}

TEST_CASE("printed sign structure") {
  CHECK(q2_pi(8, 0.5) <= 0.0);  // c8 is the one non-positive coefficient
  CHECK(q2_pi(3, 0.25) >= 0.0);
  CHECK(q2_pi(7, 0.25) >= 0.0);
  CHECK(q2_pi(10, 0.25) >= 0.0);
}

TEST_CASE("sign bounds hold on a dense sweep of the regime") {
  const auto rep = verify_sign_bounds(10000);
  INFO(rep.message);
  CHECK(rep.ok);
}

TEST_CASE("outside the regime violations are permitted") {
  // the sweep over (0.5, 0.6] may flag violations; it must simply report
  const auto rep = verify_sign_bounds(500, 0.501, 0.6);
  if (!rep.ok) CHECK(rep.first_violation_b > 0.5);
}

TEST_CASE("Lambda stays positive well beyond the regime") {
  for (int i = 0; i <= 1000; ++i) {
    const double b = 10.0 * i / 1000.0;
    CHECK(q2cf::horner(q2cf::kLambda, b) > 0.0);
  }
}

TEST_CASE("cross validation against the solved test function") {
  for (double b : {0.1, 0.3, 0.5}) {
    const auto cv = q2_cross_validate(b, 0.1);
    CHECK(cv.max_deviation <= 1e-8 * cv.v_inf_norm);
    CHECK(cv.form_residual <= 1e-8);
  }
  SECTION("near-degenerate B through the 1e-8 proxy") {
    const auto cv = q2_cross_validate(1e-8, 0.1);
    CHECK(cv.max_deviation <= 1e-6 * std::max(cv.v_inf_norm, 1.0));
  }
}

TEST_CASE("closed-form v is non-negative on the cell for sampled B") {
  auto bern = build_basis({SpaceFamily::Q, 2, 2, true});
  auto aug = make_augmented_space(*bern, explicit_psi(SpaceFamily::Q, 2, Regime::LowB));
  for (int i = 0; i < 50; ++i) {
    const double b = 0.5 * i / 49.0;
    const auto qc = q2_coefficients(b, 1.0);
    std::vector<double> coef(qc.c.begin(), qc.c.end());
    CHECK(min_on_reference_grid(*aug, coef, 101) >= -1e-10);
  }
}
