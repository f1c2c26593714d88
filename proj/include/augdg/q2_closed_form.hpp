#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "augdg/augment.hpp"
#include "augdg/test_function.hpp"

namespace augdg {

/// Closed-form coefficients of the special test function for the augmented
/// Q2 space at gamma = 0, B = dx beta / (dy alpha):
///   v = sum_i c_i phi_i (tensor Bernstein) + c_10 psi_{1,Q2}.
/// The numerator polynomials p_i are transcribed as integer coefficient
/// arrays (descending powers of B) and evaluated by Horner's rule.
namespace q2cf {

inline constexpr std::array<std::array<double, 8>, 9> kNumerators = {{
    {2020, 5718, 28920, 29148, 60834, 42181, 9265, 2350},    // p1
    {1510, 4364, 11517, 12607, 30325, 42821, 23365, 2350},   // p2
    {0, -190, 1944, -2174, -9774, -5889, 2215, 2350},        // p3
    {2020, 20838, 37248, 38336, 29439, 2828, -955, 1175},    // p4
    {1110, 5434, 22499, 53315, 46611, 26933, 9545, 1175},    // p5
    {0, 400, -3180, -2241, 7958, 6013, -955, 1175},          // p6
    {2020, 658, -7744, -8846, -4256, 1595, 3675, 0},         // p7
    {960, 5004, 5566, -5072, -5728, 815, -1575, 0},          // p8
    {0, -110, 1556, 3632, 1640, 835, 3675, 0},               // p9 = B * (...)
}};
inline constexpr std::array<double, 6> kP10Inner = {50, -70, 639, 317, 95, -525};
inline constexpr std::array<double, 8> kLambda = {2020, 8228, 14544, 19129,
                                                  22737, 19926, 10440, 2350};

template <size_t N>
double horner(const std::array<double, N>& c, double b) {
  double v = 0.0;
  for (double ci : c) v = v * b + ci;
  return v;
}

inline double p(int i, double b) {
  if (i >= 1 && i <= 9) return horner(kNumerators[i - 1], b);
  if (i == 10) return -121275.0 * b * horner(kP10Inner, b);
  throw std::out_of_range("p index");
}

}  // namespace q2cf

struct Q2Coefficients {
  std::array<double, 10> c;
  double lambda = 0.0;
  double b = 0.0;
  double dx = 0.0;
};

inline double q2_pi(int i, double b) { return q2cf::p(i, b); }

inline Q2Coefficients q2_coefficients(double b, double dx) {
  Q2Coefficients out;
  out.b = b;
  out.dx = dx;
  out.lambda = q2cf::horner(q2cf::kLambda, b);
  for (int i = 1; i <= 9; ++i) out.c[i - 1] = dx * q2_pi(i, b) / ((b + 1.0) * out.lambda);
  out.c[9] = dx * q2_pi(10, b) / (4.0 * out.lambda);
  return out;
}

/// v = sum c_i phi_i + c_10 psi_{1,Q2} as an evaluable polynomial.
inline Poly q2_closed_form_v(double b, double dx) {
  const Q2Coefficients qc = q2_coefficients(b, dx);
  const auto bern = build_basis(SpaceSpec{SpaceFamily::Q, 2, 2, /*bernstein=*/true});
  Poly v = Poly::constant(2, 0.0);
  for (int i = 0; i < 9; ++i) v = v + bern->fn[i].scaled(qc.c[i]);
  v = v + explicit_psi(SpaceFamily::Q, 2, Regime::LowB).scaled(qc.c[9]);
  return v;
}

struct SignBoundReport {
  bool ok = true;
  int samples = 0;
  double first_violation_b = 0.0;
  std::string message;
  std::vector<std::array<double, 13>> rows;  // B, p1..p10, Lambda, min v (filled on demand)
};

/// Dense sampling of the sign structure behind the Appendix-A positivity
/// argument on B in [b_lo, b_hi]: p_i >= 0 for i != 8 (via the displayed
/// lower bounds for p4, p6, p9), p8 <= 0, and the concave quadratic
/// w(eta) = c9 (1+eta)^2/4 + c8 (1+eta)(1-eta)/2 with w'' >= 0, w(+-1) >= 0.
inline SignBoundReport verify_sign_bounds(int n_samples, double b_lo = 0.0,
                                          double b_hi = 0.5) {
  SignBoundReport rep;
  rep.samples = n_samples;
  auto fail = [&](double b, const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.first_violation_b = b;
      rep.message = msg;
    }
  };
  for (int s = 0; s < n_samples; ++s) {
    const double b = b_lo + (b_hi - b_lo) * (n_samples == 1 ? 0.0 : double(s) / (n_samples - 1));
    const double p1 = q2_pi(1, b), p2 = q2_pi(2, b), p3 = q2_pi(3, b), p4 = q2_pi(4, b);
    const double p5 = q2_pi(5, b), p6 = q2_pi(6, b), p7 = q2_pi(7, b), p8 = q2_pi(8, b);
    const double p9 = q2_pi(9, b), p10 = q2_pi(10, b);
    if (p1 < 0) fail(b, "p1 < 0");
    if (p2 < 0) fail(b, "p2 < 0");
    if (p5 < 0) fail(b, "p5 < 0");
    const double p4_bound = -955.0 * b + 1175.0;
    if (p4 < p4_bound || p4_bound < 0) fail(b, "p4 bound violated");
    const double p6_bound = -3180.0 * std::pow(b, 5) - 2241.0 * std::pow(b, 4) - 955.0 * b + 1175.0;
    if (p6 < p6_bound || p6_bound < 0) fail(b, "p6 bound violated");
    const double p9_bound = b * (3675.0 - 110.0 * std::pow(b, 5));
    if (p9 < p9_bound || p9_bound < 0) fail(b, "p9 bound violated");
    if (p3 < 0) fail(b, "p3 < 0");
    if (p7 < 0) fail(b, "p7 < 0");
    if (p10 < 0) fail(b, "p10 < 0");
    if (p8 > 0) fail(b, "p8 > 0");
    const Q2Coefficients qc = q2_coefficients(b, 1.0);
    const double c8 = qc.c[7], c9 = qc.c[8];
    if (c9 / 2.0 - c8 < 0) fail(b, "w not concave-up: c9/2 - c8 < 0");
    if (c9 < 0) fail(b, "w(1) = c9 < 0");
  }
  return rep;
}

struct CrossValidation {
  double max_deviation = 0.0;
  double v_inf_norm = 0.0;
  double form_residual = 0.0;  // max |L(u, v_cf) - int u| over the ten basis funcs
};

/// Reconstruct v from the printed coefficients and compare with the v solved
/// numerically from the local system under alpha = 1, beta = B (dx = dy),
/// gamma = 0, at `n_points` random reference points.
inline CrossValidation q2_cross_validate(double b, double dx, int n_points = 1000,
                                         uint64_t seed = 7u) {
  const Poly v_cf = q2_closed_form_v(b, dx);

  PdeCoefficients coefs;
  coefs.adv[0] = Coef(1.0);
  coefs.adv[1] = Coef(b);
  coefs.gamma = Coef(0.0);
  LocalProblem prob;
  prob.dim = 2;
  prob.width = {dx, dx, 1.0};
  prob.coeffs = &coefs;

  const auto bern = build_basis(SpaceSpec{SpaceFamily::Q, 2, 2, /*bernstein=*/true});
  const auto aug = make_augmented_space(*bern, explicit_psi(SpaceFamily::Q, 2, Regime::LowB));
  AssemblyWorkspace ws;
  const auto rule = gauss_legendre(required_points_for(aug->max_axis_degree), 2);
  const auto cert = special_test_function(*aug, prob, *rule, ws);

  CrossValidation cv;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < n_points; ++s) {
    const Point p = {u(rng), u(rng), 0.0};
    double vn = 0.0;
    for (int i = 0; i < aug->size(); ++i) vn += cert.v_coef[i] * aug->fn[i].eval(p);
    const double vc = v_cf.eval(p);
    cv.max_deviation = std::max(cv.max_deviation, std::abs(vn - vc));
    cv.v_inf_norm = std::max(cv.v_inf_norm, std::abs(vc));
  }

  // direct residual of the defining relation with the closed-form v
  const LocalSystem sys = assemble_local(prob, *aug, *aug, *rule, ws);
  const std::vector<double> m = basis_cell_integrals(*aug, prob);
  const Q2Coefficients qc = q2_coefficients(b, dx);
  std::vector<double> vcoef(qc.c.begin(), qc.c.end());
  const auto lv = sys.a.transposed().multiply(vcoef);
  for (int i = 0; i < aug->size(); ++i)
    cv.form_residual = std::max(cv.form_residual, std::abs(lv[i] - m[i]));
  return cv;
}

}  // namespace augdg
