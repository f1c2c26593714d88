#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "augdg/polynomial.hpp"
#include "augdg/spaces.hpp"

namespace augdg {

enum class Regime { LowB, HighB };

inline const char* regime_name(Regime r) { return r == Regime::LowB ? "low_B" : "high_B"; }

/// CFL threshold of the published augmented basis functions: the low_B entry
/// certifies B <= threshold, the high_B entry B >= 1/threshold... thresholds
/// are (1/2,2), (1/4,4), (1/8,8) for Q2..Q4 and (1/2,2), (1/8,8), (1/16,16)
/// for S2..S4.
inline double regime_threshold(SpaceFamily family, int k, Regime regime) {
  double low = 0.0;
  if (family == SpaceFamily::Q) {
    if (k == 2) low = 0.5;
    else if (k == 3) low = 0.25;
    else if (k == 4) low = 0.125;
  } else if (family == SpaceFamily::S) {
    if (k == 2) low = 0.5;
    else if (k == 3) low = 0.125;
    else if (k == 4) low = 0.0625;
  }
  if (low == 0.0)
    throw std::invalid_argument("no published augmented basis for this family/degree");
  return regime == Regime::LowB ? low : 1.0 / low;
}

inline bool regime_admits(SpaceFamily family, int k, Regime regime, double cfl_b) {
  const double thr = regime_threshold(family, k, regime);
  return regime == Regime::LowB ? cfl_b <= thr : cfl_b >= thr;
}

namespace detail {

inline Poly lin(int axis, double root) { return Poly::affine(2, axis, 1.0, -root); }

inline Poly psi_q2(Regime regime) {
  const Poly xi = Poly::monomial(2, {1, 0, 0});
  const Poly eta = Poly::monomial(2, {0, 1, 0});
  if (regime == Regime::LowB) {
    // (xi eta^2 (1-xi)^2 (xi+1) (1-eta^2) / 8)^2
    Poly one_m_xi = Poly::affine(2, 0, -1.0, 1.0);
    Poly base = xi * eta * eta * one_m_xi * one_m_xi * lin(0, -1.0) *
                (Poly::constant(2, 1.0) + (eta * eta).scaled(-1.0));
    return base.scaled(1.0 / 8.0).squared();
  }
  Poly one_m_eta = Poly::affine(2, 1, -1.0, 1.0);
  Poly base = eta * xi * xi * one_m_eta * one_m_eta * lin(1, -1.0) *
              (Poly::constant(2, 1.0) + (xi * xi).scaled(-1.0));
  return base.scaled(1.0 / 8.0).squared();
}

inline Poly psi_q3(Regime regime) {
  const double c = std::sqrt(5.0) / 5.0;
  Poly r1 = lin(0, c) * lin(1, c) * lin(1, -c) * lin(0, 1.0) * lin(0, -1.0) * lin(1, 1.0);
  Poly r2 = lin(0, -c) * lin(1, c) * lin(1, -c) * lin(0, 1.0) * lin(0, -1.0) * lin(1, -1.0);
  Poly r3 = lin(0, c) * lin(0, -c) * lin(1, c) * lin(0, 1.0) * lin(1, 1.0) * lin(1, -1.0);
  Poly r4 = lin(0, c) * lin(0, -c) * lin(1, -c) * lin(0, -1.0) * lin(1, 1.0) * lin(1, -1.0);
  const double scale = 3125.0 / 4096.0;  // (25 sqrt5)^2 / 8^4
  if (regime == Regime::LowB) return (r1 * r2).scaled(scale).squared();
  return (r3 * r4).scaled(scale).squared();
}

inline Poly psi_q4(Regime regime) {
  const double c = std::sqrt(21.0) / 7.0;
  const Poly xi = Poly::monomial(2, {1, 0, 0});
  const Poly eta = Poly::monomial(2, {0, 1, 0});
  Poly w1 = xi * lin(0, 1.0) * lin(0, c) * lin(0, -c);
  Poly w2 = eta * lin(1, 1.0) * lin(1, c) * lin(1, -c);
  Poly w3, w4;
  if (regime == Regime::LowB) {
    w3 = xi * lin(0, 1.0) * lin(0, -1.0) * lin(0, c);
    w4 = eta * lin(1, -1.0) * lin(1, c) * lin(1, -c);
  } else {
    w3 = xi * lin(0, -1.0) * lin(0, c) * lin(0, -c);
    w4 = eta * lin(1, 1.0) * lin(1, -1.0) * lin(1, c);
  }
  Poly r1 = (w1 * w2).scaled(49.0 / 64.0);
  Poly r2 = (w3 * w4).scaled(-343.0 / 192.0);
  return (r1 * r2).squared();
}

inline Poly psi_s2(Regime regime) {
  const Poly xi = Poly::monomial(2, {1, 0, 0});
  const Poly eta = Poly::monomial(2, {0, 1, 0});
  if (regime == Regime::LowB) {
    Poly base = xi * eta * eta * lin(0, 1.0) * lin(0, 1.0) * lin(1, 1.0) * lin(0, -1.0) *
                lin(1, -1.0);
    return base.scaled(1.0 / 8.0).squared();
  }
  Poly base = xi * xi * eta * lin(0, 1.0) * lin(1, 1.0) * lin(1, 1.0) * lin(0, -1.0) *
              lin(1, -1.0);
  return base.scaled(1.0 / 2.0).squared();
}

inline Poly psi_s3(Regime regime) {
  const double c = std::sqrt(5.0) / 5.0;
  const double scale = 3125.0 / 4096.0;  // 5^5 / 64^2
  if (regime == Regime::LowB) {
    Poly r1 = lin(0, c) * lin(1, c) * lin(1, c) * lin(0, 1.0) * lin(0, 1.0) * lin(0, -1.0) *
              lin(0, -1.0) * lin(1, 1.0) * lin(1, -1.0) * lin(1, -1.0);
    Poly r2 = (lin(0, -c) * lin(1, -c)).scaled(std::sqrt(5.0));
    return (r1 * r2).scaled(scale).squared();
  }
  Poly r3 = lin(0, c) * lin(0, c) * lin(1, c) * lin(0, 1.0) * lin(0, -1.0) * lin(0, -1.0) *
            lin(1, 1.0) * lin(1, 1.0) * lin(1, -1.0) * lin(1, -1.0);
  Poly r4 = (lin(0, -c) * lin(1, -c)).scaled(std::sqrt(5.0));
  return (r3 * r4).scaled(scale).squared();
}

inline Poly psi_s4(Regime regime) {
  const double c = std::sqrt(21.0) / 7.0;
  const Poly xi = Poly::monomial(2, {1, 0, 0});
  const Poly eta = Poly::monomial(2, {0, 1, 0});
  if (regime == Regime::LowB) {
    Poly r1 = xi * xi * eta * eta * lin(0, 1.0) * lin(0, 1.0) * lin(1, 1.0) * lin(0, c) *
              lin(0, -c) * lin(0, -c);
    Poly r2 = lin(0, -1.0) * lin(1, -1.0) * lin(1, c) * lin(1, c) * lin(1, -c) * lin(1, -c);
    return (r1 * r2).scaled((343.0 / 192.0) * (49.0 / 64.0)).squared();
  }
  Poly r3 = xi * xi * eta * lin(0, 1.0) * lin(0, -1.0) * lin(0, -1.0) * lin(1, 1.0) *
            lin(1, 1.0) * lin(0, c) * lin(0, c);
  Poly r4 = lin(1, -1.0) * lin(0, -c) * lin(1, c) * lin(1, c) * lin(1, -c) * lin(1, -c);
  return (r3 * r4).scaled((343.0 / 192.0) * (49.0 / 24.0)).squared();
}

}  // namespace detail

/// The published augmented basis function for (family, k, regime), as an
/// evaluable polynomial on the reference square.  Each one is a perfect
/// square.  Supported: Q2..Q4 and S2..S4, two-dimensional.
inline Poly explicit_psi(SpaceFamily family, int k, Regime regime) {
  if (family == SpaceFamily::Q) {
    if (k == 2) return detail::psi_q2(regime);
    if (k == 3) return detail::psi_q3(regime);
    if (k == 4) return detail::psi_q4(regime);
  } else if (family == SpaceFamily::S) {
    if (k == 2) return detail::psi_s2(regime);
    if (k == 3) return detail::psi_s3(regime);
    if (k == 4) return detail::psi_s4(regime);
  }
  throw std::invalid_argument("explicit_psi: unsupported family/degree");
}

}  // namespace augdg
