#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace augdg {

using Point = std::array<double, 3>;  // trailing coordinates unused below dim

/// Polynomial on the reference cell [-1,1]^dim, stored as a dense tensor of
/// monomial coefficients.  Coefficient of xi^e0 * eta^e1 * tau^e2 lives at
/// index (e0*ext1 + e1)*ext2 + e2.
class Poly {
 public:
  Poly() : dim_(1), ext_{1, 1, 1}, c_(1, 0.0) {}

  Poly(int dim, std::array<int, 3> ext) : dim_(dim), ext_(ext) {
    for (int a = dim; a < 3; ++a) ext_[a] = 1;
    c_.assign(static_cast<size_t>(ext_[0]) * ext_[1] * ext_[2], 0.0);
  }

  static Poly constant(int dim, double value) {
    Poly p(dim, {1, 1, 1});
    p.c_[0] = value;
    return p;
  }

  /// Monomial with the given exponent tuple.
  static Poly monomial(int dim, std::array<int, 3> e, double coef = 1.0) {
    std::array<int, 3> ext = {e[0] + 1, e[1] + 1, e[2] + 1};
    Poly p(dim, ext);
    p.at(e[0], e[1], e[2]) = coef;
    return p;
  }

  /// Degree-1 polynomial c0 + c1 * x_axis, handy for building factored forms.
  static Poly affine(int dim, int axis, double c1, double c0) {
    std::array<int, 3> ext = {1, 1, 1};
    ext[axis] = 2;
    Poly p(dim, ext);
    p.c_[0] = c0;
    std::array<int, 3> e = {0, 0, 0};
    e[axis] = 1;
    p.at(e[0], e[1], e[2]) = c1;
    return p;
  }

  int dim() const { return dim_; }
  const std::array<int, 3>& extents() const { return ext_; }
  int degree(int axis) const { return ext_[axis] - 1; }
  int max_axis_degree() const {
    int d = 0;
    for (int a = 0; a < dim_; ++a) d = std::max(d, degree(a));
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (int i0 = 0; i0 < ext_[0]; ++i0)
      for (int i1 = 0; i1 < ext_[1]; ++i1)
        for (int i2 = 0; i2 < ext_[2]; ++i2)
          if (at(i0, i1, i2) != 0.0) d = std::max(d, i0 + i1 + i2);
    return d;
  }

  double& at(int e0, int e1, int e2) {
    return c_[(static_cast<size_t>(e0) * ext_[1] + e1) * ext_[2] + e2];
  }
  double at(int e0, int e1, int e2) const {
    return c_[(static_cast<size_t>(e0) * ext_[1] + e1) * ext_[2] + e2];
  }
  const std::vector<double>& coeffs() const { return c_; }

  double eval(const Point& p) const {
    // Horner along each axis, innermost axis last.
    double v0 = 0.0;
    for (int i0 = ext_[0] - 1; i0 >= 0; --i0) {
      double v1 = 0.0;
      for (int i1 = ext_[1] - 1; i1 >= 0; --i1) {
        double v2 = 0.0;
        for (int i2 = ext_[2] - 1; i2 >= 0; --i2) v2 = v2 * p[2] + at(i0, i1, i2);
        v1 = v1 * p[1] + v2;
      }
      v0 = v0 * p[0] + v1;
    }
    return v0;
  }

  Poly derivative(int axis) const {
    if (degree(axis) == 0) return Poly::constant(dim_, 0.0);
    std::array<int, 3> ext = ext_;
    ext[axis] -= 1;
    Poly d(dim_, ext);
    for (int i0 = 0; i0 < ext[0]; ++i0)
      for (int i1 = 0; i1 < ext[1]; ++i1)
        for (int i2 = 0; i2 < ext[2]; ++i2) {
          std::array<int, 3> src = {i0, i1, i2};
          src[axis] += 1;
          d.at(i0, i1, i2) = src[axis] * at(src[0], src[1], src[2]);
        }
    return d;
  }

  Poly operator*(const Poly& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("Poly: dim mismatch");
    std::array<int, 3> ext = {ext_[0] + o.ext_[0] - 1, ext_[1] + o.ext_[1] - 1,
                              ext_[2] + o.ext_[2] - 1};
    Poly r(dim_, ext);
    for (int a0 = 0; a0 < ext_[0]; ++a0)
      for (int a1 = 0; a1 < ext_[1]; ++a1)
        for (int a2 = 0; a2 < ext_[2]; ++a2) {
          const double ca = at(a0, a1, a2);
          if (ca == 0.0) continue;
          for (int b0 = 0; b0 < o.ext_[0]; ++b0)
            for (int b1 = 0; b1 < o.ext_[1]; ++b1)
              for (int b2 = 0; b2 < o.ext_[2]; ++b2)
                r.at(a0 + b0, a1 + b1, a2 + b2) += ca * o.at(b0, b1, b2);
        }
    return r;
  }

  Poly operator+(const Poly& o) const {
    std::array<int, 3> ext = {std::max(ext_[0], o.ext_[0]), std::max(ext_[1], o.ext_[1]),
                              std::max(ext_[2], o.ext_[2])};
    Poly r(std::max(dim_, o.dim_), ext);
    for (int i0 = 0; i0 < ext_[0]; ++i0)
      for (int i1 = 0; i1 < ext_[1]; ++i1)
        for (int i2 = 0; i2 < ext_[2]; ++i2) r.at(i0, i1, i2) += at(i0, i1, i2);
    for (int i0 = 0; i0 < o.ext_[0]; ++i0)
      for (int i1 = 0; i1 < o.ext_[1]; ++i1)
        for (int i2 = 0; i2 < o.ext_[2]; ++i2) r.at(i0, i1, i2) += o.at(i0, i1, i2);
    return r;
  }

  Poly scaled(double s) const {
    Poly r = *this;
    for (double& v : r.c_) v *= s;
    return r;
  }

  Poly squared() const { return (*this) * (*this); }

  /// Exact integral over [-1,1]^dim via monomial moments.
  double integrate_cell() const {
    auto moment = [](int e) { return (e % 2 == 0) ? 2.0 / (e + 1) : 0.0; };
    double s = 0.0;
    for (int i0 = 0; i0 < ext_[0]; ++i0) {
      const double m0 = (dim_ >= 1) ? moment(i0) : 1.0;
      if (m0 == 0.0) continue;
      for (int i1 = 0; i1 < ext_[1]; ++i1) {
        const double m1 = (dim_ >= 2) ? moment(i1) : 1.0;
        if (m1 == 0.0) continue;
        for (int i2 = 0; i2 < ext_[2]; ++i2) {
          const double m2 = (dim_ >= 3) ? moment(i2) : 1.0;
          if (m2 == 0.0) continue;
          s += at(i0, i1, i2) * m0 * m1 * m2;
        }
      }
    }
    return s;
  }

  /// Substitute x_axis = value; the result still indexes dim_ axes but is
  /// constant along `axis`.
  Poly substitute(int axis, double value) const {
    std::array<int, 3> ext = ext_;
    ext[axis] = 1;
    Poly r(dim_, ext);
    for (int i0 = 0; i0 < ext_[0]; ++i0)
      for (int i1 = 0; i1 < ext_[1]; ++i1)
        for (int i2 = 0; i2 < ext_[2]; ++i2) {
          std::array<int, 3> e = {i0, i1, i2};
          const double p = std::pow(value, e[axis]);
          e[axis] = 0;
          r.at(e[0], e[1], e[2]) += at(i0, i1, i2) * p;
        }
    return r;
  }

  /// L2(reference cell) inner product, exact.
  double inner(const Poly& o) const { return ((*this) * o).integrate_cell(); }

 private:
  int dim_;
  std::array<int, 3> ext_;
  std::vector<double> c_;
};

}  // namespace augdg
