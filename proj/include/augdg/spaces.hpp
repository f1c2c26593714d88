#pragma once

#include <algorithm>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "augdg/linalg.hpp"
#include "augdg/polynomial.hpp"

namespace augdg {

enum class SpaceFamily { P, Q, S };

inline char family_letter(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::P: return 'P';
    case SpaceFamily::Q: return 'Q';
    case SpaceFamily::S: return 'S';
  }
  return '?';
}

inline SpaceFamily family_from_letter(char c) {
  switch (c) {
    case 'P': case 'p': return SpaceFamily::P;
    case 'Q': case 'q': return SpaceFamily::Q;
    case 'S': case 's': return SpaceFamily::S;
  }
  throw std::invalid_argument(std::string("unknown space family '") + c + "'");
}

struct SpaceSpec {
  SpaceFamily family = SpaceFamily::Q;
  int k = 1;    // approximation degree
  int dim = 2;  // 2 or 3
  bool bernstein = false;  // Q2/dim=2 only: tensor Bernstein representation

  std::string name() const {
    return std::string(1, family_letter(family)) + std::to_string(k) +
           (dim == 3 ? "(3d)" : "");
  }
};

/// Closed-form dimension of the space, used to validate construction.
inline int space_dimension(const SpaceSpec& s) {
  switch (s.family) {
    case SpaceFamily::P: {
      int num = 1, den = 1;
      for (int i = 1; i <= s.dim; ++i) {
        num *= s.k + i;
        den *= i;
      }
      return num / den;
    }
    case SpaceFamily::Q: {
      int d = 1;
      for (int i = 0; i < s.dim; ++i) d *= s.k + 1;
      return d;
    }
    case SpaceFamily::S: {
      // superlinear degree <= k; counted by enumeration
      int count = 0;
      const int m = s.k;
      for (int e0 = 0; e0 <= m; ++e0)
        for (int e1 = 0; e1 <= m; ++e1)
          for (int e2 = 0; e2 <= (s.dim == 3 ? m : 0); ++e2) {
            const int sl = (e0 >= 2 ? e0 : 0) + (e1 >= 2 ? e1 : 0) + (e2 >= 2 ? e2 : 0);
            if (sl <= m) ++count;
          }
      return count;
    }
  }
  return 0;
}

/// Ordered basis of a local approximation space on the reference cell.
/// Augmented spaces are represented by the same type with the extra
/// function appended (see augment.hpp); `spec.k` stays the base degree.
struct BasisSet {
  SpaceSpec spec;
  std::vector<Poly> fn;
  std::vector<std::array<Poly, 3>> dfn;  // partials, dfn[i][axis]
  int max_axis_degree = 0;
  uint64_t uid = 0;  // distinguishes basis sets in evaluation caches

  int size() const { return static_cast<int>(fn.size()); }

  void finalize() {
    static std::atomic<uint64_t> next_uid{1};
    uid = next_uid.fetch_add(1);
    dfn.clear();
    max_axis_degree = 0;
    for (const Poly& p : fn) {
      std::array<Poly, 3> d = {Poly::constant(spec.dim, 0.0), Poly::constant(spec.dim, 0.0),
                               Poly::constant(spec.dim, 0.0)};
      for (int a = 0; a < spec.dim; ++a) d[a] = p.derivative(a);
      dfn.push_back(std::move(d));
      max_axis_degree = std::max(max_axis_degree, p.max_axis_degree());
    }
  }
};

namespace detail {

struct Exponent {
  std::array<int, 3> e;
  int total() const { return e[0] + e[1] + e[2]; }
};

// Degree-major order, ties broken by descending exponent tuple, so P1 in 2D
// reads {1, xi, eta}.
inline bool degree_major_less(const Exponent& a, const Exponent& b) {
  if (a.total() != b.total()) return a.total() < b.total();
  return a.e > b.e;
}

inline std::vector<Exponent> enumerate_exponents(const SpaceSpec& s) {
  std::vector<Exponent> out;
  const int k = s.k;
  const int lim2 = (s.dim == 3) ? k : 0;
  for (int e0 = 0; e0 <= k; ++e0)
    for (int e1 = 0; e1 <= k; ++e1)
      for (int e2 = 0; e2 <= lim2; ++e2) {
        Exponent ex{{e0, e1, e2}};
        switch (s.family) {
          case SpaceFamily::P:
            if (ex.total() <= k) out.push_back(ex);
            break;
          case SpaceFamily::Q:
            out.push_back(ex);
            break;
          case SpaceFamily::S: {
            const int sl = (e0 >= 2 ? e0 : 0) + (e1 >= 2 ? e1 : 0) + (e2 >= 2 ? e2 : 0);
            if (sl <= k) out.push_back(ex);
            break;
          }
        }
      }
  if (s.family == SpaceFamily::Q) {
    // tensor-major: first axis outermost, last axis fastest (already is).
  } else {
    std::sort(out.begin(), out.end(), degree_major_less);
  }
  return out;
}

// 1D quadratic Bernstein polynomials on [-1,1].
inline std::array<Poly, 3> bernstein2_1d(int dim, int axis) {
  const Poly lo = Poly::affine(dim, axis, -0.5, 0.5);  // (1-x)/2
  const Poly hi = Poly::affine(dim, axis, 0.5, 0.5);   // (1+x)/2
  return {lo * lo, lo * hi.scaled(2.0), hi * hi};
}

}  // namespace detail

/// Build the ordered basis for a supported SpaceSpec.
inline std::shared_ptr<const BasisSet> build_basis(const SpaceSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3)
    throw std::invalid_argument("build_basis: dim must be 2 or 3");
  if (spec.k < 1) throw std::invalid_argument("build_basis: need k >= 1");
  auto basis = std::make_shared<BasisSet>();
  basis->spec = spec;
  if (spec.bernstein) {
    if (spec.family != SpaceFamily::Q || spec.k != 2 || spec.dim != 2)
      throw std::invalid_argument("build_basis: Bernstein representation only for Q2 in 2d");
    const auto bx = detail::bernstein2_1d(2, 0);
    const auto by = detail::bernstein2_1d(2, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) basis->fn.push_back(bx[i] * by[j]);
  } else {
    for (const auto& ex : detail::enumerate_exponents(spec))
      basis->fn.push_back(Poly::monomial(spec.dim, ex.e));
  }
  basis->finalize();
  if (basis->size() != space_dimension(spec))
    throw std::logic_error("build_basis: dimension mismatch for " + spec.name());
  return basis;
}

inline std::vector<double> eval_basis(const BasisSet& basis, const Point& p) {
  std::vector<double> v(basis.size());
  for (int i = 0; i < basis.size(); ++i) v[i] = basis.fn[i].eval(p);
  return v;
}

/// Row i holds the partial derivatives of basis function i.
inline Mat grad_basis(const BasisSet& basis, const Point& p) {
  Mat g(basis.size(), basis.spec.dim);
  for (int i = 0; i < basis.size(); ++i)
    for (int a = 0; a < basis.spec.dim; ++a) g(i, a) = basis.dfn[i][a].eval(p);
  return g;
}

/// Coefficients representing the constant 1 in this basis (exact for the
/// monomial bases, solved through the Gram matrix otherwise).
inline std::vector<double> constant_one_coefficients(const BasisSet& basis) {
  const int n = basis.size();
  Mat gram(n, n);
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = basis.fn[i].integrate_cell();
    for (int j = 0; j < n; ++j) gram(i, j) = basis.fn[i].inner(basis.fn[j]);
  }
  return solve_dense(gram, rhs).x;
}

}  // namespace augdg
