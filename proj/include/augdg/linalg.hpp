#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace augdg {

/// Dense row-major matrix, sized for the small per-cell systems that
/// appear in local DG solves (at most a few hundred rows).
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, value) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct LuSolveResult {
  std::vector<double> x;
  double residual_inf;  // ||Ax - b||_inf of the returned solution
};

/// LU factorization with partial pivoting and row equilibration (basis
/// functions of very different magnitudes appear in augmented local
/// systems).  A pivot below `pivot_rtol * max|A|` of the equilibrated
/// matrix is treated as singular.
class LuFactor {
 public:
  explicit LuFactor(Mat a, double pivot_rtol = 1e-13) : lu_(std::move(a)) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw std::invalid_argument("LuFactor: matrix not square");
    row_scale_.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
      double m = 0.0;
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(lu_(i, j)));
      if (m > 0.0) {
        row_scale_[i] = 1.0 / m;
        for (int j = 0; j < n; ++j) lu_(i, j) *= row_scale_[i];
      }
    }
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;
    const double tol = pivot_rtol * lu_.max_abs();
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::abs(lu_(col, col));
      for (int r = col + 1; r < n; ++r) {
        const double v = std::abs(lu_(r, col));
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (!(best > tol))
        throw std::runtime_error("singular local system: pivot " + std::to_string(best) +
                                 " below tolerance at column " + std::to_string(col));
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(lu_(col, j), lu_(piv, j));
        std::swap(perm_[col], perm_[piv]);
      }
      const double d = lu_(col, col);
      for (int r = col + 1; r < n; ++r) {
        const double f = lu_(r, col) / d;
        lu_(r, col) = f;
        for (int j = col + 1; j < n; ++j) lu_(r, j) -= f * lu_(col, j);
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    const int n = lu_.rows();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm_[i]] * row_scale_[perm_[i]];
    for (int i = 1; i < n; ++i) {
      double s = x[i];
      for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

 private:
  Mat lu_;
  std::vector<int> perm_;
  std::vector<double> row_scale_;
};

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Direct solve with a residual report.  The factorization is discarded;
/// callers with many right-hand sides should keep an LuFactor instead.
inline LuSolveResult solve_dense(const Mat& a, const std::vector<double>& b,
                                 double pivot_rtol = 1e-13) {
  LuFactor lu(a, pivot_rtol);
  LuSolveResult out;
  out.x = lu.solve(b);
  std::vector<double> ax = a.multiply(out.x);
  double r = 0.0;
  for (size_t i = 0; i < b.size(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
  out.residual_inf = r;
  return out;
}

}  // namespace augdg
