#include "antibunch/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace antibunch::numerics {

CMatrix make_matrix(int rows, int cols, const std::vector<cplx>& row_major) {
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != row_major.size()) {
    throw NumericsError("make_matrix: rows*cols does not match entry count");
  }
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = row_major[static_cast<std::size_t>(i) * cols + j];
    }
  }
  if (!all_finite(m)) throw NumericsError("make_matrix: non-finite entry");
  return m;
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

CVector solve_linear(const CMatrix& a, const CVector& b) {
  if (a.rows() != a.cols()) throw NumericsError("solve_linear: matrix is not square");
  if (b.size() != a.rows()) throw NumericsError("solve_linear: right-hand side has wrong length");
  if (!all_finite(a) || !all_finite(b)) throw NumericsError("solve_linear: non-finite input");
  if (a.rows() == 0) return CVector();

  Eigen::PartialPivLU<CMatrix> lu(a);
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (std::abs(u(i, i)) < 1e-14 * norm || norm == 0.0) {
      throw SingularMatrix("solve_linear: matrix is numerically singular");
    }
  }
  return lu.solve(b);
}

CVector null_vector(const CMatrix& a) {
  if (a.rows() != a.cols()) throw NumericsError("null_vector: matrix is not square");
  if (!all_finite(a)) throw NumericsError("null_vector: non-finite input");
  const Eigen::Index n = a.rows();
  if (n == 0) throw KernelDimension("null_vector: empty matrix");

  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  if (smax == 0.0) throw KernelDimension("null_vector: zero matrix has full kernel");
  if (s(n - 1) > 1e-9 * smax) throw KernelDimension("null_vector: matrix has trivial kernel");
  if (n > 1 && s(n - 2) < 1e-12 * smax) {
    throw KernelDimension("null_vector: kernel dimension exceeds one");
  }

  CVector v = svd.matrixV().col(n - 1);
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const cplx phase = std::abs(v(k)) > 0 ? std::conj(v(k)) / std::abs(v(k)) : cplx(1.0);
  v *= phase;
  return v / v.norm();
}

std::vector<CVector> propagate(const CMatrix& a, const CVector& v0,
                               const std::vector<double>& t_grid) {
  if (a.rows() != a.cols()) throw NumericsError("propagate: matrix is not square");
  if (v0.size() != a.rows()) throw NumericsError("propagate: vector has wrong length");
  if (!all_finite(a) || !all_finite(v0)) throw NumericsError("propagate: non-finite input");

  std::vector<CVector> out;
  out.reserve(t_grid.size());
  CVector v = v0;
  double t_prev = 0.0;
  double dt_cached = -1.0;
  CMatrix step;
  for (double t : t_grid) {
    if (!std::isfinite(t) || t < 0.0) throw NumericsError("propagate: times must be finite and >= 0");
    if (t < t_prev) throw NumericsError("propagate: time grid must be ascending");
    const double dt = t - t_prev;
    if (dt > 0.0) {
      if (std::abs(dt - dt_cached) > 1e-14 * std::max(1.0, dt)) {
        step = (a * cplx(dt)).exp();
        dt_cached = dt;
      }
      v = step * v;
    }
    out.push_back(v);
    t_prev = t;
  }
  return out;
}

double bridge_removable(const std::function<double(double)>& f, double x,
                        double x0, double h) {
  if (!(std::abs(x - x0) < h)) return f(x);
  const double xs[4] = {x0 - 2 * h, x0 - h, x0 + h, x0 + 2 * h};
  double ys[4];
  for (int i = 0; i < 4; ++i) ys[i] = f(xs[i]);
  double result = 0.0;
  for (int i = 0; i < 4; ++i) {
    double basis = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) basis *= (x - xs[j]) / (xs[i] - xs[j]);
    }
    result += ys[i] * basis;
  }
  return result;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw NumericsError("linspace: need at least two points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 2) throw NumericsError("logspace: need at least two points");
  if (!(lo > 0.0) || !(hi > 0.0)) throw NumericsError("logspace: bounds must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace antibunch::numerics
