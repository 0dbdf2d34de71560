// Dense complex linear algebra, propagation, quadrature and special
// functions shared by every physics module.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace antibunch::numerics {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : NumericsError {
  using NumericsError::NumericsError;
};

struct KernelDimension : NumericsError {
  using NumericsError::NumericsError;
};

struct NonConvergence : NumericsError {
  using NumericsError::NumericsError;
};

// Builds a matrix from row-major entries; rejects NaN/Inf and size mismatch.
CMatrix make_matrix(int rows, int cols, const std::vector<cplx>& row_major);

bool all_finite(const CMatrix& m);

// Partial-pivot LU solve of A x = b. Throws SingularMatrix when a pivot
// falls below 1e-14 * ||A||.
CVector solve_linear(const CMatrix& a, const CVector& b);

// One-dimensional right kernel of A via SVD, scaled so that its largest
// component is real and positive with unit 2-norm. Throws KernelDimension
// when the kernel is not numerically one-dimensional.
CVector null_vector(const CMatrix& a);

// exp(A t) v0 for each t of an ascending, non-negative grid.
std::vector<CVector> propagate(const CMatrix& a, const CVector& v0,
                               const std::vector<double>& t_grid);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;

  void check() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) on [a, b] with forced breakpoints at kinks.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec,
                           const std::vector<double>& kinks = {});

// Integral over [0, inf) of an integrand bounded by C e^{-decay_rate x}.
// The domain is cut at T* with e^{-decay_rate T*} < abs_tol / 100 and the
// tail bound is added to the reported error.
QuadratureResult integrate_semi_infinite(const Integrand& f, double decay_rate,
                                         const QuadratureSpec& spec,
                                         const std::vector<double>& kinks = {});

// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
cplx faddeeva(cplx z);

// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) = w(i z).
cplx erfcx(cplx z);

// erf for complex argument; accurate where |Re z| is moderate.
cplx erf(cplx z);

// Returns f(x), except within |x - x0| < h where f is replaced by the cubic
// through x0 +- h, x0 +- 2h. Bridges removable singularities of closed forms
// whose direct evaluation cancels catastrophically near x0.
double bridge_removable(const std::function<double(double)>& f, double x,
                        double x0, double h);

// Evenly spaced grid with n >= 2 points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

// Logarithmically spaced grid with n >= 2 points on [lo, hi], lo > 0.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace antibunch::numerics
