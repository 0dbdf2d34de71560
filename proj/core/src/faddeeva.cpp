// Faddeeva function by Weideman's rational expansion (N = 40 terms) in the
// upper half plane, reflected to the lower half plane with
// w(z) = 2 exp(-z^2) - w(-z).
#include "antibunch/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace antibunch::numerics {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double L;
  std::array<double, kTerms> a;  // highest power first

  WeidemanTable() {
    const int m = 2 * kTerms;
    const int m2 = 2 * m;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    // Samples f(theta_k) for k = -m+1 .. m-1, with f = 0 at k = -m.
    std::array<double, 2 * m> f{};
    for (int k = -m + 1; k <= m - 1; ++k) {
      const double theta = k * std::numbers::pi / m;
      const double t = L * std::tan(theta / 2.0);
      f[static_cast<std::size_t>(k + m)] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift followed by a real DFT; only coefficients 1..N are needed.
    std::array<double, 2 * m> shifted{};
    for (int i = 0; i < 2 * m; ++i) shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + m) % (2 * m))];
    std::array<double, kTerms + 1> coeff{};
    for (int k = 0; k <= kTerms; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 2 * m; ++j) {
        acc += shifted[static_cast<std::size_t>(j)] * std::cos(2.0 * std::numbers::pi * k * j / (2 * m));
      }
      coeff[static_cast<std::size_t>(k)] = acc / m2;
    }
    for (int i = 0; i < kTerms; ++i) a[static_cast<std::size_t>(i)] = coeff[static_cast<std::size_t>(kTerms - i)];
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

cplx faddeeva_upper(cplx z) {
  const auto& tb = table();
  const cplx i(0.0, 1.0);
  const cplx denom = tb.L - i * z;
  const cplx zz = (tb.L + i * z) / denom;
  cplx p = 0.0;
  for (double c : tb.a) p = p * zz + c;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
}

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx erfcx(cplx z) { return faddeeva(cplx(-z.imag(), z.real())); }

cplx erf(cplx z) {
  // erf(z) = 1 - exp(-z^2) erfcx(z); use the odd symmetry to keep Re z >= 0.
  if (z.real() < 0.0) return -erf(-z);
  return 1.0 - std::exp(-z * z) * erfcx(z);
}

}  // namespace antibunch::numerics
