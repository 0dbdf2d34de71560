// Seven-exponential amplitudes of the filtered coherent correlator.
//
// Two independent builders:
//  * printed: the rational expressions as transcribed, each factor a named
//    sub-expression;
//  * residue: the amplitudes as pole residues of the Laplace-transformed
//    sensor correlator in the vanishing-coupling limit, computed from the
//    4 x 4 emitter Liouvillian alone.
#include "antibunch/filter.hpp"
#include "antibunch/liouvillian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace antibunch::filter {

using emitter::DomainError;
using numerics::CMatrix;
using numerics::CVector;

std::string to_string(AmplitudeSource s) { return s == AmplitudeSource::printed ? "printed" : "residue"; }

cplx FilteredCoefficients::sum_amplitudes() const {
  cplx s = 0.0;
  for (const cplx& a : amplitudes) s += a;
  return s;
}

double FilteredCoefficients::value(double tau) const {
  cplx acc = 1.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < 7; ++i) {
    const cplx term = amplitudes[i] * std::exp(-rates[i] * tau);
    acc += term;
    scale = std::max(scale, std::abs(amplitudes[i]));
  }
  if (std::abs(acc.imag()) > 1e-8 * scale) {
    throw DomainError("filtered coherent form: imaginary residue above 1e-8");
  }
  return acc.real();
}

namespace {

std::array<cplx, 7> seven_rates(double G, double g, cplx gM) {
  return {(3.0 * g + gM) / 4.0, (3.0 * g - gM) / 4.0, cplx(G / 2.0), cplx((G + g) / 2.0),
          (2.0 * G + 3.0 * g + gM) / 4.0, (2.0 * G + 3.0 * g - gM) / 4.0, cplx(G)};
}

// ---------------------------------------------------------------- printed

struct Printed {
  double G, g, O;
  double y(int i, int j) const { return gamma_ij(i, j, G, g); }

  // Shared denominator blocks.
  double d_1121() const { return y(1, 1) * y(2, 1) + 8 * O * O; }
  double d_1112sq() const { return y(1, 1) * y(1, 1) * y(1, 2) + 8 * G * O * O; }
  double d_3132() const { return y(3, 1) * y(3, 2) + 16 * O * O; }
  double n_1112() const { return y(1, 1) * y(1, 2) + 16 * O * O; }

  cplx G1(cplx M) const {
    const double O2 = O * O, O4 = O2 * O2;
    const cplx first = G * y(1, -2) * y(1, -1) * (M + g) +
                       8.0 * (14 * G * G + 2 * g * (M + g) - G * (7.0 * M + 17 * g)) * O2 - 512 * O4;
    const cplx second = y(1, 1) * y(1, 2) * y(2, 1) * (G * (M - 3 * g) + 2 * g * (M - g)) +
                        8.0 * (8 * G * G * G + 32 * G * g * g - 2 * g * g * (M - 7 * g) + G * G * (M + 25 * g)) * O2 +
                        256 * G * O4;
    const cplx num = 512 * G * G * y(1, 1) * O2 * n_1112() * first * second;
    const cplx den = M * (M - G) * (M - g) * (M + g) * (M + g) * (M + g - 2 * G) * (M + 3 * g - 4 * G) *
                     (M + 3 * g - 2 * G) * d_1121() * d_1112sq() * d_1112sq();
    return num / den;
  }

  cplx G3(cplx M) const {
    const double O2 = O * O, O4 = O2 * O2;
    const double bracket = y(1, 1) * y(1, 1) * y(1, 2) * y(1, -2) * y(2, 1) * y(2, 1) +
                           8 * y(1, 1) * (9 * G * G * G + 20 * G * g * y(1, 1) + 8 * g * g * g) * O2 +
                           128 * G * G * O4;
    const double num = 256 * G * y(1, 1) * g * O2 * n_1112() * bracket;
    const double last = y(1, 2) + 8 * G * O2;
    const cplx den = y(1, 1) * y(1, 1) * y(2, 1) * (M * M - g * g) * (M * M - y(2, -3) * y(2, -3)) * d_1121() *
                     last * last;
    return 2.0 * num / den;
  }

  cplx G4(cplx M) const {
    const double O2 = O * O, O4 = O2 * O2;
    const double bracket = y(1, 1) * y(1, 1) * y(1, 2) * y(1, 2) * y(3, 1) + 48 * G * y(1, 1) * y(1, 1) * O2 -
                           256 * g * O4;
    const double num = 2 * G * G * G * (g * g + 8 * O2) * n_1112() * bracket;
    const cplx den = y(1, -1) * y(3, 1) * (M * M - y(2, -1) * y(2, -1)) * d_1121() * d_1112sq() * d_1112sq();
    return 2.0 * num / den;
  }

  cplx G5(cplx M) const {
    const double O2 = O * O, O4 = O2 * O2, O6 = O4 * O2, O8 = O4 * O4;
    const double G2 = G * G, G3 = G2 * G, G4 = G3 * G, G5 = G4 * G, G6 = G5 * G;
    const double g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g;
    const cplx lead = y(1, 1) * y(1, 1) * y(1, 2) * y(1, 2) * y(2, 1) * y(3, 1) * y(3, 2) *
                      (2 * G2 * (M - 3 * g) - G * g * (M + 3 * g) - 2 * g2 * (M - g));
    const cplx o2 = 8 * y(1, 1) * y(1, 2) * O2 *
                    (-108 * G6 + G5 * (215.0 * M - 1203 * g) + 3 * G4 * g * (239.0 * M - 1081 * g) +
                     G3 * g2 * (1051.0 * M - 3947 * g) + G2 * g3 * (803.0 * M - 2465 * g) +
                     10 * G * g4 * (31.0 * M - 77 * g) + 48 * g5 * (M + 2 * g));
    const cplx o4 = 128 * O4 *
                    (6 * G6 + G5 * (131.0 * M - 227 * g) + G4 * g * (546.0 * M - 776 * g2) +
                     G3 * g2 * (889.0 * M - 933 * g) + G2 * g3 * (724.0 * M - 488 * g) +
                     G * g4 * (296.0 * M - 96 * g) + 48.0 * M * g5);
    const cplx o6 = 2048 * O6 *
                    (74 * G4 + 2 * G3 * (6.0 * M + 109 * g) + 5 * G2 * g * (3.0 * M + 61 * g) +
                     2 * G * g2 * (-M + 103 * g) - 4 * g3 * (M - 13 * g));
    const double o8 = 131072 * G * y(2, 1) * O8;
    const cplx num = -1024 * G2 * y(1, 1) * O4 * (lead + o2 + o4 + o6 + o8);
    const cplx den = y(2, 1) * M * (M + G) * (M - g) * (M + g) * (M + g) * (M - y(2, -3)) * d_1121() * d_1112sq() *
                     d_1112sq() * d_3132();
    return 2.0 * num / den;
  }

  cplx G7(cplx M) const {
    const double O2 = O * O, O4 = O2 * O2, O6 = O4 * O2, O8 = O4 * O4;
    const double G2 = G * G, G3 = G2 * G, G4 = G3 * G, G5 = G4 * G, G6 = G5 * G, G7p = G6 * G;
    const double g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g, g6 = g5 * g, g7 = g6 * g;
    const double lead = n_1112() * (y(1, 1) * y(1, 2) * y(2, 1) * y(2, 1) * y(3, 1) * y(3, 1) * y(3, 2) * y(1, -1) *
                                    y(1, -2) * y(2, -1));
    const double o2 = 8 * y(3, 1) * O2 *
                      (142 * G7p + 239 * G6 * g - 241 * G5 * g2 - 677 * G4 * g3 + 77 * G3 * g4 + 832 * G2 * g5 +
                       580 * G * g6 + 128 * g7);
    const double o4 = 64 * O4 *
                      (219 * G6 + 386 * G5 * g + 565 * G4 * g2 + 344 * G3 * g3 - 98 * G2 * g4 - 208 * G * g5 -
                       56 * g6);
    const double o6 = 1024 * O6 * (15 * G4 - 11 * G3 * g - 4 * G2 * g2 - 16 * G * g3 - 8 * g4);
    const double o8 = -16384 * O8 * g * y(2, 1);
    const double num = 32 * G2 * y(1, 1) * (g2 + 8 * O2) * (lead + o2 + o4 + o6 + o8);
    const cplx den = y(2, 1) * y(3, 1) * y(1, -1) * (M * M - y(3, -2) * y(3, -2)) * (M * M - y(4, -3) * y(4, -3)) *
                     d_1121() * (y(1, 1) * y(1, 2) + 8 * O2) * d_3132();
    return num / den;
  }

  // Smallest linear denominator factor over |M|, normalized by the rate scale.
  double conditioning(cplx M) const {
    const double scale = std::max({G, g, std::abs(M)});
    double m = std::numeric_limits<double>::infinity();
    for (const cplx& f : {M, M - G, M - g, M + g, M + g - 2 * G, M + 3 * g - 4 * G, M + 3 * g - 2 * G, M + G,
                          M - y(2, -3), M + y(2, -3), M - y(2, -1), M + y(2, -1), M - y(3, -2), M + y(3, -2),
                          M - y(4, -3), M + y(4, -3), cplx(y(1, -1))}) {
      m = std::min(m, std::abs(f) / scale);
    }
    for (cplx s : {-M, M}) {
      for (const cplx& f : {s, s - G, s - g, s + g, s + g - 2 * G, s + 3 * g - 4 * G, s + 3 * g - 2 * G, s + G}) {
        m = std::min(m, std::abs(f) / scale);
      }
    }
    return m;
  }
};

// ---------------------------------------------------------------- residue

CMatrix unvec(const CVector& v) {
  CMatrix r(2, 2);
  r << v(0), v(2), v(1), v(3);
  return r;
}

CVector vec(const CMatrix& r) {
  CVector v(4);
  v << r(0, 0), r(1, 0), r(0, 1), r(1, 1);
  return v;
}

// Resolvents of the emitter Liouvillian A (and its shifts) through its
// eigen-decomposition. Modes that the source does not populate are skipped,
// so coincidences with the decoupled coherence mode at -g/2 stay finite.
struct Residues {
  CMatrix A, V, W;
  CVector mu;
  CMatrix sigma, sigma_dag;

  CMatrix fL(const CMatrix& r) const { return cplx(0, -1) * sigma * r; }
  CMatrix fR(const CMatrix& r) const { return cplx(0, 1) * r * sigma_dag; }

  // (s - A + shift)^-1 x
  CMatrix resolve(cplx s, double shift, const CMatrix& x) const {
    const CVector v = vec(x);
    const double norm = std::max(v.norm(), 1e-300);
    CVector out = CVector::Zero(4);
    for (int k = 0; k < 4; ++k) {
      const cplx c = W.row(k) * v;
      if (std::abs(c) * V.col(k).norm() < 1e-13 * norm) continue;
      const cplx d = s - mu(k) + shift;
      if (std::abs(d) < 1e-300) throw numerics::SingularMatrix("filtered coefficients: resolvent at a pole");
      out += V.col(k) * (c / d);
    }
    return unvec(out);
  }

  CMatrix project(int k, const CMatrix& x) const { return unvec(V.col(k) * (W.row(k) * vec(x))); }
};

std::array<cplx, 7> residue_amplitudes(const EmitterParams& p, double G, cplx gM) {
  const double g = p.gamma_sigma;
  liouvillian::SystemSpec spec{p, std::nullopt};
  const auto L = liouvillian::build_liouvillian(spec);
  Residues R;
  R.A = L.matrix;
  Eigen::ComplexEigenSolver<CMatrix> es(R.A);
  R.V = es.eigenvectors();
  R.W = R.V.inverse();
  R.mu = es.eigenvalues();
  R.sigma = CMatrix::Zero(2, 2);
  R.sigma(0, 1) = 1.0;
  R.sigma_dag = R.sigma.adjoint();

  // Vanishing-coupling hierarchy of steady sensor moments.
  CMatrix M = R.A;
  M.row(3) << 1.0, 0.0, 0.0, 1.0;
  CVector rhs = CVector::Zero(4);
  rhs(3) = 1.0;
  std::map<std::pair<int, int>, CMatrix> mom;
  mom[{0, 0}] = unvec(numerics::solve_linear(M, rhs));
  for (auto [n, m] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}}) {
    CMatrix src = CMatrix::Zero(2, 2);
    if (n > 0) src += R.fL(mom[{n - 1, m}]);
    if (m > 0) src += R.fR(mom[{n, m - 1}]);
    mom[{n, m}] = R.resolve(0.0, 0.5 * G * (n + m), src);
  }
  const cplx n1 = mom[{1, 1}].trace();
  const cplx n1sq = n1 * n1;
  const CMatrix q00 = mom[{1, 1}];
  const CMatrix q10 = 2.0 * mom[{2, 1}];
  const CMatrix q01 = 2.0 * mom[{1, 2}];
  const CMatrix q11 = 4.0 * mom[{2, 2}];
  const double half = 0.5 * G;

  auto Q00 = [&](cplx s) { return R.resolve(s, 0.0, q00); };
  auto Q10 = [&](cplx s) { return R.resolve(s, half, q10 + R.fL(Q00(s))); };
  auto Q01 = [&](cplx s) { return R.resolve(s, half, q01 + R.fR(Q00(s))); };

  std::array<cplx, 7> amp{};
  amp[6] = (q11 + R.fL(Q01(-G)) + R.fR(Q10(-G))).trace() / n1sq;

  // Emitter eigenvalues: 0, -g/2, -(3g + gM)/4, -(3g - gM)/4.
  const std::array<cplx, 4> expected{cplx(0.0), cplx(-g / 2.0), -(3.0 * g + gM) / 4.0, -(3.0 * g - gM) / 4.0};
  std::array<int, 4> used{};
  for (int k = 0; k < 4; ++k) {
    const cplx mu = R.mu(k);
    int slot = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
      const double d = std::abs(mu - expected[static_cast<std::size_t>(j)]);
      if (d < best) {
        best = d;
        slot = j;
      }
    }
    if (used[static_cast<std::size_t>(slot)]++) throw DomainError("filtered coefficients: emitter spectrum is degenerate");
    auto project = [&](const CMatrix& x) { return R.project(k, x); };
    // Pole of the one-photon sector at mu - Gamma/2.
    const cplx pb = mu - G / 2.0;
    const CMatrix r10 = project(q10 + R.fL(Q00(pb)));
    const CMatrix r01 = project(q01 + R.fR(Q00(pb)));
    const cplx b = (R.fL(r01) + R.fR(r10)).trace() / (pb + G) / n1sq;
    // Pole of the vacuum sector at mu.
    const CMatrix rq = project(q00);
    const CMatrix a10 = R.resolve(mu, half, R.fL(rq));
    const CMatrix a01 = R.resolve(mu, half, R.fR(rq));
    const cplx a = (R.fL(a01) + R.fR(a10)).trace() / (mu + G) / n1sq;
    switch (slot) {
      case 0: amp[2] = b; break;               // steady constant carries 1
      case 1: amp[3] = b; break;               // -g/2 vacuum pole has zero weight
      case 2: amp[0] = a; amp[4] = b; break;
      case 3: amp[1] = a; amp[5] = b; break;
    }
  }
  return amp;
}

// Smallest relative separation between two decay rates of the sum.
double pole_gap(const std::array<cplx, 7>& rates) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    for (std::size_t j = i + 1; j < rates.size(); ++j) {
      const double scale = std::max(std::abs(rates[i]), std::abs(rates[j]));
      gap = std::min(gap, std::abs(rates[i] - rates[j]) / scale);
    }
  }
  return gap;
}

}  // namespace

cplx printed_amplitude(int index, double Gamma, double gamma, double Omega) {
  const Printed pr{Gamma, gamma, Omega};
  const cplx gM = std::sqrt(cplx(gamma * gamma - 64.0 * Omega * Omega));
  switch (index) {
    case 1: return pr.G1(gM);
    case 2: return pr.G1(-gM);
    case 3: return pr.G3(gM);
    case 4: return pr.G4(gM);
    case 5: return pr.G5(gM);
    case 6: return pr.G5(-gM);
    case 7: return pr.G7(gM);
    default: throw DomainError("printed_amplitude: index must be 1..7");
  }
}

FilteredCoefficients filtered_coefficients(const EmitterParams& p, double Gamma, AmplitudeSource source) {
  p.check();
  if (p.drive != emitter::DriveKind::coherent) throw DomainError("filtered coefficients need coherent drive");
  if (p.Delta_sigma != 0.0) throw DomainError("filtered coefficients cover resonant driving only");
  if (!(Gamma > 0.0) || !std::isfinite(Gamma)) throw DomainError("filter: Gamma must be > 0");
  const double g = p.gamma_sigma;
  const cplx gM = emitter::derived_rates(p).gamma_M;

  FilteredCoefficients c;
  c.source = source;
  c.rates = seven_rates(Gamma, g, gM);
  c.conditioning = pole_gap(c.rates);
  if (source == AmplitudeSource::printed) {
    const Printed pr{Gamma, g, p.Omega_sigma};
    c.conditioning = std::min(c.conditioning, pr.conditioning(gM));
    c.degenerate = c.conditioning < kDegenerate;
    for (int i = 0; i < 7; ++i) c.amplitudes[static_cast<std::size_t>(i)] = printed_amplitude(i + 1, Gamma, g, p.Omega_sigma);
    return c;
  }
  c.degenerate = c.conditioning < kDegenerate;
  if (c.degenerate) return c;
  c.amplitudes = residue_amplitudes(p, Gamma, gM);
  return c;
}

}  // namespace antibunch::filter
