#include "antibunch/emitter.hpp"

#include <algorithm>
#include <cmath>

namespace antibunch::emitter {

EmitterParams EmitterParams::incoherent(double P, double gamma) {
  EmitterParams p;
  p.gamma_sigma = gamma;
  p.drive = DriveKind::incoherent;
  p.P_sigma = P;
  p.check();
  return p;
}

EmitterParams EmitterParams::coherent(double Omega, double gamma, double Delta) {
  EmitterParams p;
  p.gamma_sigma = gamma;
  p.drive = DriveKind::coherent;
  p.Omega_sigma = Omega;
  p.Delta_sigma = Delta;
  p.check();
  return p;
}

double EmitterParams::Gamma_sigma() const { return gamma_sigma + P_sigma; }

EmitterParams EmitterParams::normalized() const {
  check();
  EmitterParams q = *this;
  q.gamma_sigma = 1.0;
  q.P_sigma = P_sigma / gamma_sigma;
  q.Omega_sigma = Omega_sigma / gamma_sigma;
  q.Delta_sigma = Delta_sigma / gamma_sigma;
  q.omega_sigma = omega_sigma / gamma_sigma;
  return q;
}

void EmitterParams::check() const {
  if (!(gamma_sigma > 0.0) || !std::isfinite(gamma_sigma)) {
    throw DomainError("gamma_sigma must be positive and finite");
  }
  if (!(P_sigma >= 0.0) || !std::isfinite(P_sigma)) throw DomainError("P_sigma must be >= 0");
  if (!(Omega_sigma >= 0.0) || !std::isfinite(Omega_sigma)) {
    throw DomainError("Omega_sigma must be >= 0");
  }
  if (!std::isfinite(Delta_sigma)) throw DomainError("Delta_sigma must be finite");
}

CoherentDerivedRates derived_rates(const EmitterParams& p) {
  p.check();
  const double g = p.gamma_sigma;
  const double w = 8.0 * p.Omega_sigma;
  const cplx gm = std::sqrt(cplx(g * g - w * w, 0.0));
  return {gm, std::abs(gm)};
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::quadrature_oracle: return "quadrature-oracle";
    case Provenance::liouvillian_oracle: return "liouvillian-oracle";
  }
  return "unknown";
}

void CorrelationCurve::check(double negative_tol) const {
  if (tau.size() != values.size()) throw DomainError("curve: grid and values differ in length");
  for (std::size_t i = 1; i < tau.size(); ++i) {
    if (!(tau[i] > tau[i - 1])) throw DomainError("curve: grid must be strictly ascending");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("curve: non-finite value");
    if (v < -negative_tol) throw DomainError("curve: negative correlation");
  }
}

double CorrelationCurve::at_zero() const {
  if (tau.empty() || tau.front() != 0.0) throw DomainError("curve: grid does not start at zero");
  return values.front();
}

namespace {

struct Moments {
  double mean;
  double second_factorial;
  double second;
};

Moments moments(const std::vector<double>& p) {
  double total = 0.0;
  Moments m{0.0, 0.0, 0.0};
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (!(p[n] >= 0.0)) throw DomainError("distribution: probabilities must be >= 0");
    const double dn = static_cast<double>(n);
    total += p[n];
    m.mean += dn * p[n];
    m.second_factorial += dn * (dn - 1.0) * p[n];
    m.second += dn * dn * p[n];
  }
  if (std::abs(total - 1.0) > 1e-10) throw DomainError("distribution: probabilities must sum to 1");
  if (!(m.mean > 0.0)) throw DomainError("distribution: zero mean photon number");
  return m;
}

cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

std::vector<double> evaluate(const std::vector<double>& grid, auto&& fn) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(fn(t));
  return out;
}

}  // namespace

double g2_from_distribution(const std::vector<double>& p) {
  const Moments m = moments(p);
  return m.second_factorial / (m.mean * m.mean);
}

double fano_factor(const std::vector<double>& p) {
  const Moments m = moments(p);
  return (m.second - m.mean * m.mean) / m.mean;
}

Classification classify(const CorrelationCurve& curve) {
  const double g0 = curve.at_zero();
  Classification c;
  c.sub_poissonian = g0 < 1.0;
  c.antibunched = curve.tau.size() > 1;
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    if (!(g0 < curve.values[i])) {
      c.antibunched = false;
      break;
    }
  }
  return c;
}

double g2_incoherent(double Gamma_sigma, double tau) {
  return -std::expm1(-Gamma_sigma * std::abs(tau));
}

double g2_heitler(double gamma, double tau) {
  const double a = -std::expm1(-gamma * std::abs(tau) / 2.0);
  return a * a;
}

double g2_coherent(double gamma, double Omega, double tau) {
  const double t = std::abs(tau);
  const cplx gm = std::sqrt(cplx(gamma * gamma - 64.0 * Omega * Omega, 0.0));
  const cplx x = gm * t / 4.0;
  const cplx bracket = std::cosh(x) + (3.0 * gamma * t / 4.0) * sinhc(x);
  const cplx value = 1.0 - std::exp(-3.0 * gamma * t / 4.0) * bracket;
  if (std::abs(value.imag()) > 1e-8) {
    throw DomainError("g2_coherent: imaginary residue exceeds 1e-8");
  }
  return value.real();
}

CorrelationCurve bare_g2_incoherent(const EmitterParams& p, const std::vector<double>& tau_grid) {
  p.check();
  if (p.drive != DriveKind::incoherent) throw DomainError("bare_g2_incoherent: incoherent drive required");
  const double G = p.Gamma_sigma();
  return {tau_grid, evaluate(tau_grid, [G](double t) { return g2_incoherent(G, t); }),
          Provenance::analytic};
}

CorrelationCurve bare_g2_coherent(const EmitterParams& p, const std::vector<double>& tau_grid) {
  p.check();
  if (p.drive != DriveKind::coherent) throw DomainError("bare_g2_coherent: coherent drive required");
  if (p.Delta_sigma != 0.0) throw DomainError("bare_g2_coherent: closed form requires resonant driving");
  const double g = p.gamma_sigma;
  const double O = p.Omega_sigma;
  return {tau_grid, evaluate(tau_grid, [g, O](double t) { return g2_coherent(g, O, t); }),
          Provenance::analytic};
}

CorrelationCurve bare_g2_heitler(const EmitterParams& p, const std::vector<double>& tau_grid) {
  p.check();
  const double g = p.gamma_sigma;
  return {tau_grid, evaluate(tau_grid, [g](double t) { return g2_heitler(g, t); }),
          Provenance::analytic};
}

Envelopes mollow_envelopes(const EmitterParams& p, const std::vector<double>& tau_grid) {
  p.check();
  const double g = p.gamma_sigma;
  auto env = [g](double t) { return std::exp(-3.0 * g * std::abs(t) / 4.0); };
  return {{tau_grid, evaluate(tau_grid, [&](double t) { return 1.0 - env(t); }), Provenance::analytic},
          {tau_grid, evaluate(tau_grid, [&](double t) { return 1.0 + env(t); }), Provenance::analytic}};
}

std::vector<double> dense_tau_grid(double tau_max, int points) {
  if (!(tau_max > 0.0) || points < 4) throw DomainError("dense_tau_grid: need tau_max > 0 and >= 4 points");
  const int n_lin = points / 2;
  const int n_geo = points - n_lin;
  std::vector<double> grid = numerics::linspace(0.0, tau_max, n_lin);
  const auto geo = numerics::logspace(tau_max * 1e-4, tau_max, n_geo);
  grid.insert(grid.end(), geo.begin(), geo.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [tau_max](double a, double b) { return std::abs(a - b) < 1e-12 * tau_max; }),
             grid.end());
  return grid;
}

}  // namespace antibunch::emitter
