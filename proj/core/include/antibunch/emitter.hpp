// Two-level emitter parameters, bare correlation formulas and photon-counting
// statistics. Rates are in units of the emitter decay rate gamma_sigma.
#pragma once

#include "antibunch/numerics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace antibunch::emitter {

using numerics::cplx;

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class DriveKind { incoherent, coherent };

struct EmitterParams {
  double gamma_sigma = 1.0;
  DriveKind drive = DriveKind::incoherent;
  double P_sigma = 0.0;      // incoherent pump rate
  double Omega_sigma = 0.0;  // coherent drive amplitude
  double Delta_sigma = 0.0;  // emitter-laser detuning
  double omega_sigma = 0.0;  // natural frequency, bookkeeping only

  static EmitterParams incoherent(double P, double gamma = 1.0);
  static EmitterParams coherent(double Omega, double gamma = 1.0, double Delta = 0.0);

  // Gamma_sigma = gamma_sigma + P_sigma for incoherent driving.
  double Gamma_sigma() const;

  // Same parameters expressed with gamma_sigma = 1.
  EmitterParams normalized() const;

  void check() const;
};

struct CoherentDerivedRates {
  cplx gamma_M;    // sqrt(gamma^2 - 64 Omega^2) on the principal branch
  double R_sigma;  // |gamma_M|, the oscillation rate above the Mollow threshold
};

CoherentDerivedRates derived_rates(const EmitterParams& p);

enum class Provenance { analytic, quadrature_oracle, liouvillian_oracle };

std::string to_string(Provenance p);

struct CorrelationCurve {
  std::vector<double> tau;
  std::vector<double> values;
  Provenance provenance = Provenance::analytic;

  // Throws DomainError if the grid is not strictly ascending, sizes differ,
  // or a value is negative beyond `negative_tol`.
  void check(double negative_tol = 1e-9) const;
  double at_zero() const;
};

// Photon-number distribution statistics.
double g2_from_distribution(const std::vector<double>& p);
double fano_factor(const std::vector<double>& p);

struct Classification {
  bool antibunched = false;
  bool sub_poissonian = false;
};

Classification classify(const CorrelationCurve& curve);

// Bare correlations at a single delay (tau may be negative; curves are even).
double g2_incoherent(double Gamma_sigma, double tau);
double g2_heitler(double gamma, double tau);
double g2_coherent(double gamma, double Omega, double tau);

CorrelationCurve bare_g2_incoherent(const EmitterParams& p, const std::vector<double>& tau_grid);
CorrelationCurve bare_g2_coherent(const EmitterParams& p, const std::vector<double>& tau_grid);
CorrelationCurve bare_g2_heitler(const EmitterParams& p, const std::vector<double>& tau_grid);

struct Envelopes {
  CorrelationCurve lower;
  CorrelationCurve upper;
};

Envelopes mollow_envelopes(const EmitterParams& p, const std::vector<double>& tau_grid);

// Delay grid on [0, tau_max] that is dense near zero: a linear part plus a
// geometric part, merged and de-duplicated.
std::vector<double> dense_tau_grid(double tau_max, int points);

}  // namespace antibunch::emitter
