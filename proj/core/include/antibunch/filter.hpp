// Frequency-filtered correlations of the two-level emitter seen through a
// Lorentzian filter of linewidth Gamma centred on the emission: closed forms
// for incoherent, Heitler, Mollow and general coherent driving, plus the
// numerical route through the sensor Liouvillian.
#pragma once

#include "antibunch/emitter.hpp"
#include "antibunch/numerics.hpp"

#include <array>
#include <string>
#include <vector>

namespace antibunch::filter {

using emitter::CorrelationCurve;
using emitter::EmitterParams;
using numerics::cplx;

// gamma_ij = i Gamma + j gamma_sigma; negative indices flip the sign of the
// corresponding term.
inline double gamma_ij(int i, int j, double Gamma, double gamma) { return i * Gamma + j * gamma; }

// ---------------------------------------------------------------- incoherent

// Closed form at one delay; removable point Gamma = Gamma_sigma is bridged.
double incoherent_value(double Gamma_sigma, double Gamma, double tau);

// 2 Gamma_sigma / (Gamma_sigma + 3 Gamma).
double incoherent_zero_delay(double Gamma_sigma, double Gamma);

CorrelationCurve filtered_g2_incoherent(const EmitterParams& p, double Gamma,
                                        const std::vector<double>& tau_grid);

struct Isoline {
  std::vector<double> crossings;  // delays where g2 crosses 1, ascending
  double lump_tau = 0.0;          // delay of the largest excursion past the last crossing
  double lump_value = 1.0;        // g2 at lump_tau (1 when there is no crossing)
};

Isoline filtered_g2_incoherent_isoline(const EmitterParams& p, double Gamma);

// ------------------------------------------------------------ coherent, general

// Seven-exponential representation g2(tau) = 1 + sum_i G_i exp(-gamma_i tau).
// Rate order: (3g + gM)/4, (3g - gM)/4, Gamma/2, (Gamma + g)/2,
// (2 Gamma + 3 g + gM)/4, (2 Gamma + 3 g - gM)/4, Gamma.
enum class AmplitudeSource {
  printed,  // rational expressions as transcribed
  residue   // exact pole residues of the sensor correlator (shipped)
};

std::string to_string(AmplitudeSource s);

struct FilteredCoefficients {
  std::array<cplx, 7> rates{};
  std::array<cplx, 7> amplitudes{};
  AmplitudeSource source = AmplitudeSource::residue;
  // Smallest relative gap between two rates (and, for printed amplitudes,
  // smallest normalized denominator factor). Below kDegenerate the
  // amplitudes cancel catastrophically and the oracle takes over.
  double conditioning = 1.0;
  bool degenerate = false;

  cplx sum_amplitudes() const;
  // 1 + sum G_i exp(-gamma_i tau); throws if the imaginary part exceeds 1e-8.
  double value(double tau) const;
};

inline constexpr double kDegenerate = 1e-4;

FilteredCoefficients filtered_coefficients(const EmitterParams& p, double Gamma,
                                           AmplitudeSource source = AmplitudeSource::residue);

// Individual printed amplitudes (index 1..7), exposed for validation.
cplx printed_amplitude(int index, double Gamma, double gamma, double Omega);

struct FilteredCurve {
  CorrelationCurve curve;
  FilteredCoefficients coefficients;
  bool used_fallback = false;  // degenerate point served by the oracle
};

FilteredCurve filtered_g2_coherent_general(const EmitterParams& p, double Gamma,
                                           const std::vector<double>& tau_grid,
                                           AmplitudeSource source = AmplitudeSource::residue);

// General zero-delay rational function. The printed form reads its drive
// symbol as sqrt(2) Omega_sigma in this library's Hamiltonian convention;
// `printed_drive` evaluates it with Omega_sigma substituted literally.
double filtered_g2_coherent_zero_delay(const EmitterParams& p, double Gamma,
                                       bool printed_drive = false);

// -------------------------------------------------------------------- Heitler

// Squared-bracket form; the removable point Gamma = gamma is bridged.
double heitler_value(double gamma, double Gamma, double tau);
double heitler_zero_delay(double gamma, double Gamma);
CorrelationCurve filtered_g2_heitler(const EmitterParams& p, double Gamma,
                                     const std::vector<double>& tau_grid);

// --------------------------------------------------------------------- Mollow

enum class MollowRegime { small_gamma, central, large_gamma };
std::string to_string(MollowRegime r);
MollowRegime mollow_regime_from_string(const std::string& s);

struct MollowCurve {
  CorrelationCurve curve;
  std::string warning;  // non-empty when Gamma is within a decade of the regime edge
};

// Requires Omega_sigma >= 5 gamma_sigma.
MollowCurve filtered_g2_mollow_limits(const EmitterParams& p, double Gamma,
                                      const std::vector<double>& tau_grid, MollowRegime regime);
double mollow_value(MollowRegime regime, double gamma, double Omega, double Gamma, double tau);
double mollow_zero_delay(MollowRegime regime, double gamma, double Omega, double Gamma);

// ------------------------------------------------------------------ scans

struct MaxBunchingRow {
  double Omega = 0.0;
  double max_g2 = 0.0;
  double argmax_Gamma = 0.0;
};

// For each Omega, maximizes the general zero-delay form over
// Gamma in [1e-4, 1e4] gamma (log grid then golden-section refinement).
std::vector<MaxBunchingRow> max_bunching_scan(const std::vector<double>& Omega_grid,
                                              double gamma = 1.0, int grid_points = 161);

// --------------------------------------------------------------- oracle path

// Filtered g2 through the sensor Liouvillian. `omega_xi` is the filter
// detuning from the emission line (closed forms cover omega_xi = 0 only).
CorrelationCurve filtered_g2_numeric(const EmitterParams& p, double Gamma,
                                     const std::vector<double>& tau_grid, double omega_xi = 0.0);

}  // namespace antibunch::filter
