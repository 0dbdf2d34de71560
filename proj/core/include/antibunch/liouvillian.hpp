// Lindblad superoperators for the two-level emitter, optionally coupled to a
// weakly coupled, lossy bosonic sensor, with steady states and two-time
// correlators by the quantum regression theorem.
//
// Conventions
//  * Density operators are vectorized by column stacking:
//    vec(A rho B) = (B^T kron A) vec(rho); element rho_ij sits at i + d j.
//  * Composite Hilbert space is emitter (g, e) kron sensor Fock (0..n_max);
//    sigma = |g><e|.
//  * With a sensor present the matrix is stored in a rescaled frame:
//    component (i, j) is divided by kappa^(n_i + n_j), where n is the sensor
//    occupation and kappa = eps / sqrt(Gamma gamma_sigma) is the typical
//    sensor amplitude per quantum. In that frame every occupation sector is
//    O(1) and the back-action is O(kappa^2), so correlators that scale as
//    eps^4 are computed without loss of precision.
#pragma once

#include "antibunch/emitter.hpp"
#include "antibunch/numerics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace antibunch::liouvillian {

using emitter::CorrelationCurve;
using emitter::EmitterParams;
using numerics::CMatrix;
using numerics::CVector;
using numerics::cplx;

struct SensorSpec {
  double omega_xi = 0.0;  // sensor detuning from the rotating frame
  double Gamma = 1.0;     // sensor linewidth
  double epsilon = 0.0;   // coupling; 0 selects 1e-4 sqrt(Gamma gamma_sigma)
  int n_max = 2;          // Fock truncation (levels 0..n_max)
};

struct SystemSpec {
  EmitterParams emitter;
  std::optional<SensorSpec> sensor;

  // Resolved coupling (default applied) or 0 without a sensor.
  double epsilon() const;
  void check() const;
};

struct Liouvillian {
  CMatrix matrix;                       // rescaled frame (see header comment)
  std::vector<int> dims;                // {2} or {2, n_max + 1}
  std::map<std::string, CMatrix> op_table;
  std::vector<int> scale_exponent;      // n_i + n_j per vectorized index
  double epsilon = 0.0;                 // sensor coupling (0 without sensor)
  double scale = 1.0;                   // kappa of the rescaled frame

  int hilbert_dim() const;

  // Matrix in ordinary (unscaled) coordinates.
  CMatrix physical_matrix() const;

  // Row functional implementing Tr(rho) in the rescaled frame.
  CVector trace_functional() const;

  CVector to_physical(const CVector& scaled) const;
  CVector to_scaled(const CVector& physical) const;
};

Liouvillian build_liouvillian(const SystemSpec& spec);

// Steady state in the rescaled frame, trace-normalized.
CVector steady_state_scaled(const Liouvillian& L);

// Physical steady-state density operator (Hermitian, trace 1, PSD with
// eigenvalues above -1e-9 clipped to zero).
CMatrix steady_state(const Liouvillian& L);

// Tr(O rho) for a physical operator O and a rescaled-frame vector.
cplx expectation(const Liouvillian& L, const CMatrix& op, const CVector& scaled);

// <A^dag A^dag(tau) A(tau) A> / <A^dag A>^2 for A in op_table.
CorrelationCurve g2_tau(const Liouvillian& L, const std::string& op,
                        const std::vector<double>& tau_grid);

// Physical spectrum of sigma measured by a sensor of linewidth Gamma_det,
// normalized so that its integral over omega is <sigma^dag sigma>.
std::vector<double> emission_spectrum(const EmitterParams& emitter,
                                      const std::vector<double>& omega_grid,
                                      double Gamma_det);

// Frequency-filtered g2 of the emitter through a sensor of linewidth Gamma.
CorrelationCurve filtered_g2_oracle(const EmitterParams& emitter, double Gamma,
                                    const std::vector<double>& tau_grid,
                                    double omega_xi = 0.0, int n_max = 2,
                                    double epsilon = 0.0);

}  // namespace antibunch::liouvillian
