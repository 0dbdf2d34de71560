// Detector time jitter: kernel densities, their autocorrelations, the
// quadrature convolution of a bare g2 with a kernel pair, and closed forms
// for the incoherently and coherently driven emitter.
#pragma once

#include "antibunch/emitter.hpp"
#include "antibunch/numerics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace antibunch::jitter {

using emitter::CorrelationCurve;
using emitter::EmitterParams;
using numerics::cplx;

enum class KernelKind { heaviside, exponential, laplace, gaussian };

// main_text: every kernel has variance 1/Gamma^2.
// appendix: Heaviside is a window of width 1/Gamma, Laplace has rate
// 2 Gamma; exponential and Gaussian coincide with main_text.
enum class Convention { main_text, appendix };

std::string to_string(KernelKind k);
std::string to_string(Convention c);
KernelKind kernel_kind_from_string(const std::string& s);
Convention convention_from_string(const std::string& s);

const std::vector<KernelKind>& all_kernel_kinds();

struct JitterKernel {
  KernelKind kind = KernelKind::exponential;
  double Gamma = 1.0;
  Convention convention = Convention::main_text;

  void check() const;

  // Width parameter of the same physical kernel in appendix convention.
  double appendix_Gamma() const;

  // Full support width for Heaviside, zero otherwise.
  double window() const;
};

// Density D^2_Gamma(t) of the reported-minus-true detection time.
double kernel_density(const JitterKernel& k, double t);

// Autocorrelation A(u) = int D(t) D(t + u) dt; even in u, unit mass.
double kernel_autocorrelation(const JitterKernel& k, double u);

// Points where the density or its autocorrelation is not smooth.
std::vector<double> density_kinks(const JitterKernel& k);

// Bare correlation evaluated for theta >= 0, with the slowest decay rate of
// g2(theta) - 1 (used to truncate the convolution integral).
struct BareSignal {
  std::function<double(double)> g2;
  double decay_rate = 1.0;
  std::string label;
};

BareSignal bare_signal(const EmitterParams& p);
BareSignal heitler_signal(double gamma);

// Quadrature oracle: g2_J(tau) = int g2(|theta|) A(tau - theta) dtheta.
double jittered_value_numeric(const BareSignal& bare, const JitterKernel& k, double tau,
                              const numerics::QuadratureSpec& spec = {1e-11, 1e-12, 4000});

CorrelationCurve jittered_g2_numeric(const BareSignal& bare, const JitterKernel& k,
                                     const std::vector<double>& tau_grid,
                                     const numerics::QuadratureSpec& spec = {1e-11, 1e-12, 4000});

enum class Drive { incoherent, coherent };
std::string to_string(Drive d);

// The closed forms exactly as printed (known typos included), or the form
// shipped by the library (typos corrected, numerically stabilized).
enum class FormVariant { printed, shipped };

// Closed form at a single delay. `Gamma_app` is the appendix-convention
// width. Incoherent forms read Gamma_sigma = gamma + P; coherent forms read
// R = sqrt(64 Omega^2 - gamma^2) as a complex number.
double jitter_closed_form(Drive drive, KernelKind kind, const EmitterParams& p,
                          double Gamma_app, double tau, FormVariant variant);

CorrelationCurve jittered_g2_analytic(Drive drive, const JitterKernel& k, const EmitterParams& p,
                                      const std::vector<double>& tau_grid,
                                      FormVariant variant = FormVariant::shipped);

struct RobustnessRow {
  std::string regime;
  KernelKind kind;
  double Gamma;
  double g2_zero;
};

// g2_J(0) for each regime x kind x Gamma, main-text convention. Regimes are
// evaluated with the supplied emitter parameters.
std::vector<RobustnessRow> jitter_robustness_scan(
    const std::vector<std::pair<std::string, EmitterParams>>& regimes,
    const std::vector<KernelKind>& kinds, const std::vector<double>& Gamma_grid);

}  // namespace antibunch::jitter
