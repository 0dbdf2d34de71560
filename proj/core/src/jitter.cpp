#include "antibunch/jitter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace antibunch::jitter {

using emitter::DomainError;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);
const double kSqrtPi = std::sqrt(std::numbers::pi);

}  // namespace

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::heaviside: return "heaviside";
    case KernelKind::exponential: return "exponential";
    case KernelKind::laplace: return "laplace";
    case KernelKind::gaussian: return "gaussian";
  }
  return "unknown";
}

std::string to_string(Convention c) {
  return c == Convention::main_text ? "main-text" : "appendix";
}

std::string to_string(Drive d) { return d == Drive::incoherent ? "incoherent" : "coherent"; }

KernelKind kernel_kind_from_string(const std::string& s) {
  for (KernelKind k : all_kernel_kinds()) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("unknown jitter kernel kind: " + s);
}

Convention convention_from_string(const std::string& s) {
  if (s == "main-text" || s == "main_text") return Convention::main_text;
  if (s == "appendix") return Convention::appendix;
  throw DomainError("unknown jitter convention: " + s);
}

const std::vector<KernelKind>& all_kernel_kinds() {
  static const std::vector<KernelKind> kinds{KernelKind::heaviside, KernelKind::exponential,
                                             KernelKind::laplace, KernelKind::gaussian};
  return kinds;
}

void JitterKernel::check() const {
  if (!(Gamma > 0.0) || !std::isfinite(Gamma)) throw DomainError("jitter kernel: Gamma must be > 0");
}

double JitterKernel::appendix_Gamma() const {
  check();
  if (convention == Convention::appendix) return Gamma;
  switch (kind) {
    case KernelKind::heaviside: return Gamma / (2.0 * kSqrt3);
    case KernelKind::laplace: return Gamma / kSqrt2;
    default: return Gamma;
  }
}

double JitterKernel::window() const {
  if (kind != KernelKind::heaviside) return 0.0;
  return 1.0 / appendix_Gamma();
}

double kernel_density(const JitterKernel& k, double t) {
  k.check();
  const double G = k.appendix_Gamma();
  switch (k.kind) {
    case KernelKind::heaviside: {
      const double w = 1.0 / G;
      return std::abs(t) < w / 2.0 ? 1.0 / w : 0.0;
    }
    case KernelKind::exponential:
      return t < 0.0 ? 0.0 : G * std::exp(-G * t);
    case KernelKind::laplace:
      return G * std::exp(-2.0 * G * std::abs(t));
    case KernelKind::gaussian:
      return G / std::sqrt(2.0 * std::numbers::pi) * std::exp(-G * G * t * t / 2.0);
  }
  return 0.0;
}

double kernel_autocorrelation(const JitterKernel& k, double u) {
  k.check();
  const double G = k.appendix_Gamma();
  const double x = std::abs(u);
  switch (k.kind) {
    case KernelKind::heaviside: {
      const double w = 1.0 / G;
      return x < w ? (w - x) / (w * w) : 0.0;
    }
    case KernelKind::exponential:
      return G / 2.0 * std::exp(-G * x);
    case KernelKind::laplace: {
      const double b = 2.0 * G;
      return b / 4.0 * (1.0 + b * x) * std::exp(-b * x);
    }
    case KernelKind::gaussian:
      return G / (2.0 * kSqrtPi) * std::exp(-G * G * x * x / 4.0);
  }
  return 0.0;
}

std::vector<double> density_kinks(const JitterKernel& k) {
  switch (k.kind) {
    case KernelKind::heaviside: {
      const double w = k.window();
      return {-w / 2.0, w / 2.0};
    }
    case KernelKind::exponential:
    case KernelKind::laplace:
      return {0.0};
    case KernelKind::gaussian:
      return {};
  }
  return {};
}

BareSignal bare_signal(const EmitterParams& p) {
  p.check();
  if (p.drive == emitter::DriveKind::incoherent) {
    const double G = p.Gamma_sigma();
    return {[G](double t) { return emitter::g2_incoherent(G, t); }, G, "incoherent"};
  }
  const double g = p.gamma_sigma;
  const double O = p.Omega_sigma;
  const auto rates = emitter::derived_rates(p);
  // Slowest exponential in g2 - 1 is (3 gamma - Re gamma_M) / 4.
  const double rate = (3.0 * g - rates.gamma_M.real()) / 4.0;
  return {[g, O](double t) { return emitter::g2_coherent(g, O, t); }, rate, "coherent"};
}

BareSignal heitler_signal(double gamma) {
  return {[gamma](double t) { return emitter::g2_heitler(gamma, t); }, gamma / 2.0, "heitler"};
}

double jittered_value_numeric(const BareSignal& bare, const JitterKernel& k, double tau,
                              const numerics::QuadratureSpec& spec) {
  k.check();
  if (!(bare.decay_rate > 0.0)) throw DomainError("jitter: bare decay rate must be > 0");
  const double G = k.appendix_Gamma();
  auto f = [&](double theta) {
    const double d = bare.g2(theta) - 1.0;
    if (d == 0.0) return 0.0;
    return d * (kernel_autocorrelation(k, tau - theta) + kernel_autocorrelation(k, tau + theta));
  };
  std::vector<double> kinks{tau};
  for (double m : {0.5, 2.0, 8.0}) {
    kinks.push_back(tau - m / G);
    kinks.push_back(tau + m / G);
  }
  if (k.kind == KernelKind::heaviside) {
    const double w = k.window();
    kinks.push_back(tau - w);
    kinks.push_back(tau + w);
    kinks.push_back(w - tau);
  }
  const double upper = std::log(100.0 / spec.abs_tol) / bare.decay_rate;
  const auto r = numerics::integrate(f, 0.0, upper, spec, kinks);
  return 1.0 + r.value;
}

CorrelationCurve jittered_g2_numeric(const BareSignal& bare, const JitterKernel& k,
                                     const std::vector<double>& tau_grid,
                                     const numerics::QuadratureSpec& spec) {
  CorrelationCurve out;
  out.tau = tau_grid;
  out.provenance = emitter::Provenance::quadrature_oracle;
  out.values.reserve(tau_grid.size());
  for (double t : tau_grid) out.values.push_back(jittered_value_numeric(bare, k, t, spec));
  return out;
}

CorrelationCurve jittered_g2_analytic(Drive drive, const JitterKernel& k, const EmitterParams& p,
                                      const std::vector<double>& tau_grid, FormVariant variant) {
  k.check();
  p.check();
  if (drive == Drive::incoherent && p.drive != emitter::DriveKind::incoherent) {
    throw DomainError("jitter: incoherent closed form needs incoherent drive parameters");
  }
  if (drive == Drive::coherent && p.drive != emitter::DriveKind::coherent) {
    throw DomainError("jitter: coherent closed form needs coherent drive parameters");
  }
  const double G = k.appendix_Gamma();
  CorrelationCurve out;
  out.tau = tau_grid;
  out.provenance = emitter::Provenance::analytic;
  out.values.reserve(tau_grid.size());
  for (double t : tau_grid) out.values.push_back(jitter_closed_form(drive, k.kind, p, G, t, variant));
  return out;
}

std::vector<RobustnessRow> jitter_robustness_scan(
    const std::vector<std::pair<std::string, EmitterParams>>& regimes,
    const std::vector<KernelKind>& kinds, const std::vector<double>& Gamma_grid) {
  if (regimes.empty() || kinds.empty() || Gamma_grid.empty()) {
    throw DomainError("jitter_robustness_scan: grids must be non-empty");
  }
  std::vector<RobustnessRow> rows;
  for (const auto& [label, params] : regimes) {
    const Drive drive = params.drive == emitter::DriveKind::incoherent ? Drive::incoherent : Drive::coherent;
    for (KernelKind kind : kinds) {
      for (double G : Gamma_grid) {
        const JitterKernel k{kind, G, Convention::main_text};
        const double v = jitter_closed_form(drive, kind, params, k.appendix_Gamma(), 0.0, FormVariant::shipped);
        rows.push_back({label, kind, G, v});
      }
    }
  }
  return rows;
}

}  // namespace antibunch::jitter
