// Closed forms of the jittered g2 for the two drives and four kernels. All
// expressions take the appendix-convention width G. Coherent expressions are
// evaluated in complex arithmetic with R = sqrt(64 Omega^2 - gamma^2), which
// is imaginary below the Mollow threshold; the results are real.
#include "antibunch/jitter.hpp"

#include <cmath>

namespace antibunch::jitter {

using emitter::DomainError;
using numerics::bridge_removable;

namespace {

const cplx I(0.0, 1.0);

double step(double x) { return x > 0.0 ? 1.0 : 0.0; }

double real_checked(cplx v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return std::nan("");
  if (std::abs(v.imag()) > 1e-6 * std::max(1.0, std::abs(v.real()))) {
    throw DomainError(std::string(what) + ": closed form returned a complex value");
  }
  return v.real();
}

// ---- incoherent drive, Gs = gamma + P --------------------------------------

double heaviside_incoherent(double G, double Gs, double t) {
  const double r = Gs / G;
  if (t >= 1.0 / G) {
    const double a = -std::expm1(r);
    return 1.0 - (G * G) / (Gs * Gs) * std::exp(-Gs * (t + 1.0 / G)) * a * a;
  }
  return 1.0 - 2.0 * (G * G) / (Gs * Gs) *
                   (std::exp(-r) * std::cosh(Gs * t) - std::exp(-Gs * t) + Gs * (1.0 / G - t));
}

double exponential_incoherent(double G, double Gs, double t) {
  const double r = Gs / G;
  return 1.0 - (std::exp(-Gs * t) - r * std::exp(-G * t)) / (1.0 - r * r);
}

double exponential_incoherent_limit(double Gs, double t) {
  return 1.0 - std::exp(-Gs * t) * (1.0 + Gs * t) / 2.0;
}

double laplace_incoherent(double G, double Gs, double t) {
  const double r = Gs / G;
  const double D = 4.0 - r * r;
  return 1.0 - 16.0 / (D * D) * std::exp(-Gs * t) +
         r * (8.0 + D * (1.0 + 2.0 * G * t)) / (D * D) * std::exp(-2.0 * G * t);
}

double gaussian_incoherent_printed(double G, double Gs, double t) {
  const double r = Gs / G;
  const double tp = r + G * t / 2.0;
  const double tm = r - G * t / 2.0;
  return 1.0 - std::exp(r * r) / 2.0 *
                   (std::exp(-Gs * t) * std::erfc(tm) + std::exp(Gs * t) * std::erfc(tp));
}

// Gaussian transfer function: int e^{-lambda |x|} A(t - x) dx for the
// Gaussian autocorrelation, written with erfcx so no factor overflows.
cplx gaussian_transfer(cplx lambda, double G, double t) {
  const double s = G * t / 2.0;
  const double damp = std::exp(-s * s);
  auto term = [&](cplx a) -> cplx {
    if (a.real() >= 0.0) return numerics::erfcx(a) * damp;
    // erfcx(a) = 2 e^{a^2} - erfcx(-a); e^{a^2 - s^2} stays bounded here.
    return 2.0 * std::exp(a * a - s * s) - numerics::erfcx(-a) * damp;
  };
  const cplx z = lambda / G;
  return 0.5 * (term(z - s) + term(z + s));
}

double gaussian_incoherent_shipped(double G, double Gs, double t) {
  return 1.0 - gaussian_transfer(cplx(Gs, 0.0), G, t).real();
}

// ---- coherent drive ---------------------------------------------------------

struct CoherentInput {
  double G, g, t;
  cplx R;
};

cplx heaviside_coherent(const CoherentInput& c, bool printed) {
  const double G = c.G, g = c.g, t = c.t;
  const cplx R = c.R;
  const cplx D = R * R + 9.0 * g * g;
  const cplx A1 = 9.0 * g * (R * R - 3.0 * g * g);
  const cplx A2 = R * (R * R - 27.0 * g * g);
  const double env = std::exp(-3.0 * g * t / 4.0);
  const cplx a = -32.0 * G * G * env / (R * D * D) *
                 (A1 * std::sin(R * t / 4.0) + A2 * std::cos(R * t / 4.0));
  const double pref_b = printed ? 16.0 * G : 16.0 * G * G;
  const cplx arg_b = R * (1.0 + G * t) / (4.0 * G);
  const cplx b = pref_b * env * std::exp(-3.0 * g / (4.0 * G)) / (R * D * D) *
                 (A1 * std::sin(arg_b) + A2 * std::cos(arg_b));
  const double u = 1.0 - G * t;
  const cplx arg_u = R * u / (4.0 * G);
  const cplx cterm = 16.0 * G * G * (R * R - 27.0 * g * g) / (D * D) * std::cos(arg_u) *
                     std::exp(-3.0 * g * std::abs(u) / (4.0 * G));
  const cplx d = -48.0 * G * g * u / D * step(1.0 / G - t);
  const cplx e = 144.0 * G * G * g * (R * R - 3.0 * g * g) / (R * D * D) * std::sin(arg_u) *
                 (std::exp(-3.0 * g * u / (4.0 * G)) * step(1.0 / G - t) -
                  std::exp(3.0 * g * u / (4.0 * G)) * step(t - 1.0 / G));
  return 1.0 + a + b + cterm + d + e;
}

cplx exponential_coherent(const CoherentInput& c, bool printed) {
  const double G = c.G, g = c.g, t = c.t;
  const cplx R = c.R;
  const cplx Np = R * R + (4.0 * G + 3.0 * g) * (4.0 * G + 3.0 * g);
  const cplx Nm = R * R + (4.0 * G - 3.0 * g) * (4.0 * G - 3.0 * g);
  const cplx j1 = 24.0 * G * g * (R * R + 9.0 * g * g);
  const cplx j2 = 16.0 * R * G * G * (R * R + 16.0 * G * G - 27.0 * g * g) * std::cos(R * t / 4.0) +
                  48.0 * G * G * g * (3.0 * R * R + 16.0 * G * G - 9.0 * g * g) * std::sin(R * t / 4.0);
  const double rate = printed ? 3.0 * g / 2.0 : 3.0 * g / 4.0;
  return 1.0 - j1 / (Np * Nm) * std::exp(-G * t) - j2 / (R * Np * Nm) * std::exp(-rate * t);
}

cplx laplace_coherent(const CoherentInput& c, bool printed) {
  const double G = c.G, g = c.g, t = c.t;
  const cplx R = c.R;
  const cplx R2 = R * R;
  const double G2 = G * G, g2 = g * g;
  const cplx g1 = 4096.0 * G2 * G2 *
                  (R * ((R2 + 64.0 * G2) * (R2 + 64.0 * G2) - 18.0 * (5.0 * R2 + 192.0 * G2) * g2 +
                        405.0 * g2 * g2) * std::cos(R * t / 4.0) +
                   3.0 * g * (5.0 * R2 * R2 + 6.0 * R2 * (64.0 * G2 - 15.0 * g2) +
                              (64.0 * G2 - 9.0 * g2) * (64.0 * G2 - 9.0 * g2)) * std::sin(R * t / 4.0));
  const cplx Nm = R2 + (8.0 * G - 3.0 * g) * (8.0 * G - 3.0 * g);
  const cplx Np = R2 + (8.0 * G + 3.0 * g) * (8.0 * G + 3.0 * g);
  const cplx lead = 24.0 * R * G * g * (R2 + 9.0 * g2);
  const cplx base = R2 * R2 + 384.0 * R2 * G2 + 20480.0 * G2 * G2 - 3456.0 * G2 * g2 + 81.0 * g2 * g2;
  const cplx bracket_poly = R2 * R2 + 2.0 * R2 * (64.0 * G2 + 9.0 * g2) +
                            (64.0 * G2 - 9.0 * g2) * (64.0 * G2 - 9.0 * g2);
  cplx g2v;
  cplx N;
  if (printed) {
    g2v = lead + (base + 2.0 * G * Nm * Np * t);
    N = R * bracket_poly;
  } else {
    g2v = lead * (base + 18.0 * R2 * g2 + 2.0 * G * Nm * Np * t);
    N = R * bracket_poly * bracket_poly;
  }
  return 1.0 - g1 / N * std::exp(-3.0 * g * t / 4.0) - g2v / N * std::exp(-2.0 * G * t);
}

cplx gaussian_coherent_printed(const CoherentInput& c) {
  const double G = c.G, t = c.t, g = c.g;
  const cplx R = c.R;
  const cplx Dp = (I * R + 3.0 * g) / 4.0;
  const cplx Dm = (I * R - 3.0 * g) / 4.0;
  const cplx l1p = Dp / G + G * t / 2.0, l1m = Dp / G - G * t / 2.0;
  const cplx l2p = Dm / G + G * t / 2.0, l2m = Dm / G - G * t / 2.0;
  using numerics::erf;
  const cplx h1 = 2.0 * std::cosh(Dp * t) + erf(l1p) * std::exp(Dp * t) + erf(l1m) * std::exp(-Dp * t);
  const cplx h2 = 2.0 * std::cosh(Dm * t) - erf(l2p) * std::exp(Dm * t) - erf(l2m) * std::exp(-Dm * t);
  return 1.0 - Dm / (I * R) * std::exp((Dp / G) * (Dp / G)) * h1 -
         Dp / (I * R) * std::exp((Dm / G) * (Dm / G)) * h2;
}

// g2(x) - 1 = -c+ e^{-l+ |x|} - c- e^{-l- |x|} with l+- = (3 gamma -+ i R)/4.
cplx gaussian_coherent_shipped(const CoherentInput& c) {
  const cplx R = c.R;
  const cplx lp = (3.0 * c.g - I * R) / 4.0;
  const cplx lm = (3.0 * c.g + I * R) / 4.0;
  const cplx cp = 0.5 * (1.0 - 3.0 * I * c.g / R);
  const cplx cm = 0.5 * (1.0 + 3.0 * I * c.g / R);
  return 1.0 - cp * gaussian_transfer(lp, c.G, c.t) - cm * gaussian_transfer(lm, c.G, c.t);
}

double coherent_value(KernelKind kind, double G, double g, double Omega, double t, bool printed) {
  const CoherentInput c{G, g, t, std::sqrt(cplx(64.0 * Omega * Omega - g * g, 0.0))};
  switch (kind) {
    case KernelKind::heaviside: return real_checked(heaviside_coherent(c, printed), "heaviside/coherent");
    case KernelKind::exponential: return real_checked(exponential_coherent(c, printed), "exponential/coherent");
    case KernelKind::laplace: return real_checked(laplace_coherent(c, printed), "laplace/coherent");
    case KernelKind::gaussian:
      return real_checked(printed ? gaussian_coherent_printed(c) : gaussian_coherent_shipped(c),
                          "gaussian/coherent");
  }
  return std::nan("");
}

double incoherent_value(KernelKind kind, double G, double Gs, double t, bool printed) {
  switch (kind) {
    case KernelKind::heaviside: return heaviside_incoherent(G, Gs, t);
    case KernelKind::exponential: return exponential_incoherent(G, Gs, t);
    case KernelKind::laplace: return laplace_incoherent(G, Gs, t);
    case KernelKind::gaussian:
      return printed ? gaussian_incoherent_printed(G, Gs, t) : gaussian_incoherent_shipped(G, Gs, t);
  }
  return std::nan("");
}

constexpr double kBridge = 1e-3;

double incoherent_shipped(KernelKind kind, double G, double Gs, double t) {
  auto f = [&](double Gx) { return incoherent_value(kind, Gx, Gs, t, false); };
  if (kind == KernelKind::exponential) {
    if (std::abs(G - Gs) < 1e-6 * Gs) return exponential_incoherent_limit(Gs, t);
    return bridge_removable(f, G, Gs, kBridge * Gs);
  }
  if (kind == KernelKind::laplace) return bridge_removable(f, G, Gs / 2.0, kBridge * Gs);
  return f(G);
}

double coherent_shipped(KernelKind kind, double G, double g, double Omega, double t) {
  auto at = [&](double Gx, double Ox) { return coherent_value(kind, Gx, g, Ox, t, false); };
  // R = 0 at the Mollow threshold 8 Omega = gamma.
  const double Othr = g / 8.0;
  if (std::abs(Omega - Othr) < 2.0 * kBridge * g) {
    return bridge_removable([&](double Ox) { return at(G, Ox); }, Omega, Othr, kBridge * g);
  }
  // Below threshold N- vanishes when 4G (exponential) or 8G (Laplace) equals
  // 3 gamma -+ gamma_M.
  if (kind == KernelKind::exponential || kind == KernelKind::laplace) {
    const double r2 = g * g - 64.0 * Omega * Omega;
    if (r2 > 0.0) {
      const double gm = std::sqrt(r2);
      const double scale = kind == KernelKind::exponential ? 4.0 : 8.0;
      for (double root : {(3.0 * g - gm) / scale, (3.0 * g + gm) / scale}) {
        if (root > 0.0 && std::abs(G - root) < 2.0 * kBridge * root) {
          return bridge_removable([&](double Gx) { return at(Gx, Omega); }, G, root, kBridge * root);
        }
      }
    }
  }
  return at(G, Omega);
}

}  // namespace

double jitter_closed_form(Drive drive, KernelKind kind, const EmitterParams& p, double Gamma_app,
                          double tau, FormVariant variant) {
  p.check();
  if (!(Gamma_app > 0.0)) throw DomainError("jitter closed form: Gamma must be > 0");
  const double t = std::abs(tau);
  const bool printed = variant == FormVariant::printed;
  if (drive == Drive::incoherent) {
    const double Gs = p.Gamma_sigma();
    return printed ? incoherent_value(kind, Gamma_app, Gs, t, true)
                   : incoherent_shipped(kind, Gamma_app, Gs, t);
  }
  if (p.Delta_sigma != 0.0) throw DomainError("jitter closed form: coherent form requires resonance");
  const double g = p.gamma_sigma;
  const double O = p.Omega_sigma;
  return printed ? coherent_value(kind, Gamma_app, g, O, t, true)
                 : coherent_shipped(kind, Gamma_app, g, O, t);
}

}  // namespace antibunch::jitter
