#include "antibunch/filter.hpp"
#include "antibunch/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace antibunch::filter {

using emitter::DomainError;
using numerics::bridge_removable;

namespace {

constexpr double kBridge = 1e-3;

void require_Gamma(double Gamma) {
  if (!(Gamma > 0.0) || !std::isfinite(Gamma)) throw DomainError("filter: Gamma must be > 0");
}

CorrelationCurve analytic_curve(const std::vector<double>& tau_grid, const std::function<double(double)>& f) {
  CorrelationCurve out;
  out.tau = tau_grid;
  out.provenance = emitter::Provenance::analytic;
  out.values.reserve(tau_grid.size());
  for (double t : tau_grid) out.values.push_back(f(t));
  return out;
}

double incoherent_direct(double Gs, double G, double tau) {
  const double t = std::abs(tau);
  const double d2 = (Gs - G) * (Gs - G);
  const double s3 = Gs + 3.0 * G;
  const double a = G / (G - Gs);
  return 1.0 - a * a * std::exp(-Gs * t) + Gs * (Gs * Gs - 3.0 * G * Gs - 2.0 * G * G) / (d2 * s3) * std::exp(-G * t) +
         2.0 * Gs * G * (5.0 * G - Gs) / (d2 * s3) * std::exp(-(Gs + G) * t / 2.0);
}

double heitler_direct(double g, double G, double tau) {
  const double t = std::abs(tau);
  const double b = G * G * std::exp(-g * t / 2.0) - G * g * std::exp(-G * t / 2.0) - (G * G - g * g);
  const double d = G * G - g * g;
  return b * b / (d * d);
}

}  // namespace

// ---------------------------------------------------------------- incoherent

double incoherent_value(double Gamma_sigma, double Gamma, double tau) {
  require_Gamma(Gamma);
  if (!(Gamma_sigma > 0.0)) throw DomainError("filter: Gamma_sigma must be > 0");
  return bridge_removable([&](double G) { return incoherent_direct(Gamma_sigma, G, tau); }, Gamma, Gamma_sigma,
                          kBridge * Gamma_sigma);
}

double incoherent_zero_delay(double Gamma_sigma, double Gamma) {
  require_Gamma(Gamma);
  return 2.0 * Gamma_sigma / (Gamma_sigma + 3.0 * Gamma);
}

CorrelationCurve filtered_g2_incoherent(const EmitterParams& p, double Gamma, const std::vector<double>& tau_grid) {
  p.check();
  if (p.drive != emitter::DriveKind::incoherent) throw DomainError("filtered incoherent form needs incoherent drive");
  const double Gs = p.Gamma_sigma();
  return analytic_curve(tau_grid, [&](double t) { return incoherent_value(Gs, Gamma, t); });
}

Isoline filtered_g2_incoherent_isoline(const EmitterParams& p, double Gamma) {
  p.check();
  require_Gamma(Gamma);
  const double Gs = p.Gamma_sigma();
  auto f = [&](double t) { return incoherent_value(Gs, Gamma, t) - 1.0; };
  const double slow = std::min(Gs, Gamma) / 2.0;
  const double t_max = 40.0 / slow;
  const int n = 8000;
  // Deviations at this level are indistinguishable from the plateau.
  const double floor = 1e-12;

  Isoline out;
  double t_prev = 0.0;
  double f_prev = f(0.0);
  for (int i = 1; i <= n; ++i) {
    const double t = t_max * i / n;
    const double v = f(t);
    if (std::abs(v) > floor && std::abs(f_prev) > floor && (v > 0.0) != (f_prev > 0.0)) {
      double lo = t_prev, hi = t;
      double flo = f_prev;
      for (int k = 0; k < 200 && hi - lo > 1e-14 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.crossings.push_back(0.5 * (lo + hi));
    }
    if (std::abs(v) > floor) {
      t_prev = t;
      f_prev = v;
    }
  }
  if (out.crossings.empty()) return out;

  const double start = out.crossings.back();
  double best_t = start, best_v = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = start + (t_max - start) * i / n;
    const double v = f(t);
    if (std::abs(v) > std::abs(best_v)) {
      best_v = v;
      best_t = t;
    }
  }
  out.lump_tau = best_t;
  out.lump_value = 1.0 + best_v;
  return out;
}

// ------------------------------------------------------------ coherent, general

FilteredCurve filtered_g2_coherent_general(const EmitterParams& p, double Gamma, const std::vector<double>& tau_grid,
                                           AmplitudeSource source) {
  FilteredCurve out;
  out.coefficients = filtered_coefficients(p, Gamma, source);
  if (out.coefficients.degenerate) {
    out.used_fallback = true;
    out.curve = filtered_g2_numeric(p, Gamma, tau_grid);
    return out;
  }
  const FilteredCoefficients& c = out.coefficients;
  out.curve = analytic_curve(tau_grid, [&](double t) { return c.value(std::abs(t)); });
  return out;
}

double filtered_g2_coherent_zero_delay(const EmitterParams& p, double Gamma, bool printed_drive) {
  p.check();
  require_Gamma(Gamma);
  if (p.drive != emitter::DriveKind::coherent) throw DomainError("general zero-delay form needs coherent drive");
  const double G = Gamma;
  const double g = p.gamma_sigma;
  const double O = printed_drive ? p.Omega_sigma : std::sqrt(2.0) * p.Omega_sigma;
  auto y = [&](int i, int j) { return gamma_ij(i, j, G, g); };
  const double O2 = O * O, O4 = O2 * O2;
  const double y10 = y(1, 0), y01 = y(0, 1);
  const double inner = y(1, 1) * y(2, 1) * y(2, 1) * y(3, 1) * y(3, 1) * y(1, 2) * y(3, 2) +
                       4.0 * y10 * y(3, 1) *
                           (17.0 * y10 * y10 * y10 + 29.0 * y10 * y10 * y01 + 18.0 * y10 * y01 * y01 +
                            4.0 * y01 * y01 * y01) *
                           O2 +
                       48.0 * y10 * y10 * y(2, 1) * O4;
  const double num = y(1, 1) * (y01 * y01 + 4.0 * O2) * (y(1, 1) * y(1, 2) + 8.0 * O2) * inner;
  const double sq = y(1, 1) * y(1, 1) * y(1, 2) + 4.0 * y10 * O2;
  const double den = y(2, 1) * y(3, 1) * (y(1, 1) * y(2, 1) + 4.0 * O2) * (y(3, 1) * y(3, 2) + 8.0 * O2) * sq * sq;
  return num / den;
}

// -------------------------------------------------------------------- Heitler

double heitler_value(double gamma, double Gamma, double tau) {
  require_Gamma(Gamma);
  if (!(gamma > 0.0)) throw DomainError("filter: gamma_sigma must be > 0");
  return bridge_removable([&](double G) { return heitler_direct(gamma, G, tau); }, Gamma, gamma, kBridge * gamma);
}

double heitler_zero_delay(double gamma, double Gamma) {
  require_Gamma(Gamma);
  const double r = gamma / (gamma + Gamma);
  return r * r;
}

CorrelationCurve filtered_g2_heitler(const EmitterParams& p, double Gamma, const std::vector<double>& tau_grid) {
  p.check();
  const double g = p.gamma_sigma;
  return analytic_curve(tau_grid, [&](double t) { return heitler_value(g, Gamma, t); });
}

// --------------------------------------------------------------------- Mollow

std::string to_string(MollowRegime r) {
  switch (r) {
    case MollowRegime::small_gamma: return "small-Gamma";
    case MollowRegime::central: return "central";
    case MollowRegime::large_gamma: return "large-Gamma";
  }
  return "unknown";
}

MollowRegime mollow_regime_from_string(const std::string& s) {
  if (s == "small-Gamma" || s == "small") return MollowRegime::small_gamma;
  if (s == "central") return MollowRegime::central;
  if (s == "large-Gamma" || s == "large") return MollowRegime::large_gamma;
  throw DomainError("unknown Mollow regime: " + s);
}

double mollow_value(MollowRegime regime, double g, double O, double G, double tau) {
  require_Gamma(G);
  const double t = std::abs(tau);
  switch (regime) {
    case MollowRegime::small_gamma: {
      const double O2 = O * O, O4 = O2 * O2, g2 = g * g, g4 = g2 * g2, g8 = g4 * g4;
      const double a = 2.0 * g2 / O2 + 4.0 * G * (2.0 * G - g) / g2;
      const double b = (3.0 * g8 - 8.0 * G * g4 * (G + g) * O2 + 16.0 * G * G * (G * (5.0 * G - g) + g2) * O4) /
                       (8.0 * G * G * g2 * O4);
      return 1.0 + a * std::exp(-(G + g) * t / 2.0) + b * std::exp(-G * t);
    }
    case MollowRegime::central:
      return 1.0 + 2.0 * g * (2.0 * G * std::exp(-(G + g) * t / 2.0) - (G + g) * std::exp(-G * t)) /
                       ((G - g) * (3.0 * G + g));
    case MollowRegime::large_gamma: {
      const double x = G / O, x2 = x * x;
      const double D = (4.0 + x2) * (8.0 + x2) * (8.0 + x2);
      const double c = std::cos(2.0 * O * t), s = std::sin(2.0 * O * t);
      return 1.0 + 8.0 * x2 * (10.0 + x2) / D * std::exp(-G * t) -
             4.0 * x2 * (16.0 + x2) / D * std::exp(-(g + G) * t / 2.0) +
             4.0 * x2 * ((16.0 + x2) * c + x * (10.0 + x2) * s) / D * std::exp(-(3.0 * g + 2.0 * G) * t / 4.0) -
             x2 * (16.0 + x2) * c / ((8.0 + x2) * (8.0 + x2)) * std::exp(-3.0 * g * t / 4.0);
    }
  }
  return 1.0;
}

double mollow_zero_delay(MollowRegime regime, double g, double O, double G) {
  require_Gamma(G);
  switch (regime) {
    case MollowRegime::small_gamma: {
      const double O2 = O * O, O4 = O2 * O2, O6 = O4 * O2;
      const double g3 = g * g * g, g6 = g3 * g3, g9 = g6 * g3;
      const double num = (4.0 * G + g) * g9 + 12.0 * G * (2.0 * G + g) * g6 * O2 -
                         16.0 * G * G * g3 * (14.0 * G - 5.0 * g) * O4 - 192.0 * G * G * G * (2.0 * G - g) * O6;
      const double b = g3 + 4.0 * G * O2;
      return num / (g * b * b * b);
    }
    case MollowRegime::central:
      return 3.0 * (G + g) / (3.0 * G + g);
    case MollowRegime::large_gamma: {
      const double x2 = (G / O) * (G / O);
      return 8.0 * (2.0 + x2) * (16.0 + x2) / ((4.0 + x2) * (8.0 + x2) * (8.0 + x2));
    }
  }
  return 1.0;
}

MollowCurve filtered_g2_mollow_limits(const EmitterParams& p, double Gamma, const std::vector<double>& tau_grid,
                                      MollowRegime regime) {
  p.check();
  require_Gamma(Gamma);
  if (p.drive != emitter::DriveKind::coherent) throw DomainError("Mollow limits need coherent drive");
  const double g = p.gamma_sigma;
  const double O = p.Omega_sigma;
  if (O < 5.0 * g) throw DomainError("Mollow limits need Omega_sigma >= 5 gamma_sigma");

  MollowCurve out;
  bool inside = true, near = false;
  switch (regime) {
    case MollowRegime::small_gamma:
      inside = Gamma < g;
      near = Gamma > 0.1 * g;
      break;
    case MollowRegime::central:
      inside = Gamma > g && Gamma < O;
      near = Gamma < 10.0 * g || Gamma > 0.1 * O;
      break;
    case MollowRegime::large_gamma:
      inside = Gamma > O;
      near = Gamma < 10.0 * O;
      break;
  }
  if (!inside) {
    throw DomainError("Gamma lies outside the " + to_string(regime) + " Mollow regime");
  }
  if (near) out.warning = "Gamma is within a decade of the " + to_string(regime) + " regime boundary";
  out.curve = analytic_curve(tau_grid, [&](double t) { return mollow_value(regime, g, O, Gamma, t); });
  return out;
}

// ------------------------------------------------------------------ scans

std::vector<MaxBunchingRow> max_bunching_scan(const std::vector<double>& Omega_grid, double gamma, int grid_points) {
  if (Omega_grid.empty()) throw DomainError("max_bunching_scan: empty Omega grid");
  if (grid_points < 3) throw DomainError("max_bunching_scan: need at least 3 Gamma points");
  const double lo = std::log(1e-4 * gamma), hi = std::log(1e4 * gamma);
  std::vector<MaxBunchingRow> rows;
  rows.reserve(Omega_grid.size());
  for (double O : Omega_grid) {
    const EmitterParams p = EmitterParams::coherent(O, gamma);
    auto f = [&](double x) { return filtered_g2_coherent_zero_delay(p, std::exp(x)); };
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i < grid_points; ++i) {
      const double v = f(lo + (hi - lo) * i / (grid_points - 1));
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    const double step = (hi - lo) / (grid_points - 1);
    double a = lo + std::max(0, best - 1) * step;
    double b = lo + std::min(grid_points - 1, best + 1) * step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < 200 && b - a > 1e-12; ++k) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = f(d);
      }
    }
    const double x = 0.5 * (a + b);
    double v = f(x);
    double arg = std::exp(x);
    if (best_v > v) {
      v = best_v;
      arg = std::exp(lo + best * step);
    }
    rows.push_back({O, v, arg});
  }
  return rows;
}

// --------------------------------------------------------------- oracle path

CorrelationCurve filtered_g2_numeric(const EmitterParams& p, double Gamma, const std::vector<double>& tau_grid,
                                     double omega_xi) {
  require_Gamma(Gamma);
  std::vector<double> abs_grid(tau_grid.size());
  std::transform(tau_grid.begin(), tau_grid.end(), abs_grid.begin(), [](double t) { return std::abs(t); });
  if (!std::is_sorted(abs_grid.begin(), abs_grid.end())) {
    throw DomainError("filtered oracle: |tau| grid must be ascending");
  }
  auto curve = liouvillian::filtered_g2_oracle(p, Gamma, abs_grid, omega_xi);
  curve.tau = tau_grid;
  return curve;
}

}  // namespace antibunch::filter
