// Admixture of independent background light with an emitter signal.
#pragma once

#include "antibunch/emitter.hpp"

#include <vector>

namespace antibunch::noise {

using emitter::CorrelationCurve;

enum class NoiseModel { coherent, thermal, custom };

struct NoiseSpec {
  double xi = 0.0;  // noise-to-signal intensity ratio
  NoiseModel model = NoiseModel::coherent;
  double gamma_n = 1.0;  // inverse coherence time of thermal noise
  CorrelationCurve custom;

  static NoiseSpec coherent(double xi);
  static NoiseSpec thermal(double xi, double gamma_n = 1.0);
  static NoiseSpec from_curve(double xi, CorrelationCurve curve);

  void check() const;
};

// Second-order correlation of the noise itself at delay tau.
double noise_g2(const NoiseSpec& noise, double tau);

// (g2 + xi^2 g2' + 2 xi) / (1 + xi)^2 at a single delay.
double mix_value(double g2_signal, double g2_noise, double xi);

CorrelationCurve mix_noise(const CorrelationCurve& signal, const NoiseSpec& noise);

// mix_noise with a dominant noise fraction (xi >= 1e3).
CorrelationCurve noise_dominated_limit(const CorrelationCurve& signal, const NoiseSpec& noise);

}  // namespace antibunch::noise
