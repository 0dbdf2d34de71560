#include "antibunch/noise.hpp"

#include <algorithm>
#include <cmath>

namespace antibunch::noise {

using emitter::DomainError;

NoiseSpec NoiseSpec::coherent(double xi) {
  NoiseSpec n;
  n.xi = xi;
  n.model = NoiseModel::coherent;
  n.check();
  return n;
}

NoiseSpec NoiseSpec::thermal(double xi, double gamma_n) {
  NoiseSpec n;
  n.xi = xi;
  n.model = NoiseModel::thermal;
  n.gamma_n = gamma_n;
  n.check();
  return n;
}

NoiseSpec NoiseSpec::from_curve(double xi, CorrelationCurve curve) {
  NoiseSpec n;
  n.xi = xi;
  n.model = NoiseModel::custom;
  n.custom = std::move(curve);
  n.check();
  return n;
}

void NoiseSpec::check() const {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("noise: xi must be >= 0");
  if (model == NoiseModel::thermal && !(gamma_n > 0.0)) {
    throw DomainError("noise: thermal gamma_n must be > 0");
  }
  if (model == NoiseModel::custom) {
    if (custom.tau.size() < 2) throw DomainError("noise: custom curve needs at least two points");
    custom.check();
  }
}

double noise_g2(const NoiseSpec& noise, double tau) {
  switch (noise.model) {
    case NoiseModel::coherent:
      return 1.0;
    case NoiseModel::thermal:
      return 1.0 + std::exp(-noise.gamma_n * std::abs(tau));
    case NoiseModel::custom: {
      const auto& t = noise.custom.tau;
      const auto& v = noise.custom.values;
      const double x = std::abs(tau);
      if (x < t.front() - 1e-12 || x > t.back() + 1e-12) {
        throw DomainError("noise: custom curve does not cover the signal grid");
      }
      auto it = std::upper_bound(t.begin(), t.end(), x);
      if (it == t.end()) return v.back();
      if (it == t.begin()) return v.front();
      const std::size_t i = static_cast<std::size_t>(it - t.begin());
      const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
      return (1.0 - w) * v[i - 1] + w * v[i];
    }
  }
  return 1.0;
}

double mix_value(double g2_signal, double g2_noise, double xi) {
  return (g2_signal + xi * xi * g2_noise + 2.0 * xi) / ((1.0 + xi) * (1.0 + xi));
}

CorrelationCurve mix_noise(const CorrelationCurve& signal, const NoiseSpec& noise) {
  noise.check();
  CorrelationCurve out;
  out.tau = signal.tau;
  out.provenance = signal.provenance;
  out.values.reserve(signal.values.size());
  for (std::size_t i = 0; i < signal.tau.size(); ++i) {
    out.values.push_back(mix_value(signal.values[i], noise_g2(noise, signal.tau[i]), noise.xi));
  }
  return out;
}

CorrelationCurve noise_dominated_limit(const CorrelationCurve& signal, const NoiseSpec& noise) {
  if (noise.xi < 1e3) throw DomainError("noise_dominated_limit: xi must be >= 1e3");
  return mix_noise(signal, noise);
}

}  // namespace antibunch::noise
