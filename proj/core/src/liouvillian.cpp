#include "antibunch/liouvillian.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>


namespace antibunch::liouvillian {

using emitter::DomainError;

namespace {

constexpr int kMaxDim = 64;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out = Eigen::kroneckerProduct(a, b).eval();
  return out;
}

CMatrix left(const CMatrix& a) { return kron(CMatrix::Identity(a.rows(), a.rows()), a); }

CMatrix right(const CMatrix& b) {
  return kron(b.transpose(), CMatrix::Identity(b.rows(), b.rows()));
}

CMatrix dissipator(const CMatrix& c, double rate) {
  const CMatrix cdc = c.adjoint() * c;
  return rate * (kron(c.conjugate(), c) - 0.5 * left(cdc) - 0.5 * right(cdc));
}

CMatrix hamiltonian_part(const CMatrix& h) {
  return cplx(0.0, -1.0) * (left(h) - right(h));
}

// Constant exponent shift of a superoperator in the rescaled frame.
int exponent_shift(const CMatrix& s, const std::vector<int>& e) {
  int shift = 0;
  bool seen = false;
  for (Eigen::Index a = 0; a < s.rows(); ++a) {
    for (Eigen::Index b = 0; b < s.cols(); ++b) {
      if (s(a, b) == cplx(0.0)) continue;
      const int k = e[static_cast<std::size_t>(b)] - e[static_cast<std::size_t>(a)];
      if (!seen) {
        shift = k;
        seen = true;
      } else if (k != shift) {
        throw DomainError("operator mixes sensor-occupation sectors unevenly");
      }
    }
  }
  return shift;
}

}  // namespace

double SystemSpec::epsilon() const {
  if (!sensor) return 0.0;
  if (sensor->epsilon > 0.0) return sensor->epsilon;
  return 1e-4 * std::sqrt(sensor->Gamma * emitter.gamma_sigma);
}

void SystemSpec::check() const {
  emitter.check();
  if (!sensor) return;
  if (!(sensor->Gamma > 0.0)) throw DomainError("sensor: Gamma must be > 0");
  if (sensor->epsilon < 0.0) throw DomainError("sensor: epsilon must be > 0");
  if (sensor->n_max < 2) throw DomainError("sensor: n_max must be >= 2");
  if (!std::isfinite(sensor->omega_xi)) throw DomainError("sensor: omega_xi must be finite");
  const double eps = epsilon();
  if (eps * eps > 1e-6 * sensor->Gamma * emitter.gamma_sigma * (1.0 + 1e-12)) {
    throw DomainError("sensor: epsilon^2 must not exceed 1e-6 Gamma gamma_sigma");
  }
  if (2 * (sensor->n_max + 1) > kMaxDim) throw DomainError("sensor: Hilbert dimension exceeds 64");
}

int Liouvillian::hilbert_dim() const {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

CMatrix Liouvillian::physical_matrix() const {
  CMatrix out = matrix;
  for (Eigen::Index a = 0; a < out.rows(); ++a) {
    for (Eigen::Index b = 0; b < out.cols(); ++b) {
      const int k = scale_exponent[static_cast<std::size_t>(b)] - scale_exponent[static_cast<std::size_t>(a)];
      if (k != 0) out(a, b) /= std::pow(scale, k);
    }
  }
  return out;
}

CVector Liouvillian::trace_functional() const {
  const int d = hilbert_dim();
  CVector t = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) {
    t(i + d * i) = std::pow(scale, scale_exponent[static_cast<std::size_t>(i + d * i)]);
  }
  return t;
}

CVector Liouvillian::to_physical(const CVector& scaled) const {
  CVector out = scaled;
  for (Eigen::Index a = 0; a < out.size(); ++a) out(a) *= std::pow(scale, scale_exponent[static_cast<std::size_t>(a)]);
  return out;
}

CVector Liouvillian::to_scaled(const CVector& physical) const {
  CVector out = physical;
  for (Eigen::Index a = 0; a < out.size(); ++a) out(a) /= std::pow(scale, scale_exponent[static_cast<std::size_t>(a)]);
  return out;
}

Liouvillian build_liouvillian(const SystemSpec& spec) {
  spec.check();
  const EmitterParams& p = spec.emitter;
  const int ns = spec.sensor ? spec.sensor->n_max + 1 : 1;
  const int d = 2 * ns;

  CMatrix sig2 = CMatrix::Zero(2, 2);
  sig2(0, 1) = 1.0;
  CMatrix a_n = CMatrix::Zero(ns, ns);
  for (int n = 1; n < ns; ++n) a_n(n - 1, n) = std::sqrt(static_cast<double>(n));
  const CMatrix sigma = kron(sig2, CMatrix::Identity(ns, ns));
  const CMatrix xi = kron(CMatrix::Identity(2, 2), a_n);
  const CMatrix sd = sigma.adjoint();

  CMatrix h = p.Delta_sigma * sd * sigma;
  if (p.drive == emitter::DriveKind::coherent) h += p.Omega_sigma * (sigma + sd);

  CMatrix l0 = dissipator(sigma, p.gamma_sigma);
  if (p.drive == emitter::DriveKind::incoherent && p.P_sigma > 0.0) l0 += dissipator(sd, p.P_sigma);

  Liouvillian L;
  L.dims = spec.sensor ? std::vector<int>{2, ns} : std::vector<int>{2};
  L.op_table["sigma"] = sigma;
  L.op_table["sigma_dag"] = sd;
  L.op_table["n_sigma"] = sd * sigma;
  L.scale_exponent.assign(static_cast<std::size_t>(d * d), 0);

  if (!spec.sensor) {
    L.matrix = l0 + hamiltonian_part(h);
    L.epsilon = 0.0;
    L.scale = 1.0;
    return L;
  }

  const SensorSpec& s = *spec.sensor;
  h += s.omega_xi * xi.adjoint() * xi;
  l0 += dissipator(xi, s.Gamma) + hamiltonian_part(h);
  const CMatrix v = hamiltonian_part(sd * xi + xi.adjoint() * sigma);
  const double eps = spec.epsilon();

  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      L.scale_exponent[static_cast<std::size_t>(i + d * j)] = (i % ns) + (j % ns);
    }
  }
  // Rescaled frame: entry (a, b) of the uncoupled part carries
  // eps^(e_b - e_a), which is eps^2 for sensor decay feeding lower sectors.
  // The coupling carries one more power, eps^0 for forward feeding of the
  // sensor and eps^2 for back-action.
  const double kappa = eps / std::sqrt(s.Gamma * p.gamma_sigma);
  L.matrix = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d * d; ++a) {
    for (int b = 0; b < d * d; ++b) {
      const int k = L.scale_exponent[static_cast<std::size_t>(b)] - L.scale_exponent[static_cast<std::size_t>(a)];
      cplx x = 0.0;
      if (l0(a, b) != cplx(0.0)) x += l0(a, b) * std::pow(kappa, k);
      // eps kappa^k written as (eps / kappa) kappa^(k + 1) keeps the forward
      // feeding entry exact.
      if (v(a, b) != cplx(0.0)) x += v(a, b) * (eps / kappa) * std::pow(kappa, k + 1);
      L.matrix(a, b) = x;
    }
  }
  L.epsilon = eps;
  L.scale = kappa;
  L.op_table["xi"] = xi;
  L.op_table["xi_dag"] = xi.adjoint();
  L.op_table["n_xi"] = xi.adjoint() * xi;
  return L;
}

CVector steady_state_scaled(const Liouvillian& L) {
  CVector r = numerics::null_vector(L.matrix);
  const cplx tr = L.trace_functional().transpose() * r;
  if (std::abs(tr) == 0.0) throw DomainError("steady state has zero trace");
  return r / tr;
}

CMatrix steady_state(const Liouvillian& L) {
  const int d = L.hilbert_dim();
  const CVector phys = L.to_physical(steady_state_scaled(L));
  CMatrix rho(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) rho(i, j) = phys(i + d * j);
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const auto& w = es.eigenvalues();
  if (w.minCoeff() < -1e-9) throw DomainError("steady state is not positive semidefinite");
  if (w.minCoeff() < 0.0) {
    Eigen::VectorXd clipped = w.cwiseMax(0.0);
    rho = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace();
  }
  return rho;
}

cplx expectation(const Liouvillian& L, const CMatrix& op, const CVector& scaled) {
  const int d = L.hilbert_dim();
  cplx acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const cplx o = op(j, i);
      if (o == cplx(0.0)) continue;
      const std::size_t a = static_cast<std::size_t>(i + d * j);
      acc += o * std::pow(L.scale, L.scale_exponent[a]) * scaled(static_cast<Eigen::Index>(a));
    }
  }
  return acc;
}

namespace {

// Tr(O rho) divided by eps^e_min, the smallest exponent O can reach; keeps
// both numerator and normalization O(1) in the rescaled frame.
cplx reduced_expectation(const Liouvillian& L, const CMatrix& op, const CVector& scaled, int& e_min) {
  const int d = L.hilbert_dim();
  e_min = 1 << 20;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (op(j, i) != cplx(0.0)) e_min = std::min(e_min, L.scale_exponent[static_cast<std::size_t>(i + d * j)]);
    }
  }
  cplx acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const cplx o = op(j, i);
      if (o == cplx(0.0)) continue;
      const std::size_t a = static_cast<std::size_t>(i + d * j);
      acc += o * std::pow(L.scale, L.scale_exponent[a] - e_min) * scaled(static_cast<Eigen::Index>(a));
    }
  }
  return acc;
}

}  // namespace

CorrelationCurve g2_tau(const Liouvillian& L, const std::string& op, const std::vector<double>& tau_grid) {
  auto it = L.op_table.find(op);
  if (it == L.op_table.end()) throw DomainError("g2_tau: unknown operator " + op);
  const CMatrix& A = it->second;
  const CMatrix number = A.adjoint() * A;

  const CVector rss = steady_state_scaled(L);
  int e_min = 0;
  const cplx n1 = reduced_expectation(L, number, rss, e_min);
  if (std::abs(n1) < 1e-300) throw DomainError("g2_tau: zero population");

  // A rho A^dag in the rescaled frame, with its constant eps power removed.
  const CMatrix s = kron(A.conjugate(), A);
  const int shift = exponent_shift(s, L.scale_exponent);
  const CVector rt = s * rss;

  CorrelationCurve out;
  out.tau = tau_grid;
  out.provenance = emitter::Provenance::liouvillian_oracle;
  const auto states = numerics::propagate(L.matrix, rt, tau_grid);
  const double factor = std::pow(L.scale, shift - e_min);
  out.values.reserve(tau_grid.size());
  for (const auto& v : states) {
    int e = 0;
    const cplx num = reduced_expectation(L, number, v, e);
    const cplx g = factor * num / (n1 * n1);
    out.values.push_back(g.real());
  }
  return out;
}

std::vector<double> emission_spectrum(const EmitterParams& emitter, const std::vector<double>& omega_grid,
                                      double Gamma_det) {
  if (!(Gamma_det > 0.0)) throw DomainError("emission_spectrum: detector linewidth must be > 0");
  std::vector<double> out;
  out.reserve(omega_grid.size());
  for (double w : omega_grid) {
    SystemSpec spec{emitter, SensorSpec{w, Gamma_det, 0.0, 2}};
    const Liouvillian L = build_liouvillian(spec);
    const CVector r = steady_state_scaled(L);
    int e_min = 0;
    const cplx n = reduced_expectation(L, L.op_table.at("n_xi"), r, e_min);
    // n_xi = kappa^e_min * reduced value; S = Gamma n_xi / (2 pi eps^2).
    const double ratio = L.scale / L.epsilon;
    out.push_back(Gamma_det * n.real() * ratio * ratio * std::pow(L.scale, e_min - 2) / (2.0 * std::numbers::pi));
  }
  return out;
}

CorrelationCurve filtered_g2_oracle(const EmitterParams& emitter, double Gamma, const std::vector<double>& tau_grid,
                                    double omega_xi, int n_max, double epsilon) {
  SystemSpec spec{emitter, SensorSpec{omega_xi, Gamma, epsilon, n_max}};
  return g2_tau(build_liouvillian(spec), "xi", tau_grid);
}

}  // namespace antibunch::liouvillian
