#include "antibunch/liouvillian.hpp"

#include "antibunch/emitter.hpp"
#include "antibunch/numerics.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace antibunch;
using emitter::EmitterParams;
using liouvillian::SensorSpec;
using liouvillian::SystemSpec;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("dimensions and operator table") {
  const auto bare = liouvillian::build_liouvillian({EmitterParams::incoherent(1.0), std::nullopt});
  CHECK(bare.hilbert_dim() == 2);
  CHECK(bare.matrix.rows() == 4);
  CHECK(bare.epsilon == 0.0);

  const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(1.0), SensorSpec{0.0, 1.0, 0.0, 3}});
  CHECK(L.hilbert_dim() == 8);
  CHECK(L.matrix.rows() == 64);
  for (const char* op : {"sigma", "sigma_dag", "n_sigma", "xi", "xi_dag", "n_xi"}) CHECK(L.op_table.count(op) == 1);
  CHECK(L.epsilon == doctest::Approx(1e-4));
}

TEST_CASE("invalid systems are rejected") {
  CHECK_THROWS_AS((SystemSpec{EmitterParams::coherent(1.0), SensorSpec{0.0, 1.0, 0.1, 2}}.check()),
                  emitter::DomainError);
  CHECK_THROWS_AS((SystemSpec{EmitterParams::coherent(1.0), SensorSpec{0.0, 1.0, 0.0, 1}}.check()),
                  emitter::DomainError);
  CHECK_THROWS_AS((SystemSpec{EmitterParams::coherent(1.0), SensorSpec{0.0, -1.0, 0.0, 2}}.check()),
                  emitter::DomainError);
  CHECK_THROWS_AS((SystemSpec{EmitterParams::coherent(1.0), SensorSpec{0.0, 1.0, 0.0, 40}}.check()),
                  emitter::DomainError);
}

TEST_CASE("trace is preserved") {
  for (const auto& spec : {SystemSpec{EmitterParams::incoherent(0.7), std::nullopt},
                           SystemSpec{EmitterParams::coherent(2.0, 1.0, 0.3), SensorSpec{0.5, 0.8, 0.0, 2}},
                           SystemSpec{EmitterParams::coherent(0.3), SensorSpec{0.0, 1e-3, 0.0, 3}}}) {
    const auto L = liouvillian::build_liouvillian(spec);
    const auto tr = L.trace_functional();
    const double scale = L.matrix.cwiseAbs().maxCoeff();
    CHECK((tr.transpose() * L.matrix).cwiseAbs().maxCoeff() < 1e-9 * scale);
  }
}

TEST_CASE("rescaled and physical frames describe the same generator") {
  const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(1.0), SensorSpec{0.0, 2.0, 0.0, 2}});
  const auto phys = L.physical_matrix();
  numerics::CVector v = numerics::CVector::Random(L.matrix.rows());
  const numerics::CVector lhs = L.to_physical(L.matrix * L.to_scaled(v));
  CHECK((lhs - phys * v).norm() < 1e-9 * (phys * v).norm());
}

TEST_CASE("steady state populations match the analytic values") {
  for (double P : {0.0, 0.5, 3.0}) {
    const auto rho = liouvillian::steady_state(
        liouvillian::build_liouvillian({EmitterParams::incoherent(P), std::nullopt}));
    CHECK(rho(1, 1).real() == doctest::Approx(P / (1.0 + P)).epsilon(1e-12));
  }
  for (double O : {0.1, 1.0, 5.0}) {
    const auto rho = liouvillian::steady_state(
        liouvillian::build_liouvillian({EmitterParams::coherent(O), std::nullopt}));
    CHECK(rho(1, 1).real() == doctest::Approx(4.0 * O * O / (1.0 + 8.0 * O * O)).epsilon(1e-12));
  }
}

TEST_CASE("steady state is a valid density operator") {
  const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(2.0), SensorSpec{0.0, 0.5, 0.0, 2}});
  const auto rho = liouvillian::steady_state(L);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<numerics::CMatrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("bare correlations from the engine match direct integration") {
  const auto tau = numerics::linspace(0.0, 8.0, 17);
  for (double O : {0.05, 0.3, 2.0}) {
    const auto L = liouvillian::build_liouvillian({EmitterParams::coherent(O), std::nullopt});
    const auto g = liouvillian::g2_tau(L, "sigma", tau);
    CHECK(g.provenance == emitter::Provenance::liouvillian_oracle);
    CHECK(sup_diff(g.values, oracle::bare_g2({1.0, 0.0, O, 0.0}, tau)) < 1e-9);
  }
  const auto Li = liouvillian::build_liouvillian({EmitterParams::incoherent(1.0), std::nullopt});
  CHECK(sup_diff(liouvillian::g2_tau(Li, "sigma", tau).values, oracle::bare_g2({1.0, 1.0, 0.0, 0.0}, tau)) < 1e-9);
  CHECK_THROWS(liouvillian::g2_tau(Li, "bogus", tau));
}

TEST_CASE("filtered correlations agree with direct integration of the cascaded system") {
  const std::vector<double> tau{0.0, 0.5, 1.5, 4.0};
  struct Case {
    oracle::Drive drive;
    EmitterParams params;
    double Gamma;
  };
  for (const auto& c : {Case{{1.0, 1.0, 0.0, 0.0}, EmitterParams::incoherent(1.0), 0.7},
                        Case{{1.0, 0.0, 2.0, 0.0}, EmitterParams::coherent(2.0), 3.0},
                        Case{{1.0, 0.0, 0.3, 0.0}, EmitterParams::coherent(0.3), 0.5}}) {
    const auto numeric = liouvillian::filtered_g2_oracle(c.params, c.Gamma, tau);
    const auto direct = oracle::sensor_g2(c.drive, c.Gamma, tau);
    INFO("Gamma = " << c.Gamma);
    CHECK(sup_diff(numeric.values, direct) < 1e-5);
  }
}

TEST_CASE("coupling and truncation do not change the filtered correlation") {
  const auto tau = numerics::linspace(0.0, 5.0, 11);
  const auto p = EmitterParams::coherent(1.0);
  const auto base = liouvillian::filtered_g2_oracle(p, 0.5, tau);
  const auto half = liouvillian::filtered_g2_oracle(p, 0.5, tau, 0.0, 2, 0.5e-4 * std::sqrt(0.5));
  const auto deeper = liouvillian::filtered_g2_oracle(p, 0.5, tau, 0.0, 3);
  CHECK(sup_diff(base.values, half.values) < 1e-6);
  CHECK(sup_diff(base.values, deeper.values) < 1e-6);
}

TEST_CASE("correlations relax to one") {
  const auto g = liouvillian::filtered_g2_oracle(EmitterParams::coherent(2.0), 1.0, {0.0, 50.0});
  CHECK(std::abs(g.values[1] - 1.0) < 1e-5);
}

TEST_CASE("emission spectrum integrates to the excited population") {
  const auto p = EmitterParams::coherent(2.0);
  const auto omega = numerics::linspace(-40.0, 40.0, 8001);
  const auto s = liouvillian::emission_spectrum(p, omega, 0.05);
  double integral = 0.0;
  for (std::size_t i = 1; i < omega.size(); ++i) integral += 0.5 * (s[i] + s[i - 1]) * (omega[i] - omega[i - 1]);
  const double pop = 4.0 * 4.0 / (1.0 + 8.0 * 4.0);
  // The Lorentzian detector response leaks a small tail beyond the window.
  CHECK(integral == doctest::Approx(pop).epsilon(5e-3));
  // Mollow triplet: side peaks at +-2 Omega_sigma.
  std::size_t centre = 4000;
  CHECK(s[centre] > s[centre + 100]);
  const auto peak = std::max_element(s.begin() + 4200, s.end()) - s.begin();
  CHECK(std::abs(omega[peak] - 4.0) < 0.2);
}
