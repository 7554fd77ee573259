#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cqed/dynamics.hpp"

using namespace cqed;
using Catch::Matchers::WithinAbs;

namespace {

SystemParams fig1() {
  SystemParams p;
  p.omega0 = 1.8;
  p.epsilon = 0.144;
  p.g0 = 0.05;
  p.eta = 0.80622577;
  return p;
}

Hamiltonian driven(ModelKind kind, const FockCutoff& cut) {
  const auto p = fig1();
  return Hamiltonian(kind, p, CouplingSchedule::ramp_on(p.g0, 0.0),
                     DriveSchedule::harmonic(p.omega0, p.epsilon, p.eta, 0.0), cut);
}

Hamiltonian still(const FockCutoff& cut, double g) {
  const auto p = fig1();
  return Hamiltonian(ModelKind::jaynes_cummings, p,
                     g > 0 ? CouplingSchedule::constant(g) : CouplingSchedule::zero(),
                     DriveSchedule::constant(p.omega0), cut);
}

StateVector superposition(const FockCutoff& cut) {
  StateVector psi = basis_state(cut, 0, AtomLevel::excited) + 0.7 * basis_state(cut, 1, AtomLevel::ground) +
                    Complex(0.0, 0.4) * basis_state(cut, 2, AtomLevel::ground);
  return psi / psi.norm();
}

}  // namespace

TEST_CASE("bose occupation", "[dynamics]") {
  CHECK(bose_occupation(1.0, 0.0) == 0.0);
  CHECK_THAT(bose_occupation(1.8, 5.04), WithinAbs(1.0 / std::expm1(1.8 / 5.04), 1e-14));
  CHECK_THROWS_AS(bose_occupation(1.0, -1.0), ValidationError);
}

TEST_CASE("RK4 converges at fourth order", "[dynamics]") {
  FockCutoff cut(5);
  const auto h = driven(ModelKind::rabi, cut);
  const auto rho0 = DensityMatrix::pure(superposition(cut));
  auto run = [&](double step) {
    IntegratorConfig cfg;
    cfg.step = step;
    return evolve(rho0, 0.0, 20.0, h, nullptr, cfg).final_state.matrix();
  };
  const Operator r1 = run(0.016), r2 = run(0.008), r3 = run(0.004);
  const double e1 = (r1 - r2).norm(), e2 = (r2 - r3).norm();
  const double order = std::log2(e1 / e2);
  INFO("successive differences " << e1 << " " << e2);
  CHECK(order > 3.7);
  CHECK(order < 4.3);
}

TEST_CASE("states stay physical at every sample", "[dynamics]") {
  FockCutoff cut(5);
  const auto p = fig1();
  const Operator hs = static_hamiltonian(ModelKind::jaynes_cummings, p, cut, p.omega0, 0.0);
  Liouvillian bath(hs, {{BathTarget::atom, 0.05, 5.04}, {BathTarget::cavity, 0.05, 0.0}});
  IntegratorConfig cfg;
  cfg.step = 0.015;
  cfg.sample_every = 40;
  const auto rho0 = DensityMatrix::pure(superposition(cut));
  int samples = 0;
  evolve(rho0, 0.0, 60.0, still(cut, 0.0), &bath, cfg, [&](const SampleView& s) {
    const Operator rho = s.rep->to_product(*s.rho);
    const auto d = diagnose(rho);
    CHECK(d.hermiticity_error < 1e-10);
    CHECK(d.trace_error < 1e-8);
    CHECK(d.min_eigenvalue > -1e-8);
    ++samples;
  });
  CHECK(samples == 101);
}

TEST_CASE("unitary evolution keeps the spectrum", "[dynamics]") {
  FockCutoff cut(4);
  const auto rho0 = DensityMatrix::pure(superposition(cut));
  IntegratorConfig cfg;
  cfg.step = 0.02;
  const auto r = evolve(rho0, 0.0, 30.0, driven(ModelKind::jaynes_cummings, cut), nullptr, cfg);
  const Operator& rho = r.final_state.matrix();
  CHECK(std::abs((rho * rho).trace().real() - 1.0) < 1e-9);
  CHECK(r.max_trace_drift < 1e-10);
}

TEST_CASE("atomic bath reaches detailed balance", "[dynamics]") {
  FockCutoff cut(2);
  const auto p = fig1();
  const double temperature = 2.8 * p.omega0;
  Liouvillian bath(static_hamiltonian(ModelKind::jaynes_cummings, p, cut, p.omega0, 0.0),
                   {{BathTarget::atom, 0.05, temperature}});
  IntegratorConfig cfg;
  cfg.step = 0.03;
  const auto r = evolve(DensityMatrix::pure(basis_state(cut, 0, AtomLevel::ground)), 0.0, 400.0,
                        still(cut, 0.0), &bath, cfg);
  const double pg = r.final_state.population(cut.index(0, AtomLevel::ground));
  const double pe = r.final_state.population(cut.index(0, AtomLevel::excited));
  CHECK_THAT(pe / pg, WithinAbs(std::exp(-p.omega0 / temperature), 1e-3));
}

TEST_CASE("cavity bath at zero temperature empties the mode", "[dynamics]") {
  FockCutoff cut(5);
  const auto p = fig1();
  Liouvillian bath(static_hamiltonian(ModelKind::jaynes_cummings, p, cut, p.omega0, 0.0),
                   {{BathTarget::cavity, 0.1, 0.0}});
  IntegratorConfig cfg;
  cfg.step = 0.015;
  const auto r = evolve(DensityMatrix::pure(basis_state(cut, 2, AtomLevel::ground)), 0.0, 150.0,
                        still(cut, 0.0), &bath, cfg);
  CHECK(r.final_state.population(cut.index(0, AtomLevel::ground)) > 1.0 - 1e-5);
}

TEST_CASE("drive with dissipation is rejected", "[dynamics]") {
  FockCutoff cut(2);
  const auto p = fig1();
  Liouvillian bath(static_hamiltonian(ModelKind::jaynes_cummings, p, cut, p.omega0, 0.0),
                   {{BathTarget::atom, 0.05, 1.0}});
  IntegratorConfig cfg;
  cfg.step = 0.01;
  CHECK_THROWS_AS(evolve(DensityMatrix::pure(basis_state(cut, 0, AtomLevel::ground)), 0.0, 1.0,
                         driven(ModelKind::jaynes_cummings, cut), &bath, cfg),
                  ValidationError);
}

TEST_CASE("step size is checked against the spectral bound", "[dynamics]") {
  FockCutoff cut(4);
  const auto h = driven(ModelKind::rabi, cut);
  const double bound = spectral_bound(h);
  for (double t : {0.5, 3.0, 40.0}) {
    CHECK(bound >= eigendecompose(h.at(t)).values.cwiseAbs().maxCoeff() - 1e-12);
  }
  IntegratorConfig cfg;
  cfg.step = 0.1 / bound * 1.01;
  CHECK_THROWS_AS(cfg.validate(bound), ValidationError);
  cfg.step = 0.1 / bound;
  CHECK_NOTHROW(cfg.validate(bound));
}

TEST_CASE("leakage into the top Fock layers throws", "[dynamics]") {
  FockCutoff cut(2);
  IntegratorConfig cfg;
  cfg.step = 0.02;
  const auto rho0 = DensityMatrix::pure(basis_state(cut, 2, AtomLevel::ground));
  CHECK_THROWS_AS(evolve(rho0, 0.0, 1.0, driven(ModelKind::rabi, cut), nullptr, cfg), PhysicsError);
}

TEST_CASE("Magnus propagators are unitary and agree with RK4", "[dynamics]") {
  FockCutoff cut(4);
  const auto h = driven(ModelKind::jaynes_cummings, cut);
  const auto rho0 = DensityMatrix::pure(superposition(cut));
  const auto layout = unitary_layout(h, rho0.matrix());
  CHECK(layout.size() > 1);

  const double dt = 0.02;
  const long long steps = 1000;
  const auto props = block_propagators(h, layout, 5.0, dt, steps);
  REQUIRE(props.size() == static_cast<size_t>(steps + 1));
  for (const auto& u : props.back()) {
    const Operator id = Operator::Identity(u.rows(), u.cols());
    CHECK((u.adjoint() * u - id).cwiseAbs().maxCoeff() < 1e-12);
  }

  IntegratorConfig cfg;
  cfg.step = dt;
  const Operator ref = evolve(rho0, 5.0, 5.0 + dt * steps, h, nullptr, cfg).final_state.matrix();
  const Operator u = layout.scatter(props.back());
  const Operator mag = u * rho0.matrix() * u.adjoint();
  CHECK((mag - ref).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("step_count tiles the interval", "[dynamics]") {
  CHECK(step_count(0.0, 1.0, 0.1) == 10);
  CHECK(step_count(0.0, 1.0, 0.3) == 4);
  CHECK(step_count(2.0, 2.0, 0.1) == 0);
}
