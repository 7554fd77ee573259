#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cqed/model.hpp"

using namespace cqed;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

SystemParams fig1() {
  SystemParams p;
  p.omega0 = 1.8;
  p.epsilon = 0.144;
  p.g0 = 0.05;
  p.eta = 0.806;
  return p;
}

}  // namespace

TEST_CASE("parameter validation names the broken condition", "[model]") {
  FockCutoff cut(4);
  CHECK(validate(fig1(), cut).empty());

  auto p = fig1();
  p.g0 = 0.5;
  CHECK_THROWS_WITH(validate(p, cut), ContainsSubstring("weak coupling violated"));

  p = fig1();
  p.epsilon = 0.6;
  CHECK_THROWS_WITH(validate(p, cut), ContainsSubstring("weak modulation violated"));

  p = fig1();
  p.omega0 = 1.1;
  CHECK_THROWS_WITH(validate(p, cut), ContainsSubstring("dispersive condition violated"));

  p = fig1();
  p.epsilon = 0.3;  // 1/6 of omega0: allowed but marginal
  CHECK(validate(p, cut).size() == 1);

  CHECK_THROWS_AS(model_from_string("dicke"), ValidationError);
  CHECK(model_from_string("rabi") == ModelKind::rabi);
}

TEST_CASE("coupling schedules", "[model]") {
  const double g0 = 0.05;
  const auto on = CouplingSchedule::ramp_on(g0, 10.0);
  CHECK(on.value(5.0) == 0.0);
  CHECK(on.value(10.0) == 0.0);
  CHECK_THAT(on.value(20.0), WithinAbs(g0 * (1.0 - std::exp(-1.0)), 1e-15));
  CHECK_THAT(on.rate(20.0), WithinAbs(2.0 * g0 * g0 * std::exp(-1.0), 1e-15));

  const auto off = CouplingSchedule::ramp_off(g0, 10.0);
  CHECK(off.value(0.0) == g0);
  CHECK_THAT(off.value(20.0), WithinAbs(g0 * std::exp(-1.0), 1e-15));
  CHECK_THAT(off.rate(20.0), WithinAbs(-2.0 * g0 * g0 * std::exp(-1.0), 1e-15));

  CHECK(CouplingSchedule::constant(g0).rate(3.0) == 0.0);
}

TEST_CASE("drive schedule", "[model]") {
  const auto d = DriveSchedule::harmonic(1.8, 0.144, 0.8, 100.0);
  CHECK(d.value(100.0) == 1.8);
  CHECK_THAT(d.value(100.0 + M_PI / 1.6), WithinAbs(1.944, 1e-14));
  CHECK_THAT(d.rate(100.0), WithinAbs(0.144 * 0.8, 1e-15));
}

TEST_CASE("dH/dt matches a central difference", "[model]") {
  FockCutoff cut(4);
  const auto p = fig1();
  const auto g = CouplingSchedule::ramp_on(p.g0, 0.0);
  const auto drive = DriveSchedule::harmonic(p.omega0, p.epsilon, p.eta, 0.0);
  for (auto kind : {ModelKind::jaynes_cummings, ModelKind::rabi}) {
    for (double t : {0.3, 7.0, 41.5}) {
      const double h = 1e-5;
      auto H = [&](double s) {
        return kind == ModelKind::rabi ? hamiltonian_rabi(p, g, drive, cut, s)
                                       : hamiltonian_jc(p, g, drive, cut, s);
      };
      const Operator fd = (H(t + h) - H(t - h)) / (2.0 * h);
      const Operator exact = dh_dt(kind, p, g, drive, cut, t);
      CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("JC conserves excitation number, Rabi conserves parity", "[model]") {
  FockCutoff cut(5);
  auto p = fig1();
  const Operator hjc = static_hamiltonian(ModelKind::jaynes_cummings, p, cut, 1.9, 0.05);
  const Operator hr = static_hamiltonian(ModelKind::rabi, p, cut, 1.9, 0.05);
  const Operator N = excitation_number(cut);
  const Operator P = parity(cut);
  CHECK((hjc * N - N * hjc).norm() < 1e-13);
  CHECK((hr * P - P * hr).norm() < 1e-13);
  CHECK((hr * N - N * hr).norm() > 1e-3);
  CHECK((hjc - hjc.adjoint()).norm() == 0.0);
}

TEST_CASE("Hamiltonian terms recombine to the full operator", "[model]") {
  FockCutoff cut(4);
  const auto p = fig1();
  Hamiltonian h(ModelKind::rabi, p, CouplingSchedule::ramp_on(p.g0, 2.0),
                DriveSchedule::harmonic(p.omega0, p.epsilon, p.eta, 2.0), cut);
  const double t = 13.7;
  const Operator direct = hamiltonian_rabi(p, h.coupling(), h.drive(), cut, t);
  CHECK((h.at(t) - direct).norm() < 1e-13);
  CHECK_FALSE(h.is_static());
}
