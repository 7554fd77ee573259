#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cqed/hilbert.hpp"

using namespace cqed;
using Catch::Matchers::WithinAbs;

TEST_CASE("basis index is 2n + s", "[hilbert]") {
  FockCutoff cut(4);
  CHECK(cut.dim() == 10);
  CHECK(cut.index(0, AtomLevel::ground) == 0);
  CHECK(cut.index(0, AtomLevel::excited) == 1);
  CHECK(cut.index(3, AtomLevel::excited) == 7);
  CHECK_THROWS_AS(cut.index(5, AtomLevel::ground), std::out_of_range);
  CHECK_THROWS_AS(FockCutoff(0), ValidationError);
}

TEST_CASE("ladder operators", "[hilbert]") {
  FockCutoff cut(5);
  const Operator a = annihilation(cut);
  const Operator ad = creation(cut);
  CHECK((ad - a.adjoint()).norm() == 0.0);
  CHECK(std::abs(a(cut.index(2, AtomLevel::excited), cut.index(3, AtomLevel::excited)) -
                 std::sqrt(3.0)) < 1e-15);
  CHECK((number(cut) - ad * a).norm() < 1e-14);

  // [a, a^dag] = 1 except on the truncated top layer.
  const Operator comm = a * ad - ad * a;
  for (int n = 0; n < cut.n_max(); ++n) {
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) {
      const Index i = cut.index(n, s);
      CHECK_THAT(comm(i, i).real(), WithinAbs(1.0, 1e-14));
    }
  }
}

TEST_CASE("atom operators and conserved quantities", "[hilbert]") {
  FockCutoff cut(3);
  const auto at = atom_ops(cut);
  const Index e1 = cut.index(1, AtomLevel::excited), g1 = cut.index(1, AtomLevel::ground);
  CHECK(at.raise(e1, g1) == Complex(1.0));
  CHECK(at.sz(e1, e1).real() == 1.0);
  CHECK(at.sz(g1, g1).real() == -1.0);
  CHECK(excitation_number(cut)(e1, e1).real() == 2.0);
  CHECK(parity(cut)(e1, e1).real() == Catch::Approx(1.0));
  CHECK(parity(cut)(g1, g1).real() == Catch::Approx(-1.0));
}

TEST_CASE("density matrix validation", "[hilbert]") {
  FockCutoff cut(2);
  const auto psi = basis_state(cut, 1, AtomLevel::excited);
  const auto rho = DensityMatrix::pure(psi);
  CHECK(rho.population(cut.index(1, AtomLevel::excited)) == 1.0);

  Operator bad = rho.matrix();
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(bad), PhysicsError);

  Operator skew = Operator::Identity(cut.dim(), cut.dim()) / static_cast<double>(cut.dim());
  skew(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix(skew), PhysicsError);

  Operator negative = Operator::Zero(cut.dim(), cut.dim());
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix(negative), PhysicsError);
  CHECK(diagnose(negative).min_eigenvalue == Catch::Approx(-0.2));
}

TEST_CASE("thermal cavity state", "[hilbert]") {
  FockCutoff cut(15);
  const auto th = thermal_cavity_state(1.8, cut);
  CHECK(th.truncated_mass > 0.0);
  CHECK(th.truncated_mass < 1e-3);
  CHECK_THAT(th.rho.matrix().trace().real(), WithinAbs(1.0, 1e-14));
  // Geometric ratio p_{n+1}/p_n = nbar/(nbar+1).
  CHECK_THAT(th.photon_weights[4] / th.photon_weights[3], WithinAbs(1.8 / 2.8, 1e-12));
  CHECK(th.rho.population(cut.index(2, AtomLevel::excited)) == 0.0);
  CHECK_THROWS_AS(thermal_cavity_state(1.8, FockCutoff(4)), ValidationError);
}

TEST_CASE("thermal atom population", "[hilbert]") {
  const double p = thermal_atom_population(1.8, 2.8 * 1.8);
  CHECK_THAT(p, WithinAbs(1.0 / (1.0 + std::exp(-1.0 / 2.8)), 1e-14));
  CHECK_THAT(p, WithinAbs(0.5884, 1e-4));
}
