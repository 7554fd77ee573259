#include "cqed/hilbert.hpp"

#include <cmath>
#include <string>

namespace cqed {

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) {
    throw ValidationError("Fock cutoff n_max must be >= 1, got " + std::to_string(n_max));
  }
}

Index FockCutoff::index(int n, AtomLevel s) const {
  if (n < 0 || n > n_max_) {
    throw std::out_of_range("photon number " + std::to_string(n) + " outside [0, " +
                            std::to_string(n_max_) + "]");
  }
  return 2 * static_cast<Index>(n) + static_cast<Index>(s);
}

Operator identity(const FockCutoff& cutoff) {
  return Operator::Identity(cutoff.dim(), cutoff.dim());
}

Operator annihilation(const FockCutoff& cutoff) {
  Operator a = Operator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 1; n <= cutoff.n_max(); ++n) {
    const double amp = std::sqrt(static_cast<double>(n));
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) {
      a(cutoff.index(n - 1, s), cutoff.index(n, s)) = amp;
    }
  }
  return a;
}

Operator creation(const FockCutoff& cutoff) { return annihilation(cutoff).adjoint(); }

Operator number(const FockCutoff& cutoff) {
  Operator n_op = Operator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) {
      const Index i = cutoff.index(n, s);
      n_op(i, i) = static_cast<double>(n);
    }
  }
  return n_op;
}

AtomOperators atom_ops(const FockCutoff& cutoff) {
  AtomOperators ops;
  ops.raise = Operator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    ops.raise(cutoff.index(n, AtomLevel::excited), cutoff.index(n, AtomLevel::ground)) = 1.0;
  }
  ops.lower = ops.raise.adjoint();
  ops.sz = ops.raise * ops.lower - ops.lower * ops.raise;
  return ops;
}

Operator excitation_number(const FockCutoff& cutoff) {
  const auto atom = atom_ops(cutoff);
  return number(cutoff) + atom.raise * atom.lower;
}

Operator parity(const FockCutoff& cutoff) {
  Operator p = Operator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) {
      const Index i = cutoff.index(n, s);
      p(i, i) = ((n + static_cast<int>(s)) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return p;
}

StateVector basis_state(const FockCutoff& cutoff, int n, AtomLevel s) {
  StateVector v = StateVector::Zero(cutoff.dim());
  v(cutoff.index(n, s)) = 1.0;
  return v;
}

DensityDiagnostics diagnose(const Operator& rho) {
  DensityDiagnostics d;
  d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const Operator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

DensityMatrix::DensityMatrix(Operator rho, const DensityTolerances& tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw PhysicsError("density matrix must be square and non-empty");
  }
  const auto d = diagnose(rho_);
  if (d.hermiticity_error > tol.hermiticity) {
    throw PhysicsError("density matrix not Hermitian: max|rho - rho^dag| = " +
                       std::to_string(d.hermiticity_error));
  }
  if (d.trace_error > tol.trace) {
    throw PhysicsError("density matrix trace deviates from 1 by " + std::to_string(d.trace_error));
  }
  if (d.min_eigenvalue < -tol.positivity) {
    throw PhysicsError("density matrix not positive: min eigenvalue " +
                       std::to_string(d.min_eigenvalue));
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const StateVector v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

ThermalCavityState thermal_cavity_state(double mean_photons, const FockCutoff& cutoff,
                                        double tail_tol) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw ValidationError("mean photon number must be finite and >= 0");
  }
  const int n_max = cutoff.n_max();
  std::vector<double> weights(static_cast<size_t>(n_max) + 1);
  const double ratio = mean_photons / (mean_photons + 1.0);
  double p = 1.0 / (mean_photons + 1.0);
  double kept = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    weights[static_cast<size_t>(n)] = p;
    kept += p;
    p *= ratio;
  }
  // Closed form of the geometric tail; more accurate than 1 - kept.
  const double tail = std::pow(ratio, n_max + 1);
  if (tail > tail_tol) {
    throw ValidationError("thermal state with nbar = " + std::to_string(mean_photons) +
                          " loses " + std::to_string(tail) + " beyond n_max = " +
                          std::to_string(n_max) + " (tolerance " + std::to_string(tail_tol) +
                          ")");
  }
  Operator rho = Operator::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 0; n <= n_max; ++n) {
    auto& w = weights[static_cast<size_t>(n)];
    w /= kept;
    const Index i = cutoff.index(n, AtomLevel::ground);
    rho(i, i) = w;
  }
  return ThermalCavityState{DensityMatrix(std::move(rho)), tail, std::move(weights)};
}

double thermal_atom_population(double omega0, double temperature) {
  if (!(temperature > 0.0)) {
    throw ValidationError("atomic bath temperature must be > 0");
  }
  return 1.0 / (1.0 + std::exp(-omega0 / temperature));
}

double top_fock_population(const Operator& rho, const FockCutoff& cutoff) {
  double total = 0.0;
  for (int n = cutoff.n_max() - 1; n <= cutoff.n_max(); ++n) {
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) {
      const Index i = cutoff.index(n, s);
      total += rho(i, i).real();
    }
  }
  return total;
}

}  // namespace cqed
