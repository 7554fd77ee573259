#pragma once

#include <vector>

#include "cqed/types.hpp"

namespace cqed {

enum class AtomLevel : int { ground = 0, excited = 1 };

/// Truncated joint space of a two-level atom and one cavity mode.
///
/// Basis ordering is fixed: the product state |s, n> sits at index 2n + s
/// with s = 0 for |g> and s = 1 for |e>.
class FockCutoff {
 public:
  explicit FockCutoff(int n_max);

  int n_max() const noexcept { return n_max_; }
  Index dim() const noexcept { return 2 * (static_cast<Index>(n_max_) + 1); }
  Index index(int n, AtomLevel s) const;

  bool operator==(const FockCutoff&) const = default;

 private:
  int n_max_;
};

Operator identity(const FockCutoff& cutoff);

/// a (x) 1_atom with <n-1|a|n> = sqrt(n).
Operator annihilation(const FockCutoff& cutoff);
Operator creation(const FockCutoff& cutoff);
Operator number(const FockCutoff& cutoff);

struct AtomOperators {
  Operator raise;  // |e><g|
  Operator lower;  // |g><e|
  Operator sz;     // raise*lower - lower*raise
};

AtomOperators atom_ops(const FockCutoff& cutoff);

/// a^dag a + sigma_+ sigma_-; conserved by the Jaynes-Cummings coupling.
Operator excitation_number(const FockCutoff& cutoff);

/// exp(i pi N); conserved by the Rabi coupling.
Operator parity(const FockCutoff& cutoff);

StateVector basis_state(const FockCutoff& cutoff, int n, AtomLevel s);

struct DensityTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double positivity = 1e-8;
};

struct DensityDiagnostics {
  double hermiticity_error = 0.0;  // max |rho - rho^dag|
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
};

DensityDiagnostics diagnose(const Operator& rho);

/// Hermitian, unit-trace, positive semidefinite operator. Construction
/// validates against the given tolerances and throws PhysicsError.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator rho, const DensityTolerances& tol = {});

  static DensityMatrix pure(const StateVector& psi);

  const Operator& matrix() const noexcept { return rho_; }
  Index dim() const noexcept { return rho_.rows(); }
  double population(Index i) const { return rho_(i, i).real(); }

 private:
  Operator rho_;
};

struct ThermalCavityState {
  DensityMatrix rho;
  double truncated_mass = 0.0;         // tail beyond n_max, before renormalization
  std::vector<double> photon_weights;  // renormalized p_n, n = 0..n_max
};

/// |g><g| (x) sum_n p_n |n><n| with p_n = nbar^n / (nbar+1)^(n+1), the
/// truncated tail renormalized away. Rejects tails heavier than tail_tol.
ThermalCavityState thermal_cavity_state(double mean_photons, const FockCutoff& cutoff,
                                        double tail_tol = 1e-3);

/// Ground-state population of a two-level Gibbs state (hbar = k_B = 1).
double thermal_atom_population(double omega0, double temperature);

/// Population held by the two highest retained Fock layers.
double top_fock_population(const Operator& rho, const FockCutoff& cutoff);

}  // namespace cqed
