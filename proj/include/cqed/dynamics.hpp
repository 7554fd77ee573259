#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cqed/sectors.hpp"
#include "cqed/spectra.hpp"

namespace cqed {

enum class BathTarget { atom, cavity };

std::string to_string(BathTarget target);

struct BathSpec {
  BathTarget target = BathTarget::atom;
  double rate = 0.0;         // Gamma or kappa
  double temperature = 0.0;  // in units of hbar omega / k_B
};

/// Bose occupation 1/(exp(gap/T) - 1); zero at T = 0.
double bose_occupation(double gap, double temperature);

/// One jump |to><from| of the eigenbasis dissipator with its weight
/// (rate * (n+1) downward, rate * n upward).
struct Transition {
  Index from = 0;
  Index to = 0;
  double weight = 0.0;
  BathTarget target = BathTarget::atom;
};

/// Microscopic dissipator built in the eigenbasis of a static Hamiltonian.
/// Coupling operators are (a + a^dag) for the cavity bath and sigma_x for the
/// atomic bath. Gaps within 1e-12 of each other share one occupation number;
/// zero gaps carry no dissipation.
class Liouvillian {
 public:
  Liouvillian(const Operator& h_static, std::vector<BathSpec> baths);

  const Operator& hamiltonian() const noexcept { return h_; }
  const EigenSystem& eigensystem() const noexcept { return eig_; }
  const std::vector<BathSpec>& baths() const noexcept { return baths_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  bool empty() const noexcept { return transitions_.empty(); }
  bool has(BathTarget target) const;

  /// Dissipator acting on an eigenbasis matrix; `only` restricts to one bath.
  void apply_eigen(const Operator& rho_eig, Operator& out,
                   std::optional<BathTarget> only = std::nullopt) const;
  /// Dissipator in the product basis.
  Operator apply(const Operator& rho, std::optional<BathTarget> only = std::nullopt) const;

  /// Tr[L_target(rho) H] for an eigenbasis matrix.
  double heat_rate_eigen(const Operator& rho_eig, BathTarget target) const;
  double heat_rate(const Operator& rho, BathTarget target) const;

  /// Total outgoing jump weight of each eigenlevel.
  const Eigen::VectorXd& outflow() const noexcept { return outflow_; }

 private:
  Operator h_;
  std::vector<BathSpec> baths_;
  EigenSystem eig_;
  std::vector<Transition> transitions_;
  Eigen::VectorXd outflow_;
  Eigen::VectorXd outflow_atom_;
  Eigen::VectorXd outflow_cavity_;
};

/// -i[H(t), rho] + L[rho]; only the commutator when `bath` is null.
Operator rhs(double t, const Operator& rho, const Hamiltonian& h, const Liouvillian* bath);

struct IntegratorConfig {
  double step = 0.05;
  int sample_every = 1;
  bool renormalize_trace = false;
  double leakage_tol = 1e-3;

  /// Throws ValidationError unless step > 0, sample_every >= 1 and
  /// step * spectral_bound <= 0.1.
  void validate(double spectral_bound) const;
};

/// Upper bound on max|eigenvalue of H(t)| over the schedule ranges, from
/// the corners of Omega in [Omega0 - eps, Omega0 + eps], g in [0, g0].
double spectral_bound(const Hamiltonian& h);

/// Working basis of an integration: rho_work = B^dag rho B, block-diagonal
/// in `layout`. B is the identity for unitary runs and the Liouvillian
/// eigenbasis for dissipative ones.
class Representation {
 public:
  Representation(SectorLayout layout, std::optional<Operator> basis);

  const SectorLayout& layout() const noexcept { return layout_; }
  bool is_product_basis() const noexcept { return !basis_.has_value(); }

  BlockOperator to_work(const Operator& product_op) const;
  Operator to_product(const BlockOperator& work) const;
  /// Diagonal of rho in the product basis.
  Eigen::VectorXd populations(const BlockOperator& work) const;
  double population(const BlockOperator& work, Index i) const;

 private:
  SectorLayout layout_;
  std::optional<Operator> basis_;
};

struct SampleView {
  double t = 0.0;
  long long step = 0;
  long long total_steps = 0;
  bool last = false;
  const Representation* rep = nullptr;
  const BlockOperator* rho = nullptr;
  const Liouvillian* bath = nullptr;
};

using SampleObserver = std::function<void(const SampleView&)>;

struct EvolveResult {
  DensityMatrix final_state;
  double step = 0.0;
  long long steps = 0;
  double max_leakage = 0.0;
  double max_trace_drift = 0.0;
};

/// Sector layout used for unitary runs: connected components of the
/// Hamiltonian terms and the initial state.
SectorLayout unitary_layout(const Hamiltonian& h, const Operator& rho0);

/// Block propagators U_k = U(t_begin + k dt, t_begin), k = 0..steps. Each
/// step is the fourth-order Magnus exponential at the two Gauss points, so
/// U_k is unitary to rounding.
std::vector<BlockOperator> block_propagators(const Hamiltonian& h, const SectorLayout& layout,
                                             double t_begin, double dt, long long steps);

/// Number of fixed steps of at most `step` that tile [t0, t1] exactly.
long long step_count(double t0, double t1, double step);

/// Fixed-step RK4 from t0 to t1. The step is shrunk slightly if needed so
/// that an integer number of steps covers the interval. Every
/// `sample_every` steps (and at the end) rho is Hermitized, optionally
/// renormalized, checked for leakage and trace drift, and passed to the
/// observer. Driving combined with dissipation is rejected.
EvolveResult evolve(const DensityMatrix& rho0, double t0, double t1, const Hamiltonian& h,
                    const Liouvillian* bath, const IntegratorConfig& cfg,
                    const SampleObserver& observer = {});

}  // namespace cqed
