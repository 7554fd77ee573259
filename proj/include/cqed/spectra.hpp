#pragma once

#include <optional>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
/// `labels[j]` is a persistent identity for column j: when a decomposition
/// is computed relative to a previous one, each column inherits the label
/// of the previous eigenvector it overlaps most with.
struct EigenSystem {
  Eigen::VectorXd values;
  Operator vectors;
  std::vector<int> labels;
  double min_tracking_overlap = 1.0;  // smallest matched |<v_old|v_new>|

  Index size() const noexcept { return values.size(); }
  /// Column currently carrying `label`, or -1.
  Index column_of(int label) const;
};

/// Full Hermitian eigendecomposition. With `previous`, labels are assigned
/// by greedy maximal-overlap matching against the previous eigenvectors.
/// Throws ValidationError for non-Hermitian input.
EigenSystem eigendecompose(const Operator& h, const EigenSystem* previous = nullptr);

/// Labels for `vectors` matched against `previous`; writes the smallest
/// matched overlap to `min_overlap`.
std::vector<int> match_labels(const EigenSystem& previous, const Operator& vectors,
                              double* min_overlap = nullptr);

/// Dressed m-excitation doublet of the static JC Hamiltonian.
struct DressedDoublet {
  int m = 1;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  StateVector plus;   // sin(theta)|g,m> + cos(theta)|e,m-1>
  StateVector minus;  // cos(theta)|g,m> - sin(theta)|e,m-1>
};

DressedDoublet dressed_states_jc(const SystemParams& params, int m, const FockCutoff& cutoff);

/// Bloch-Siegert shift g0^2 / (omega + omega0).
double bloch_siegert_shift(const SystemParams& params);

/// sqrt(Delta^2 + 4 g0^2 (n+1)): red-sideband resonance |g,n+1> <-> |e,n>.
double eta_sideband_jc(const SystemParams& params, int n);

/// Red-sideband resonance with the counter-rotating correction.
double eta_sideband_rabi(const SystemParams& params, int n);

/// Leading-order ADCE resonance 3 omega - omega0 for |g,n> <-> |e,n-3>.
double eta_adce(const SystemParams& params);

struct RefinedGap {
  double gap = 0.0;  // |E_a - E_b|
  double energy_a = 0.0;
  double energy_b = 0.0;
  Index column_a = -1;
  Index column_b = -1;
  double overlap_a = 0.0;  // |<a|v>|^2 for the selected eigenvector
  double overlap_b = 0.0;
};

/// Exact gap between the eigenvectors of `h_static` dominated by the two
/// given states. Throws PhysicsError if either overlap is below 1/2 or both
/// states select the same eigenvector.
RefinedGap refine_resonance(const Operator& h_static, const StateVector& state_a,
                            const StateVector& state_b);

/// Effective first-order drive coupling between the dressed states selected
/// by a and b: (epsilon/4) |<A|sigma_z|B>|. Full transfer takes pi/(2c).
double drive_coupling(const Operator& h_static, const Operator& sigma_z, double epsilon,
                      const StateVector& state_a, const StateVector& state_b);

struct EffectiveRate {
  double lambda = 0.0;
  double half_transfer_time = 0.0;  // pi / (2 lambda); infinite when lambda = 0
};

/// lambda = g0 epsilon sqrt(n+1) / (2 |Delta|).
EffectiveRate effective_rate(const SystemParams& params, int n);

struct ResonanceReport {
  int n = 0;
  double detuning = 0.0;
  double bloch_siegert = 0.0;
  double eta_r = 0.0;               // JC closed form at n = 0
  double eta_sideband_jc = 0.0;     // JC closed form at n
  double eta_sideband_rabi = 0.0;   // Rabi closed form at n
  double eta_sideband_refined = 0.0;  // exact gap |g,n+1> <-> |e,n>, configured model
  double eta_adce = 0.0;            // 3 omega - omega0
  std::optional<double> eta_adce_refined;  // exact Rabi gap |g,3> <-> |e,0>
  double lambda = 0.0;
  double half_transfer_time = 0.0;
};

ResonanceReport resonance_report(ModelKind kind, const SystemParams& params,
                                 const FockCutoff& cutoff, int n);

}  // namespace cqed
