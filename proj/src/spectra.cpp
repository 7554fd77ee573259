#include "cqed/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace cqed {

Index EigenSystem::column_of(int label) const {
  for (size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == label) return static_cast<Index>(j);
  }
  return -1;
}

std::vector<int> match_labels(const EigenSystem& previous, const Operator& vectors,
                              double* min_overlap) {
  const Index n = vectors.cols();
  if (previous.vectors.rows() != vectors.rows() || previous.vectors.cols() != n) {
    throw ValidationError("eigenvector tracking across different dimensions");
  }
  const Eigen::MatrixXd overlap = (previous.vectors.adjoint() * vectors).cwiseAbs();

  struct Pair {
    double value;
    Index old_col;
    Index new_col;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) pairs.push_back({overlap(i, j), i, j});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.value > b.value; });

  std::vector<int> labels(static_cast<size_t>(n), -1);
  std::vector<bool> old_used(static_cast<size_t>(n), false);
  double worst = 1.0;
  Index assigned = 0;
  for (const auto& p : pairs) {
    if (assigned == n) break;
    auto& lbl = labels[static_cast<size_t>(p.new_col)];
    if (lbl >= 0 || old_used[static_cast<size_t>(p.old_col)]) continue;
    lbl = previous.labels[static_cast<size_t>(p.old_col)];
    old_used[static_cast<size_t>(p.old_col)] = true;
    worst = std::min(worst, p.value);
    ++assigned;
  }
  if (min_overlap) *min_overlap = worst;
  return labels;
}

EigenSystem eigendecompose(const Operator& h, const EigenSystem* previous) {
  if (h.rows() != h.cols()) throw ValidationError("eigendecompose: matrix not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw ValidationError("eigendecompose: matrix not Hermitian (max|H - H^dag| = " +
                          std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  if (es.info() != Eigen::Success) throw PhysicsError("eigendecompose: solver did not converge");

  EigenSystem sys;
  sys.values = es.eigenvalues();
  sys.vectors = es.eigenvectors();
  if (previous) {
    sys.labels = match_labels(*previous, sys.vectors, &sys.min_tracking_overlap);
  } else {
    sys.labels.resize(static_cast<size_t>(sys.values.size()));
    std::iota(sys.labels.begin(), sys.labels.end(), 0);
  }
  return sys;
}

DressedDoublet dressed_states_jc(const SystemParams& params, int m, const FockCutoff& cutoff) {
  if (m < 1) throw ValidationError("dressed doublets are defined for m >= 1");
  if (m > cutoff.n_max()) throw ValidationError("dressed doublet m exceeds the Fock cutoff");
  if (!(params.g0 > 0.0)) throw ValidationError("dressed doublets need g0 > 0");

  const double delta = params.detuning();
  const double root_m = std::sqrt(static_cast<double>(m));
  DressedDoublet d;
  d.m = m;
  d.beta = std::sqrt(delta * delta + 4.0 * params.g0 * params.g0 * m);
  d.theta = std::atan((delta + d.beta) / (2.0 * params.g0 * root_m));
  const double centre = params.omega * (m - 0.5);
  d.energy_plus = centre + 0.5 * d.beta;
  d.energy_minus = centre - 0.5 * d.beta;

  const StateVector g_m = basis_state(cutoff, m, AtomLevel::ground);
  const StateVector e_m1 = basis_state(cutoff, m - 1, AtomLevel::excited);
  d.plus = std::sin(d.theta) * g_m + std::cos(d.theta) * e_m1;
  d.minus = std::cos(d.theta) * g_m - std::sin(d.theta) * e_m1;
  return d;
}

double bloch_siegert_shift(const SystemParams& params) {
  return params.g0 * params.g0 / (params.omega + params.omega0);
}

double eta_sideband_jc(const SystemParams& params, int n) {
  const double delta = params.detuning();
  return std::sqrt(delta * delta + 4.0 * params.g0 * params.g0 * (n + 1));
}

double eta_sideband_rabi(const SystemParams& params, int n) {
  const double shifted = params.detuning() - 2.0 * bloch_siegert_shift(params) * (n + 1);
  return std::sqrt(shifted * shifted + 4.0 * params.g0 * params.g0 * (n + 1));
}

double eta_adce(const SystemParams& params) { return 3.0 * params.omega - params.omega0; }

namespace {

struct Selection {
  Index column;
  double overlap;
};

Selection dominant_column(const Operator& vectors, const StateVector& state) {
  const StateVector s = state / state.norm();
  const Eigen::VectorXd weights = (vectors.adjoint() * s).cwiseAbs2();
  Index col = 0;
  const double best = weights.maxCoeff(&col);
  return {col, best};
}

}  // namespace

RefinedGap refine_resonance(const Operator& h_static, const StateVector& state_a,
                            const StateVector& state_b) {
  const EigenSystem sys = eigendecompose(h_static);
  const auto a = dominant_column(sys.vectors, state_a);
  const auto b = dominant_column(sys.vectors, state_b);
  if (a.overlap < 0.5 || b.overlap < 0.5) {
    throw PhysicsError("refine_resonance: ambiguous eigenstate (overlaps " +
                       std::to_string(a.overlap) + ", " + std::to_string(b.overlap) + ")");
  }
  if (a.column == b.column) {
    throw PhysicsError("refine_resonance: both states select the same eigenvector");
  }
  RefinedGap r;
  r.column_a = a.column;
  r.column_b = b.column;
  r.overlap_a = a.overlap;
  r.overlap_b = b.overlap;
  r.energy_a = sys.values(a.column);
  r.energy_b = sys.values(b.column);
  r.gap = std::abs(r.energy_a - r.energy_b);
  return r;
}

double drive_coupling(const Operator& h_static, const Operator& sigma_z, double epsilon,
                      const StateVector& state_a, const StateVector& state_b) {
  const auto gap = refine_resonance(h_static, state_a, state_b);
  const EigenSystem sys = eigendecompose(h_static);
  const Complex element =
      sys.vectors.col(gap.column_a).dot(sigma_z * sys.vectors.col(gap.column_b));
  return 0.25 * epsilon * std::abs(element);
}

EffectiveRate effective_rate(const SystemParams& params, int n) {
  EffectiveRate r;
  r.lambda = params.g0 * params.epsilon * std::sqrt(static_cast<double>(n + 1)) /
             (2.0 * std::abs(params.detuning()));
  r.half_transfer_time = r.lambda > 0.0 ? std::numbers::pi / (2.0 * r.lambda)
                                        : std::numeric_limits<double>::infinity();
  return r;
}

ResonanceReport resonance_report(ModelKind kind, const SystemParams& params,
                                 const FockCutoff& cutoff, int n) {
  if (n < 0 || n + 1 > cutoff.n_max()) {
    throw ValidationError("resonance manifold n must satisfy 0 <= n < n_max");
  }
  ResonanceReport r;
  r.n = n;
  r.detuning = params.detuning();
  r.bloch_siegert = bloch_siegert_shift(params);
  r.eta_r = eta_sideband_jc(params, 0);
  r.eta_sideband_jc = eta_sideband_jc(params, n);
  r.eta_sideband_rabi = eta_sideband_rabi(params, n);
  r.eta_adce = eta_adce(params);

  const Operator h = static_hamiltonian(kind, params, cutoff, params.omega0, params.g0);
  r.eta_sideband_refined = refine_resonance(h, basis_state(cutoff, n + 1, AtomLevel::ground),
                                            basis_state(cutoff, n, AtomLevel::excited))
                               .gap;
  if (kind == ModelKind::rabi && cutoff.n_max() >= 3) {
    try {
      r.eta_adce_refined = refine_resonance(h, basis_state(cutoff, 3, AtomLevel::ground),
                                            basis_state(cutoff, 0, AtomLevel::excited))
                               .gap;
    } catch (const PhysicsError&) {
      r.eta_adce_refined.reset();
    }
  }
  const auto rate = effective_rate(params, n);
  r.lambda = rate.lambda;
  r.half_transfer_time = rate.half_transfer_time;
  return r;
}

}  // namespace cqed
