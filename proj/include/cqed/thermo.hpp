#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqed/dynamics.hpp"

namespace cqed {

/// Tr[rho H]; throws PhysicsError if the imaginary residue exceeds 1e-10.
double internal_energy(const Operator& rho, const Operator& h);

/// -sum p ln p over eigenvalues clipped at zero.
double entropy(const Operator& rho);
double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues);

/// Tr[rho dH/dt].
double instantaneous_power(const Operator& rho, const Operator& dh);

/// Running trapezoid integral over irregular samples.
class CumulativeTrapezoid {
 public:
  double add(double t, double f);
  /// Continues from a total obtained elsewhere, last integrand f at t.
  void resume(double t, double f, double total);
  double value() const noexcept { return total_; }
  bool empty() const noexcept { return !started_; }

 private:
  double t_prev_ = 0.0;
  double f_prev_ = 0.0;
  double total_ = 0.0;
  bool started_ = false;
};

/// One output sample. W, Q_a, Q_f and the power averages are cumulative
/// from the start of the stroke.
struct StrokeRow {
  double t = 0.0;
  int stroke = 0;
  double U = 0.0;
  double S = 0.0;
  double W = 0.0;
  double Q_a = 0.0;
  double Q_f = 0.0;
  double P_inst = 0.0;
  double P_av = 0.0;    // NaN at the stroke start
  double P_c_av = 0.0;  // NaN at the stroke start
  std::vector<double> populations;  // product basis, index 2n + s
};

/// State of the stroke at the sample where W was lowest, tracked at full
/// integrator resolution.
struct MinWorkPoint {
  bool found = false;
  double t = 0.0;
  double W = 0.0;
  double W_c = 0.0;
  double U = 0.0;
  std::vector<double> populations;
};

struct StrokeRecord {
  int index = 0;
  std::string label;
  bool unitary = true;
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;
  long long steps = 0;
  std::vector<StrokeRow> rows;

  double U_start = 0.0;
  double U_end = 0.0;
  double S_start = 0.0;
  double S_end = 0.0;
  double W = 0.0;
  double Q_a = 0.0;
  double Q_f = 0.0;
  double W_c = 0.0;  // integral of sum_n rho_nn dE_n/dt

  double max_entropy_drift = 0.0;  // max |S - S_start| over rows
  double min_eigenvalue = 0.0;     // smallest eigenvalue of rho over rows
  double max_leakage = 0.0;
  double max_trace_drift = 0.0;
  double min_tracking_overlap = 1.0;
  MinWorkPoint min_work;
  std::vector<std::string> warnings;
  std::optional<DensityMatrix> final_state;

  double delta_U() const noexcept { return U_end - U_start; }
  /// Delta U - W - Q_a - Q_f.
  double closure() const noexcept { return delta_U() - W - Q_a - Q_f; }
};

struct MonitorOptions {
  int stroke_index = 0;
  std::string label;
  int thin = 10;
  long long max_rows = 100000;
  /// The W minimum is searched only for t - t_start >= this offset.
  double min_search_from = 0.0;
  /// Only samples whose step index is a multiple of this are candidates.
  long long min_search_stride = 1;
};

/// H(t) repeats every `steps_per_period` integrator steps once
/// t - t_start >= settle. Unitary strokes with at least `min_periods` such
/// periods are advanced period by period (see StrokeMonitor::advance_periodic).
struct PeriodicHint {
  long long steps_per_period = 0;
  double settle = 0.0;
  long long min_periods = 64;
};

/// Sample observer that accumulates the thermodynamic record of a stroke.
/// Integrals use the trapezoid rule at every sample; rows are kept every k
/// samples with k = max(thin, ceil(samples / max_rows)) plus the last one.
/// The classical power uses per-block instantaneous eigensystems, memoized
/// by the coefficient values (Omega_t, g_t) so periodic drives reuse them.
class StrokeMonitor {
 public:
  StrokeMonitor(const Hamiltonian& h, double t_start, MonitorOptions options);

  void operator()(const SampleView& s);
  /// Continues a unitary stroke whose last sample was step `first` by
  /// whole drive periods. rho advances with the one-period propagator and
  /// the W, W_c integrals with cumulative operators precomputed over one
  /// period, so every step still enters the trapezoid sums. Rows and
  /// W-minimum candidates keep their step grid; leakage and trace are
  /// checked at period boundaries and rows.
  EvolveResult advance_periodic(const Representation& rep, const DensityMatrix& rho,
                                long long first, long long total_steps, double t0, double dt,
                                long long steps_per_period, const IntegratorConfig& cfg);

  /// Completes the record with the integrator result.
  StrokeRecord finish(const EvolveResult& result);

 private:
  struct CacheEntry {
    std::vector<std::array<Operator, Hamiltonian::kTerms>> pinched;  // per block
  };
  struct Scalars {
    double t = 0.0;
    double u = 0.0;
    double p_inst = 0.0;
    double w = 0.0;
    double qa = 0.0;
    double qf = 0.0;
    double wc = 0.0;
  };

  void initialise(const SampleView& s);
  bool is_min_candidate(long long step, double t) const;
  void emit_row(const Scalars& x, long long step, bool last, const BlockOperator& rho,
                const Representation& rep);
  const CacheEntry& eigen_entry(const Hamiltonian::Coefficients& c, double t);

  const Hamiltonian& h_;
  MonitorOptions options_;
  StrokeRecord record_;
  bool initialised_ = false;
  long long row_every_ = 1;
  std::array<BlockOperator, Hamiltonian::kTerms> terms_work_;
  CumulativeTrapezoid w_, qa_, qf_, wc_;
  std::map<std::pair<long long, long long>, CacheEntry> cache_;
  std::vector<EigenSystem> last_eigs_;
  bool have_last_eigs_ = false;
};

/// Runs evolve with a StrokeMonitor attached.
StrokeRecord record_stroke(const DensityMatrix& rho0, double t0, double t1, const Hamiltonian& h,
                           const Liouvillian* bath, const IntegratorConfig& cfg,
                           const MonitorOptions& options,
                           const std::optional<PeriodicHint>& periodic = std::nullopt);

using TimeSeries = std::vector<std::pair<double, double>>;

/// Cumulative work at the recorded rows. On unitary strokes the total is
/// checked against U_end - U_start; a mismatch above 1e-4 throws PhysicsError.
TimeSeries work(const StrokeRecord& record);
/// Cumulative heat from one bath at the recorded rows.
TimeSeries heat(const StrokeRecord& record, BathTarget target);

/// W(t) / (t - t_start). Exact at rows and at the W minimum, linear
/// interpolation of W in between. t must lie in (t_start, t_end].
double avg_quantum_power(const StrokeRecord& record, double t);
/// W_c(t) / (t - t_start), same lookup rules.
double avg_classical_power(const StrokeRecord& record, double t);

/// sum_n <E_n|rho|E_n> <E_n|dH|E_n> with E_n eigenstates of H. The
/// eigensystem is tracked against `previous` when given.
struct ClassicalPowerSample {
  double value = 0.0;
  EigenSystem eigensystem;
};
ClassicalPowerSample classical_power_integrand(const Operator& rho, const Operator& h,
                                               const Operator& dh,
                                               const EigenSystem* previous = nullptr);

/// (p_plus - p_minus) * gap.
double amplification_estimate(double p_plus, double p_minus, double gap);

}  // namespace cqed
