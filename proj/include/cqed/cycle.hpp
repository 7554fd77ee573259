#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cqed/thermo.hpp"

namespace cqed {

enum class StrokeKind { hot_isochore, work_extraction, cold_isochore, reset };

std::string to_string(StrokeKind kind);
StrokeKind stroke_from_string(const std::string& name);

struct BathSettings {
  double gamma = 0.05;     // atomic bath rate
  double t_atom = 5.04;    // hot bath temperature
  double kappa = 0.05;     // cavity bath rate
  double t_cavity = 0.0;   // cold bath temperature

  bool operator==(const BathSettings&) const = default;
};

/// Step selection and output settings shared by all strokes.
///   driven strokes: dt = T/M, T = 2 pi / eta, M = max(min_steps_per_period,
///                   ceil(T * bound / 0.1))
///   isochores:      dt = min(isochore_rate_factor / rate, max_step, 0.1 / bound)
///   reset:          dt = min(max_step, 0.1 / bound)
/// where bound is the spectral bound of the stroke Hamiltonian.
struct StepPolicy {
  int min_steps_per_period = 200;
  double isochore_rate_factor = 0.02;
  double max_step = 0.05;
  double leakage_tol = 1e-3;
  bool renormalize_trace = false;
  int thin = 10;
  long long max_rows = 100000;

  void validate() const;
  bool operator==(const StepPolicy&) const = default;
};

struct StrokeSpec {
  StrokeKind kind = StrokeKind::hot_isochore;
  double duration = 0.0;
  double gamma = 0.0;  // atomic bath rate during the stroke
  double kappa = 0.0;  // cavity bath rate during the stroke

  static StrokeSpec hot_isochore(double duration, double gamma);
  static StrokeSpec work_extraction(double duration);
  static StrokeSpec cold_isochore(double duration, double kappa);
  static StrokeSpec reset(double duration);

  CouplingSchedule::Kind coupling() const;
  DriveSchedule::Kind drive() const;
  /// Bath and schedule invariants of the stroke kind.
  void validate() const;
};

struct CycleSpec {
  ModelKind model = ModelKind::jaynes_cummings;
  SystemParams params;  // params.eta is the work-stroke modulation frequency
  FockCutoff cutoff{4};
  BathSettings baths;
  std::vector<StrokeSpec> strokes;
  /// Replace the work-stroke duration by the W minimum found in
  /// [t3_window[0], t3_window[1]] * pi/(2 lambda).
  bool optimize_t3 = true;
  std::array<double, 2> t3_window{0.5, 1.5};
};

/// Standard four strokes: 10/Gamma hot isochore, pi/(2 lambda) work stroke,
/// 10/kappa cold isochore and a reset long enough for g_t to fall to 1e-8 g0.
CycleSpec otto_cycle(ModelKind model, const SystemParams& params, const FockCutoff& cutoff,
                     const BathSettings& baths);

/// Reset duration ln(1e8) / (2 g0).
double reset_duration(double g0);

/// Hamiltonian of a stroke starting at t_start.
Hamiltonian stroke_hamiltonian(const StrokeSpec& spec, const CycleSpec& cycle, double t_start);
/// Integrator step chosen by the policy for this stroke.
double stroke_step(const StrokeSpec& spec, const Hamiltonian& h, const StepPolicy& policy);

/// Evolves one stroke. Isochores are checked for convergence at the end:
/// max|rhs(rho_end)| / rate above 1e-3 adds a warning to the record.
StrokeRecord run_stroke(const DensityMatrix& rho_in, double t_start, int index,
                        const StrokeSpec& spec, const CycleSpec& cycle, const StepPolicy& policy,
                        double min_search_from = 0.0);

struct T3Result {
  double duration = 0.0;        // chosen t3 - t2
  double analytic_guess = 0.0;  // pi / (2 lambda)
  double W_min = 0.0;
  bool interior = false;        // minimum strictly inside the window and significant
  std::vector<std::string> warnings;
};

/// Scans the work stroke from rho(t2) over the window and returns the argmin
/// of W; earlier samples win ties. A minimum on the window edge or with
/// |W| < 0.02 falls back to the analytic guess with a warning.
T3Result optimize_t3_from(const DensityMatrix& rho_t2, double t2, const CycleSpec& cycle,
                          const StepPolicy& policy);
/// Same, preparing rho(t2) with the first stroke of the cycle.
T3Result optimize_t3(const CycleSpec& cycle, const StepPolicy& policy);

struct AmplificationCheck {
  double p_plus = 0.0;   // population of |1,+> at t2
  double p_minus = 0.0;  // population of |1,-> at t2
  double gap = 0.0;
  double estimate = 0.0;
};

struct CycleRecord {
  std::vector<StrokeRecord> strokes;
  std::vector<double> boundaries;  // t1, t2, t3, t4, end
  double Q_in = 0.0;
  double W_out = 0.0;
  double Q_out = 0.0;
  double W_in = 0.0;
  double U_start = 0.0;
  double U_end = 0.0;
  double final_ground_fidelity = 0.0;  // <g,0|rho_end|g,0>
  std::optional<T3Result> t3;
  std::optional<AmplificationCheck> amplification;
  std::vector<std::string> warnings;

  /// Q_in + W_out + Q_out + W_in; zero for a closed cycle.
  double cycle_sum() const noexcept { return Q_in + W_out + Q_out + W_in; }
  /// U_end - U_start - sum of all stroke W and Q.
  double first_law_residual() const;
};

/// Runs the strokes in order from |g,0>. Q_in, W_out, Q_out, W_in are taken
/// from the hot isochore, work stroke, cold isochore and reset.
CycleRecord run_otto_cycle(const CycleSpec& cycle, const StepPolicy& policy);

enum class RabiRegime { jc, adce };

std::string to_string(RabiRegime regime);
RabiRegime regime_from_string(const std::string& name);

struct RabiSettings {
  double nbar = 1.8;
  double tail_tol = 1e-3;
  /// Stroke length in units of the half-transfer time pi / (2 c).
  double window_factor = 1.15;
  std::optional<double> duration;  // overrides the window when set

  bool operator==(const RabiSettings&) const = default;
};

struct RabiResult {
  RabiRegime regime = RabiRegime::jc;
  double eta = 0.0;              // refined resonance used for the drive
  double eta_closed_form = 0.0;
  double coupling = 0.0;         // first-order drive coupling c
  double half_transfer_time = 0.0;
  double duration = 0.0;
  double truncated_mass = 0.0;
  int source_n = 3;              // |g,3>
  int target_n = 0;              // |e,target_n>
  double t_min = 0.0;            // time of the W minimum from the stroke start
  double W_min = 0.0;
  double P_av_min = 0.0;
  double P_c_av_min = 0.0;
  double source_initial = 0.0;
  double source_at_min = 0.0;
  double target_initial = 0.0;
  double target_at_min = 0.0;
  StrokeRecord record;
};

/// Work-extraction stroke of the Rabi model from |g><g| (x) thermal(nbar):
/// the jc regime drives |g,3> <-> |e,2> and the adce regime |g,3> <-> |e,0>,
/// both at the exact static gap.
RabiResult run_rabi_extraction(RabiRegime regime, const SystemParams& params,
                               const FockCutoff& cutoff, const RabiSettings& settings,
                               const StepPolicy& policy);

}  // namespace cqed
