#include "cqed/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cqed {

std::string to_string(StrokeKind kind) {
  switch (kind) {
    case StrokeKind::hot_isochore:
      return "hot_isochore";
    case StrokeKind::work_extraction:
      return "work_extraction";
    case StrokeKind::cold_isochore:
      return "cold_isochore";
    case StrokeKind::reset:
      return "reset";
  }
  return "unknown";
}

StrokeKind stroke_from_string(const std::string& name) {
  for (auto k : {StrokeKind::hot_isochore, StrokeKind::work_extraction, StrokeKind::cold_isochore,
                 StrokeKind::reset}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown stroke kind '" + name + "'");
}

void StepPolicy::validate() const {
  if (min_steps_per_period < 2) throw ValidationError("min_steps_per_period must be >= 2");
  if (!(isochore_rate_factor > 0.0)) throw ValidationError("isochore_rate_factor must be > 0");
  if (!(max_step > 0.0)) throw ValidationError("max_step must be > 0");
  if (!(leakage_tol > 0.0)) throw ValidationError("leakage_tol must be > 0");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  if (max_rows < 2) throw ValidationError("max_rows must be >= 2");
}

StrokeSpec StrokeSpec::hot_isochore(double duration, double gamma) {
  return {StrokeKind::hot_isochore, duration, gamma, 0.0};
}
StrokeSpec StrokeSpec::work_extraction(double duration) {
  return {StrokeKind::work_extraction, duration, 0.0, 0.0};
}
StrokeSpec StrokeSpec::cold_isochore(double duration, double kappa) {
  return {StrokeKind::cold_isochore, duration, 0.0, kappa};
}
StrokeSpec StrokeSpec::reset(double duration) { return {StrokeKind::reset, duration, 0.0, 0.0}; }

CouplingSchedule::Kind StrokeSpec::coupling() const {
  switch (kind) {
    case StrokeKind::hot_isochore:
      return CouplingSchedule::Kind::zero;
    case StrokeKind::work_extraction:
      return CouplingSchedule::Kind::ramp_on;
    case StrokeKind::cold_isochore:
      return CouplingSchedule::Kind::constant;
    case StrokeKind::reset:
      return CouplingSchedule::Kind::ramp_off;
  }
  return CouplingSchedule::Kind::zero;
}

DriveSchedule::Kind StrokeSpec::drive() const {
  return kind == StrokeKind::work_extraction ? DriveSchedule::Kind::harmonic
                                             : DriveSchedule::Kind::constant;
}

void StrokeSpec::validate() const {
  const std::string name = to_string(kind);
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError(name + ": duration must be finite and > 0");
  }
  if (gamma < 0.0 || kappa < 0.0) throw ValidationError(name + ": bath rates must be >= 0");
  switch (kind) {
    case StrokeKind::hot_isochore:
      if (!(gamma > 0.0) || kappa != 0.0) throw ValidationError(name + " needs Gamma > 0, kappa = 0");
      break;
    case StrokeKind::cold_isochore:
      if (gamma != 0.0 || !(kappa > 0.0)) throw ValidationError(name + " needs Gamma = 0, kappa > 0");
      break;
    case StrokeKind::work_extraction:
    case StrokeKind::reset:
      if (gamma != 0.0 || kappa != 0.0) throw ValidationError(name + " must be bath-free");
      break;
  }
}

double reset_duration(double g0) {
  if (!(g0 > 0.0)) throw ValidationError("reset stroke needs g0 > 0");
  return std::log(1e8) / (2.0 * g0);
}

CycleSpec otto_cycle(ModelKind model, const SystemParams& params, const FockCutoff& cutoff,
                     const BathSettings& baths) {
  if (!(baths.gamma > 0.0) || !(baths.kappa > 0.0)) {
    throw ValidationError("Otto cycle needs Gamma > 0 and kappa > 0");
  }
  const auto rate = effective_rate(params, 0);
  if (!(rate.lambda > 0.0)) throw ValidationError("Otto cycle needs epsilon > 0 and g0 > 0");
  CycleSpec c;
  c.model = model;
  c.params = params;
  c.cutoff = cutoff;
  c.baths = baths;
  c.strokes = {StrokeSpec::hot_isochore(10.0 / baths.gamma, baths.gamma),
               StrokeSpec::work_extraction(rate.half_transfer_time),
               StrokeSpec::cold_isochore(10.0 / baths.kappa, baths.kappa),
               StrokeSpec::reset(reset_duration(params.g0))};
  return c;
}

Hamiltonian stroke_hamiltonian(const StrokeSpec& spec, const CycleSpec& cycle, double t_start) {
  const auto& p = cycle.params;
  CouplingSchedule g = CouplingSchedule::zero();
  switch (spec.coupling()) {
    case CouplingSchedule::Kind::zero:
      break;
    case CouplingSchedule::Kind::constant:
      g = CouplingSchedule::constant(p.g0);
      break;
    case CouplingSchedule::Kind::ramp_on:
      g = CouplingSchedule::ramp_on(p.g0, t_start);
      break;
    case CouplingSchedule::Kind::ramp_off:
      g = CouplingSchedule::ramp_off(p.g0, t_start);
      break;
  }
  const DriveSchedule drive = spec.drive() == DriveSchedule::Kind::harmonic
                                  ? DriveSchedule::harmonic(p.omega0, p.epsilon, p.eta, t_start)
                                  : DriveSchedule::constant(p.omega0);
  return Hamiltonian(cycle.model, p, g, drive, cycle.cutoff);
}

namespace {

bool periodic_drive(const Hamiltonian& h) {
  return h.drive().kind() == DriveSchedule::Kind::harmonic && h.drive().eta() > 0.0 &&
         h.drive().epsilon() > 0.0;
}

/// Steps per drive period, rounded up to an even number so that the drive
/// nodes (sin = 0) fall on the sample grid.
long long steps_per_period(const Hamiltonian& h, const StepPolicy& policy) {
  const double period = 2.0 * std::numbers::pi / h.drive().eta();
  long long m = std::max<long long>(policy.min_steps_per_period,
                                    static_cast<long long>(std::ceil(period * spectral_bound(h) / 0.1)));
  if (m % 2 != 0) ++m;
  return m;
}

}  // namespace

double stroke_step(const StrokeSpec& spec, const Hamiltonian& h, const StepPolicy& policy) {
  const double stable = 0.1 / spectral_bound(h);
  switch (spec.kind) {
    case StrokeKind::work_extraction:
      if (periodic_drive(h)) {
        return 2.0 * std::numbers::pi / h.drive().eta() /
               static_cast<double>(steps_per_period(h, policy));
      }
      return std::min(policy.max_step, stable);
    case StrokeKind::hot_isochore:
    case StrokeKind::cold_isochore:
      return std::min({policy.isochore_rate_factor / std::max(spec.gamma, spec.kappa),
                       policy.max_step, stable});
    case StrokeKind::reset:
      return std::min(policy.max_step, stable);
  }
  return stable;
}

StrokeRecord run_stroke(const DensityMatrix& rho_in, double t_start, int index,
                        const StrokeSpec& spec, const CycleSpec& cycle, const StepPolicy& policy,
                        double min_search_from) {
  spec.validate();
  policy.validate();
  const Hamiltonian h = stroke_hamiltonian(spec, cycle, t_start);

  std::optional<Liouvillian> bath;
  if (spec.kind == StrokeKind::hot_isochore) {
    bath.emplace(h.at(t_start),
                 std::vector<BathSpec>{{BathTarget::atom, spec.gamma, cycle.baths.t_atom}});
  } else if (spec.kind == StrokeKind::cold_isochore) {
    bath.emplace(h.at(t_start),
                 std::vector<BathSpec>{{BathTarget::cavity, spec.kappa, cycle.baths.t_cavity}});
  }

  IntegratorConfig cfg;
  cfg.step = stroke_step(spec, h, policy);
  cfg.renormalize_trace = policy.renormalize_trace;
  cfg.leakage_tol = policy.leakage_tol;

  MonitorOptions mon;
  mon.stroke_index = index;
  mon.label = to_string(spec.kind);
  mon.thin = policy.thin;
  mon.max_rows = policy.max_rows;
  mon.min_search_from = min_search_from;

  double t_end = t_start + spec.duration;
  std::optional<PeriodicHint> periodic;
  if (periodic_drive(h)) {
    // Whole steps, so that sample phases repeat from one period to the next.
    const long long n = std::max<long long>(1, std::llround(spec.duration / cfg.step));
    t_end = t_start + static_cast<double>(n) * cfg.step;
    PeriodicHint hint;
    hint.steps_per_period = steps_per_period(h, policy);
    if (h.coupling().kind() == CouplingSchedule::Kind::ramp_on) {
      hint.settle = std::log(1e15) / (2.0 * h.coupling().g0());
    }
    periodic = hint;
  }
  StrokeRecord record = record_stroke(rho_in, t_start, t_end, h, bath ? &*bath : nullptr, cfg,
                                      mon, periodic);

  if (bath) {
    const double rate = std::max(spec.gamma, spec.kappa);
    const Operator r = rhs(record.t_end, record.final_state->matrix(), h, &*bath);
    const double residual = r.cwiseAbs().maxCoeff() / rate;
    if (residual > 1e-3) {
      record.warnings.push_back(mon.label + " not converged: max|drho/dt| / rate = " +
                                std::to_string(residual));
    }
  }
  return record;
}

T3Result optimize_t3_from(const DensityMatrix& rho_t2, double t2, const CycleSpec& cycle,
                          const StepPolicy& policy) {
  const auto rate = effective_rate(cycle.params, 0);
  if (!(rate.lambda > 0.0)) throw ValidationError("optimize_t3 needs epsilon > 0 and g0 > 0");
  const double lo = cycle.t3_window[0] * rate.half_transfer_time;
  double hi = cycle.t3_window[1] * rate.half_transfer_time;
  if (!(lo >= 0.0) || !(hi > lo)) throw ValidationError("t3 window must satisfy 0 <= lo < hi");

  StrokeSpec spec = StrokeSpec::work_extraction(hi);
  const Hamiltonian h = stroke_hamiltonian(spec, cycle, t2);
  const long long stride = periodic_drive(h) ? steps_per_period(h, policy) / 2 : 1;

  IntegratorConfig cfg;
  cfg.step = stroke_step(spec, h, policy);
  // The scan runs on the same grid as the final stroke, so its end is a
  // whole number of strides.
  hi = std::ceil(hi / (static_cast<double>(stride) * cfg.step) - 1e-9) *
       static_cast<double>(stride) * cfg.step;
  spec.duration = hi;
  cfg.renormalize_trace = policy.renormalize_trace;
  cfg.leakage_tol = policy.leakage_tol;
  MonitorOptions mon;
  mon.stroke_index = 2;
  mon.label = to_string(spec.kind);
  mon.thin = policy.thin;
  mon.max_rows = policy.max_rows;
  mon.min_search_from = lo;
  // Candidates sit on drive nodes, where Omega_t = Omega0 and the cold
  // isochore can follow without a sudden change of H.
  mon.min_search_stride = stride;
  const StrokeRecord record = record_stroke(rho_t2, t2, t2 + hi, h, nullptr, cfg, mon);

  T3Result out;
  out.analytic_guess = rate.half_transfer_time;
  const auto& m = record.min_work;
  const double stride_time = static_cast<double>(mon.min_search_stride) * record.step;
  out.W_min = m.W;
  const double found = static_cast<double>(std::llround((m.t - t2) / record.step)) * record.step;
  const bool at_lo = found < lo + stride_time * (1.0 - 1e-9);
  const bool at_hi = found > hi - stride_time * (1.0 - 1e-9);
  if (!m.found || at_lo || at_hi) {
    out.warnings.push_back("W minimum lies on the edge of the t3 window; using pi/(2 lambda)");
  }
  if (std::abs(m.W) < 0.02) {
    out.warnings.push_back("no significant work minimum in the t3 window (|W| = " +
                           std::to_string(std::abs(m.W)) + "); using pi/(2 lambda)");
  }
  out.interior = out.warnings.empty();
  out.duration = out.interior ? found : out.analytic_guess;
  return out;
}

T3Result optimize_t3(const CycleSpec& cycle, const StepPolicy& policy) {
  if (cycle.strokes.empty() || cycle.strokes.front().kind != StrokeKind::hot_isochore) {
    throw ValidationError("optimize_t3 expects the cycle to start with the hot isochore");
  }
  const FockCutoff& cut = cycle.cutoff;
  const auto ground = DensityMatrix::pure(basis_state(cut, 0, AtomLevel::ground));
  const StrokeRecord hot = run_stroke(ground, 0.0, 1, cycle.strokes.front(), cycle, policy);
  return optimize_t3_from(*hot.final_state, hot.t_end, cycle, policy);
}

double CycleRecord::first_law_residual() const {
  double total = 0.0;
  for (const auto& s : strokes) total += s.W + s.Q_a + s.Q_f;
  return U_end - U_start - total;
}

namespace {

AmplificationCheck dressed_populations(const Operator& rho, const CycleSpec& cycle) {
  const auto& p = cycle.params;
  const Operator h = static_hamiltonian(cycle.model, p, cycle.cutoff, p.omega0, p.g0);
  const StateVector e0 = basis_state(cycle.cutoff, 0, AtomLevel::excited);
  const StateVector g1 = basis_state(cycle.cutoff, 1, AtomLevel::ground);
  const RefinedGap gap = refine_resonance(h, e0, g1);
  const EigenSystem es = eigendecompose(h);
  AmplificationCheck a;
  const auto vp = es.vectors.col(gap.column_a);
  const auto vm = es.vectors.col(gap.column_b);
  a.p_plus = std::clamp(vp.dot(rho * vp).real(), 0.0, 1.0);
  a.p_minus = std::clamp(vm.dot(rho * vm).real(), 0.0, 1.0);
  a.gap = gap.energy_a - gap.energy_b;
  a.estimate = amplification_estimate(a.p_plus, a.p_minus, std::abs(a.gap));
  return a;
}

}  // namespace

CycleRecord run_otto_cycle(const CycleSpec& cycle, const StepPolicy& policy) {
  if (cycle.strokes.empty()) throw ValidationError("cycle has no strokes");
  CycleRecord out;
  out.warnings = validate(cycle.params, cycle.cutoff);

  DensityMatrix rho = DensityMatrix::pure(basis_state(cycle.cutoff, 0, AtomLevel::ground));
  double t = 0.0;
  int index = 0;
  for (StrokeSpec spec : cycle.strokes) {
    ++index;
    if (spec.kind == StrokeKind::work_extraction) {
      out.amplification = dressed_populations(rho.matrix(), cycle);
      if (cycle.optimize_t3) {
        out.t3 = optimize_t3_from(rho, t, cycle, policy);
        spec.duration = out.t3->duration;
        for (const auto& w : out.t3->warnings) out.warnings.push_back(w);
      }
    }
    out.boundaries.push_back(t);
    StrokeRecord rec = run_stroke(rho, t, index, spec, cycle, policy);
    for (const auto& w : rec.warnings) out.warnings.push_back(w);
    switch (spec.kind) {
      case StrokeKind::hot_isochore:
        out.Q_in += rec.Q_a + rec.Q_f;
        break;
      case StrokeKind::work_extraction:
        out.W_out += rec.W;
        break;
      case StrokeKind::cold_isochore:
        out.Q_out += rec.Q_a + rec.Q_f;
        break;
      case StrokeKind::reset:
        out.W_in += rec.W;
        break;
    }
    t = rec.t_end;
    rho = *rec.final_state;
    out.strokes.push_back(std::move(rec));
  }
  out.boundaries.push_back(t);
  out.U_start = out.strokes.front().U_start;
  out.U_end = out.strokes.back().U_end;
  out.final_ground_fidelity = rho.population(cycle.cutoff.index(0, AtomLevel::ground));
  return out;
}

std::string to_string(RabiRegime regime) { return regime == RabiRegime::jc ? "jc" : "adce"; }

RabiRegime regime_from_string(const std::string& name) {
  if (name == "jc") return RabiRegime::jc;
  if (name == "adce") return RabiRegime::adce;
  throw ValidationError("unknown regime '" + name + "' (expected jc or adce)");
}

RabiResult run_rabi_extraction(RabiRegime regime, const SystemParams& params,
                               const FockCutoff& cutoff, const RabiSettings& settings,
                               const StepPolicy& policy) {
  if (cutoff.n_max() < 4) throw ValidationError("Rabi extraction needs n_max >= 4");
  if (!(settings.window_factor > 0.0)) throw ValidationError("window_factor must be > 0");
  std::vector<std::string> warnings = validate(params, cutoff);

  RabiResult out;
  out.regime = regime;
  out.source_n = 3;
  out.target_n = regime == RabiRegime::jc ? 2 : 0;

  const Operator h_static = static_hamiltonian(ModelKind::rabi, params, cutoff, params.omega0, params.g0);
  const StateVector source = basis_state(cutoff, out.source_n, AtomLevel::ground);
  const StateVector target = basis_state(cutoff, out.target_n, AtomLevel::excited);
  out.eta = refine_resonance(h_static, source, target).gap;
  out.eta_closed_form = regime == RabiRegime::jc ? eta_sideband_rabi(params, out.target_n)
                                                 : eta_adce(params);
  out.coupling = drive_coupling(h_static, atom_ops(cutoff).sz, params.epsilon, source,
                                target);
  out.half_transfer_time = out.coupling > 0.0 ? std::numbers::pi / (2.0 * out.coupling)
                                              : std::numeric_limits<double>::infinity();
  if (settings.duration) {
    out.duration = *settings.duration;
  } else if (std::isfinite(out.half_transfer_time)) {
    out.duration = settings.window_factor * out.half_transfer_time;
  } else {
    throw ValidationError("no drive coupling between the selected states; set an explicit duration");
  }

  const ThermalCavityState thermal = thermal_cavity_state(settings.nbar, cutoff, settings.tail_tol);
  out.truncated_mass = thermal.truncated_mass;

  CycleSpec cycle;
  cycle.model = ModelKind::rabi;
  cycle.params = params;
  cycle.params.eta = out.eta;
  cycle.cutoff = cutoff;
  out.record = run_stroke(thermal.rho, 0.0, 1, StrokeSpec::work_extraction(out.duration), cycle, policy);
  for (auto& w : warnings) out.record.warnings.push_back(std::move(w));

  const auto& m = out.record.min_work;
  const Index src = cutoff.index(out.source_n, AtomLevel::ground);
  const Index dst = cutoff.index(out.target_n, AtomLevel::excited);
  out.source_initial = thermal.rho.population(src);
  out.target_initial = thermal.rho.population(dst);
  out.t_min = m.t - out.record.t_start;
  out.W_min = m.W;
  if (out.t_min > 0.0) {
    out.P_av_min = m.W / out.t_min;
    out.P_c_av_min = m.W_c / out.t_min;
  }
  out.source_at_min = m.populations.at(static_cast<size_t>(src));
  out.target_at_min = m.populations.at(static_cast<size_t>(dst));
  return out;
}

}  // namespace cqed
