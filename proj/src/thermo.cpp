#include "cqed/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCacheQuantum = 1e-10;
constexpr size_t kCacheCapacity = 4096;
constexpr double kTrackingThreshold = 0.5;

}  // namespace

double internal_energy(const Operator& rho, const Operator& h) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw ValidationError("internal_energy: dimension mismatch");
  }
  const Complex u = rho.cwiseProduct(h.transpose()).sum();
  if (std::abs(u.imag()) > 1e-10 * std::max(1.0, std::abs(u.real()))) {
    throw PhysicsError("internal energy has imaginary part " + std::to_string(u.imag()));
  }
  return u.real();
}

double entropy_of_spectrum(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double entropy(const Operator& rho) {
  const Operator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues());
}

double instantaneous_power(const Operator& rho, const Operator& dh) {
  return rho.cwiseProduct(dh.transpose()).sum().real();
}

void CumulativeTrapezoid::resume(double t, double f, double total) {
  started_ = true;
  t_prev_ = t;
  f_prev_ = f;
  total_ = total;
}

double CumulativeTrapezoid::add(double t, double f) {
  if (started_) total_ += 0.5 * (t - t_prev_) * (f + f_prev_);
  started_ = true;
  t_prev_ = t;
  f_prev_ = f;
  return total_;
}

StrokeMonitor::StrokeMonitor(const Hamiltonian& h, double t_start, MonitorOptions options)
    : h_(h), options_(std::move(options)) {
  if (options_.thin < 1) throw ValidationError("output thinning must be >= 1");
  if (options_.max_rows < 2) throw ValidationError("max_rows must be >= 2");
  if (options_.min_search_stride < 1) throw ValidationError("min_search_stride must be >= 1");
  record_.index = options_.stroke_index;
  record_.label = options_.label;
  record_.t_start = t_start;
  record_.t_end = t_start;
}

void StrokeMonitor::initialise(const SampleView& s) {
  for (int k = 0; k < Hamiltonian::kTerms; ++k) {
    terms_work_[static_cast<size_t>(k)] = s.rep->to_work(h_.terms()[static_cast<size_t>(k)]);
  }
  const long long samples = s.total_steps + 1;
  row_every_ = std::max<long long>(options_.thin, (samples + options_.max_rows - 1) / options_.max_rows);
  record_.unitary = s.bath == nullptr;
  record_.rows.reserve(static_cast<size_t>(samples / row_every_ + 2));
  initialised_ = true;
}

const StrokeMonitor::CacheEntry& StrokeMonitor::eigen_entry(const Hamiltonian::Coefficients& c,
                                                            double t) {
  const std::pair<long long, long long> key{std::llround(c[1] / kCacheQuantum),
                                            std::llround(c[2] / kCacheQuantum)};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (cache_.size() >= kCacheCapacity) cache_.clear();

  const size_t nb = terms_work_[0].size();
  CacheEntry entry;
  entry.pinched.resize(nb);
  if (!have_last_eigs_) last_eigs_.resize(nb);
  for (size_t b = 0; b < nb; ++b) {
    Operator hb = c[0] * terms_work_[0][b];
    for (int k = 1; k < Hamiltonian::kTerms; ++k) {
      hb += c[static_cast<size_t>(k)] * terms_work_[static_cast<size_t>(k)][b];
    }
    EigenSystem es = eigendecompose(hb, have_last_eigs_ ? &last_eigs_[b] : nullptr);
    if (es.min_tracking_overlap < kTrackingThreshold) {
      throw PhysicsError("eigenstate tracking lost continuity at t = " + std::to_string(t) +
                         " (overlap " + std::to_string(es.min_tracking_overlap) + ")");
    }
    record_.min_tracking_overlap = std::min(record_.min_tracking_overlap, es.min_tracking_overlap);
    const Operator& v = es.vectors;
    for (int k = 1; k < Hamiltonian::kTerms; ++k) {
      const Operator m = v.adjoint() * terms_work_[static_cast<size_t>(k)][b] * v;
      entry.pinched[b][static_cast<size_t>(k)] = v * m.diagonal().asDiagonal() * v.adjoint();
    }
    last_eigs_[b] = std::move(es);
  }
  have_last_eigs_ = true;
  return cache_.emplace(key, std::move(entry)).first->second;
}

void StrokeMonitor::operator()(const SampleView& s) {
  if (!initialised_) initialise(s);
  const BlockOperator& rho = *s.rho;
  const auto c = h_.coefficients(s.t);
  const auto r = h_.coefficient_rates(s.t);

  double u = 0.0;
  double p_inst = 0.0;
  for (int k = 0; k < Hamiltonian::kTerms; ++k) {
    const size_t kk = static_cast<size_t>(k);
    if (c[kk] == 0.0 && r[kk] == 0.0) continue;
    const double tr = trace_product(rho, terms_work_[kk]).real();
    u += c[kk] * tr;
    p_inst += r[kk] * tr;
  }
  double q_a_rate = 0.0;
  double q_f_rate = 0.0;
  if (s.bath) {
    q_a_rate = s.bath->heat_rate_eigen(rho[0], BathTarget::atom);
    q_f_rate = s.bath->heat_rate_eigen(rho[0], BathTarget::cavity);
  }
  double p_classical = 0.0;
  if (r[1] != 0.0 || r[2] != 0.0) {
    const CacheEntry& e = eigen_entry(c, s.t);
    for (int k = 1; k < Hamiltonian::kTerms; ++k) {
      const size_t kk = static_cast<size_t>(k);
      if (r[kk] == 0.0) continue;
      double tr = 0.0;
      for (size_t b = 0; b < rho.size(); ++b) {
        tr += rho[b].cwiseProduct(e.pinched[b][kk].transpose()).sum().real();
      }
      p_classical += r[kk] * tr;
    }
  }

  Scalars x;
  x.t = s.t;
  x.u = u;
  x.p_inst = p_inst;
  x.w = w_.add(s.t, p_inst);
  x.qa = qa_.add(s.t, q_a_rate);
  x.qf = qf_.add(s.t, q_f_rate);
  x.wc = wc_.add(s.t, p_classical);

  if (s.step == 0) record_.U_start = u;
  if (is_min_candidate(s.step, s.t) && (!record_.min_work.found || x.w < record_.min_work.W)) {
    auto& m = record_.min_work;
    m.found = true;
    m.t = s.t;
    m.W = x.w;
    m.W_c = x.wc;
    m.U = u;
    const Eigen::VectorXd pops = s.rep->populations(rho);
    m.populations.assign(pops.data(), pops.data() + pops.size());
  }
  if (s.step == 0 || s.last || s.step % row_every_ == 0) emit_row(x, s.step, s.last, rho, *s.rep);
}

bool StrokeMonitor::is_min_candidate(long long step, double t) const {
  return t - record_.t_start >= options_.min_search_from - 1e-12 &&
         step % options_.min_search_stride == 0;
}

void StrokeMonitor::emit_row(const Scalars& x, long long step, bool last, const BlockOperator& rho,
                             const Representation& rep) {
  Eigen::VectorXd spectrum(rep.layout().dim());
  Index offset = 0;
  for (const auto& blk : rho) {
    Eigen::SelfAdjointEigenSolver<Operator> es(blk, Eigen::EigenvaluesOnly);
    spectrum.segment(offset, blk.rows()) = es.eigenvalues();
    offset += blk.rows();
  }
  const double sv = entropy_of_spectrum(spectrum);
  const double min_eig = spectrum.minCoeff();
  if (step == 0) {
    record_.S_start = sv;
    record_.min_eigenvalue = min_eig;
  }
  record_.min_eigenvalue = std::min(record_.min_eigenvalue, min_eig);
  record_.max_entropy_drift = std::max(record_.max_entropy_drift, std::abs(sv - record_.S_start));

  const double elapsed = x.t - record_.t_start;
  StrokeRow out;
  out.t = x.t;
  out.stroke = options_.stroke_index;
  out.U = x.u;
  out.S = sv;
  out.W = x.w;
  out.Q_a = x.qa;
  out.Q_f = x.qf;
  out.P_inst = x.p_inst;
  out.P_av = elapsed > 0.0 ? x.w / elapsed : kNaN;
  out.P_c_av = elapsed > 0.0 ? x.wc / elapsed : kNaN;
  const Eigen::VectorXd pops = rep.populations(rho);
  out.populations.assign(pops.data(), pops.data() + pops.size());
  record_.rows.push_back(std::move(out));
  if (last) {
    record_.S_end = sv;
    record_.U_end = x.u;
    record_.t_end = x.t;
  }
}

namespace {

BlockOperator conjugate(const BlockOperator& u, const BlockOperator& rho) {
  BlockOperator out(rho.size());
  for (size_t b = 0; b < rho.size(); ++b) out[b].noalias() = u[b] * rho[b] * u[b].adjoint();
  return out;
}

BlockOperator pull_back(const BlockOperator& u, const BlockOperator& op) {
  BlockOperator out(op.size());
  for (size_t b = 0; b < op.size(); ++b) out[b].noalias() = u[b].adjoint() * op[b] * u[b];
  return out;
}

/// Row k holds the entries of op_k transposed, block after block, so that
/// rows * vec(rho) = Tr[rho op_k].
Eigen::MatrixXcd stack_transposed(const std::vector<BlockOperator>& ops) {
  Index width = 0;
  for (const auto& blk : ops.front()) width += blk.size();
  Eigen::MatrixXcd out(static_cast<Index>(ops.size()), width);
  for (size_t k = 0; k < ops.size(); ++k) {
    Index col = 0;
    for (const auto& blk : ops[k]) {
      for (Index j = 0; j < blk.cols(); ++j) {
        for (Index i = 0; i < blk.rows(); ++i) out(static_cast<Index>(k), col++) = blk(j, i);
      }
    }
  }
  return out;
}

Eigen::VectorXcd flatten(const BlockOperator& rho) {
  Index width = 0;
  for (const auto& blk : rho) width += blk.size();
  Eigen::VectorXcd out(width);
  Index at = 0;
  for (const auto& blk : rho) {
    out.segment(at, blk.size()) = Eigen::Map<const Eigen::VectorXcd>(blk.data(), blk.size());
    at += blk.size();
  }
  return out;
}

}  // namespace

EvolveResult StrokeMonitor::advance_periodic(const Representation& rep, const DensityMatrix& rho_in,
                                             long long first, long long total, double t0, double dt,
                                             long long m_steps, const IntegratorConfig& cfg) {
  if (!initialised_) throw std::logic_error("advance_periodic needs at least one prior sample");
  if (m_steps < 2 || first < 0 || total < first) {
    throw ValidationError("advance_periodic: bad step range");
  }
  const size_t M = static_cast<size_t>(m_steps);
  const double ts = t0 + static_cast<double>(first) * dt;
  const auto props = block_propagators(h_, rep.layout(), ts, dt, m_steps);

  double unitarity = 0.0;
  for (const auto& blk : props.back()) {
    const Operator e = blk.adjoint() * blk - Operator::Identity(blk.rows(), blk.cols());
    unitarity = std::max(unitarity, e.cwiseAbs().maxCoeff());
  }
  if (unitarity > 1e-8) {
    throw PhysicsError("one-period propagator deviates from unitarity by " +
                       std::to_string(unitarity) + "; reduce the step");
  }

  // Cumulative trapezoid operators of P_inst and of the classical power,
  // pulled back to the period start.
  const size_t nb = terms_work_[0].size();
  std::vector<BlockOperator> a_cum(M + 1), b_cum(M + 1);
  BlockOperator prev_x, prev_y;
  for (size_t k = 0; k <= M; ++k) {
    const double t = ts + static_cast<double>(k) * dt;
    const auto c = h_.coefficients(t);
    const auto r = h_.coefficient_rates(t);
    BlockOperator x(nb), y(nb);
    for (size_t b = 0; b < nb; ++b) {
      x[b] = r[0] * terms_work_[0][b];
      for (size_t j = 1; j < Hamiltonian::kTerms; ++j) x[b] += r[j] * terms_work_[j][b];
      y[b] = Operator::Zero(x[b].rows(), x[b].cols());
    }
    if (r[1] != 0.0 || r[2] != 0.0) {
      const CacheEntry& e = eigen_entry(c, t);
      for (size_t b = 0; b < nb; ++b) {
        for (size_t j = 1; j < Hamiltonian::kTerms; ++j) {
          if (r[j] != 0.0) y[b] += r[j] * e.pinched[b][j];
        }
      }
    }
    x = pull_back(props[k], x);
    y = pull_back(props[k], y);
    if (k == 0) {
      a_cum[0] = zeros_like(x);
      b_cum[0] = zeros_like(y);
    } else {
      a_cum[k] = a_cum[k - 1];
      b_cum[k] = b_cum[k - 1];
      for (size_t b = 0; b < nb; ++b) {
        a_cum[k][b] += (0.5 * dt) * (prev_x[b] + x[b]);
        b_cum[k][b] += (0.5 * dt) * (prev_y[b] + y[b]);
      }
    }
    prev_x = std::move(x);
    prev_y = std::move(y);
  }
  const Eigen::MatrixXcd a_rows = stack_transposed(a_cum);

  const int n_max = h_.cutoff().n_max();
  std::vector<Index> top;
  for (int layer = n_max - 1; layer <= n_max; ++layer) {
    for (auto lv : {AtomLevel::ground, AtomLevel::excited}) top.push_back(h_.cutoff().index(layer, lv));
  }
  EvolveResult result{rho_in, dt, total, 0.0, 0.0};
  auto check = [&](BlockOperator& rho, double t) {
    hermitize(rho);
    const double tr = trace(rho).real();
    const double drift = std::abs(tr - 1.0);
    result.max_trace_drift = std::max(result.max_trace_drift, drift);
    if (cfg.renormalize_trace) {
      for (auto& blk : rho) blk /= tr;
    } else if (drift > 1e-6) {
      throw PhysicsError("trace drifted by " + std::to_string(drift) + " at t = " + std::to_string(t));
    }
    double leak = 0.0;
    for (Index idx : top) leak += rep.population(rho, idx);
    result.max_leakage = std::max(result.max_leakage, leak);
    if (leak > cfg.leakage_tol) {
      throw PhysicsError("population of the top two Fock layers reached " + std::to_string(leak) +
                         " at t = " + std::to_string(t) + " (leakage_tol " +
                         std::to_string(cfg.leakage_tol) + "); increase n_max");
    }
  };

  // Full sample at step i = period start + k.
  auto sample = [&](const BlockOperator& rho_n, double w_n, double wc_n, size_t k, long long i,
                    bool last) {
    const double t = t0 + static_cast<double>(i) * dt;
    BlockOperator rho = conjugate(props[k], rho_n);
    check(rho, t);
    const auto c = h_.coefficients(t);
    const auto r = h_.coefficient_rates(t);
    Scalars x;
    x.t = t;
    for (size_t j = 0; j < Hamiltonian::kTerms; ++j) {
      const double tr = trace_product(rho, terms_work_[j]).real();
      x.u += c[j] * tr;
      x.p_inst += r[j] * tr;
    }
    x.w = w_n + trace_product(rho_n, a_cum[k]).real();
    x.wc = wc_n + trace_product(rho_n, b_cum[k]).real();
    x.qa = qa_.value();
    x.qf = qf_.value();
    if (i % row_every_ == 0 || last) emit_row(x, i, last, rho, rep);
    if (last) {
      w_.resume(t, x.p_inst, x.w);
      wc_.resume(t, 0.0, x.wc);
      result.final_state = DensityMatrix(rep.to_product(rho));
    }
  };

  struct Pending {
    BlockOperator rho_n;
    double wc_n = 0.0;
    size_t k = 0;
  };
  std::optional<Pending> pending;

  BlockOperator rho_n = rep.to_work(rho_in.matrix());
  double w_n = w_.value();
  double wc_n = wc_.value();
  long long i_n = first;
  while (true) {
    const long long remaining = total - i_n;
    const size_t k_end = static_cast<size_t>(std::min<long long>(remaining, m_steps));
    if (k_end == 0) {
      sample(rho_n, w_n, wc_n, 0, i_n, true);
      break;
    }

    bool any_candidate = false;
    for (size_t k = 1; k <= k_end && !any_candidate; ++k) {
      const long long i = i_n + static_cast<long long>(k);
      any_candidate = is_min_candidate(i, t0 + static_cast<double>(i) * dt);
    }
    if (any_candidate) {
      const Eigen::VectorXd w_k = (a_rows * flatten(rho_n)).real();
      for (size_t k = 1; k <= k_end; ++k) {
        const long long i = i_n + static_cast<long long>(k);
        const double t = t0 + static_cast<double>(i) * dt;
        const double w = w_n + w_k(static_cast<Index>(k));
        if (!is_min_candidate(i, t)) continue;
        if (!record_.min_work.found || w < record_.min_work.W) {
          record_.min_work.found = true;
          record_.min_work.t = t;
          record_.min_work.W = w;
          pending = Pending{rho_n, wc_n, k};
        }
      }
    }

    const long long row_from = (i_n / row_every_ + 1) * row_every_;
    for (long long i = row_from; i < i_n + static_cast<long long>(k_end); i += row_every_) {
      sample(rho_n, w_n, wc_n, static_cast<size_t>(i - i_n), i, false);
    }
    if (k_end < M) {
      sample(rho_n, w_n, wc_n, k_end, total, true);
      break;
    }

    const double dw = trace_product(rho_n, a_cum[M]).real();
    const double dwc = trace_product(rho_n, b_cum[M]).real();
    rho_n = conjugate(props[M], rho_n);
    i_n += m_steps;
    check(rho_n, t0 + static_cast<double>(i_n) * dt);
    w_n += dw;
    wc_n += dwc;
    if (i_n == total) {
      sample(rho_n, w_n, wc_n, 0, i_n, true);
      break;
    }
    if (i_n % row_every_ == 0) sample(rho_n, w_n, wc_n, 0, i_n, false);
  }

  if (pending) {
    auto& m = record_.min_work;
    const BlockOperator rho = conjugate(props[pending->k], pending->rho_n);
    const auto c = h_.coefficients(m.t);
    m.U = 0.0;
    for (size_t j = 0; j < Hamiltonian::kTerms; ++j) {
      m.U += c[j] * trace_product(rho, terms_work_[j]).real();
    }
    m.W_c = pending->wc_n + trace_product(pending->rho_n, b_cum[pending->k]).real();
    const Eigen::VectorXd pops = rep.populations(rho);
    m.populations.assign(pops.data(), pops.data() + pops.size());
  }
  return result;
}

StrokeRecord StrokeMonitor::finish(const EvolveResult& result) {
  record_.step = result.step;
  record_.steps = result.steps;
  record_.max_leakage = result.max_leakage;
  record_.max_trace_drift = result.max_trace_drift;
  record_.W = w_.value();
  record_.Q_a = qa_.value();
  record_.Q_f = qf_.value();
  record_.W_c = wc_.value();
  record_.final_state = result.final_state;
  if (record_.min_eigenvalue < -1e-8) {
    record_.warnings.push_back("density matrix eigenvalue " + std::to_string(record_.min_eigenvalue) +
                               " below -1e-8 in stroke " + record_.label);
  }
  return std::move(record_);
}

StrokeRecord record_stroke(const DensityMatrix& rho0, double t0, double t1, const Hamiltonian& h,
                           const Liouvillian* bath, const IntegratorConfig& cfg,
                           const MonitorOptions& options,
                           const std::optional<PeriodicHint>& periodic) {
  StrokeMonitor monitor(h, t0, options);
  const bool unitary = bath == nullptr || bath->empty();
  if (periodic && unitary && periodic->steps_per_period >= 2) {
    const long long n = step_count(t0, t1, cfg.step);
    const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;
    const long long m = periodic->steps_per_period;
    const long long settle_periods =
        static_cast<long long>(std::ceil(std::max(0.0, periodic->settle) / (static_cast<double>(m) * dt)));
    const long long first = std::max<long long>(1, settle_periods) * m;
    const bool on_grid = std::abs(dt - cfg.step) <= 1e-12 * cfg.step;
    if (on_grid && n - first >= periodic->min_periods * m) {
      const double ts = t0 + static_cast<double>(first) * dt;
      const auto head = evolve(rho0, t0, ts, h, nullptr, cfg, [&](const SampleView& s) {
        SampleView v = s;
        v.total_steps = n;
        v.last = false;
        monitor(v);
      });
      const Representation rep(unitary_layout(h, rho0.matrix()), std::nullopt);
      auto tail = monitor.advance_periodic(rep, head.final_state, first, n, t0, dt, m, cfg);
      tail.max_leakage = std::max(tail.max_leakage, head.max_leakage);
      tail.max_trace_drift = std::max(tail.max_trace_drift, head.max_trace_drift);
      return monitor.finish(tail);
    }
  }
  const auto result = evolve(rho0, t0, t1, h, bath, cfg, [&](const SampleView& s) { monitor(s); });
  return monitor.finish(result);
}

TimeSeries work(const StrokeRecord& record) {
  if (record.unitary) {
    const double mismatch = std::abs(record.W - record.delta_U());
    if (mismatch > 1e-4) {
      throw PhysicsError("work integral differs from the energy change by " +
                         std::to_string(mismatch) + " in stroke " + record.label +
                         "; the integrator step is too coarse");
    }
  }
  TimeSeries out;
  out.reserve(record.rows.size());
  for (const auto& r : record.rows) out.emplace_back(r.t, r.W);
  return out;
}

TimeSeries heat(const StrokeRecord& record, BathTarget target) {
  TimeSeries out;
  out.reserve(record.rows.size());
  for (const auto& r : record.rows) out.emplace_back(r.t, target == BathTarget::atom ? r.Q_a : r.Q_f);
  return out;
}

namespace {

double cumulative_at(const StrokeRecord& record, double t, bool classical) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  if (!(t > record.t_start + tol) || t > record.t_end + tol) {
    throw ValidationError("average power needs t in (t_start, t_end] of the stroke");
  }
  const auto& m = record.min_work;
  if (m.found && std::abs(t - m.t) <= tol) return classical ? m.W_c : m.W;

  auto value = [&](const StrokeRow& r) {
    const double elapsed = r.t - record.t_start;
    return classical ? r.P_c_av * elapsed : r.W;
  };
  const auto& rows = record.rows;
  const auto it = std::lower_bound(rows.begin(), rows.end(), t - tol,
                                   [](const StrokeRow& r, double x) { return r.t < x; });
  if (it == rows.end()) throw ValidationError("average power requested outside the recorded rows");
  if (std::abs(it->t - t) <= tol) return value(*it);
  if (it == rows.begin()) return value(*it);
  const auto prev = std::prev(it);
  const double f = (t - prev->t) / (it->t - prev->t);
  const double v0 = prev->t > record.t_start ? value(*prev) : 0.0;
  return v0 + f * (value(*it) - v0);
}

}  // namespace

double avg_quantum_power(const StrokeRecord& record, double t) {
  return cumulative_at(record, t, false) / (t - record.t_start);
}

double avg_classical_power(const StrokeRecord& record, double t) {
  return cumulative_at(record, t, true) / (t - record.t_start);
}

ClassicalPowerSample classical_power_integrand(const Operator& rho, const Operator& h,
                                               const Operator& dh, const EigenSystem* previous) {
  ClassicalPowerSample out;
  out.eigensystem = eigendecompose(h, previous);
  if (previous && out.eigensystem.min_tracking_overlap < kTrackingThreshold) {
    throw PhysicsError("eigenstate tracking lost continuity (overlap " +
                       std::to_string(out.eigensystem.min_tracking_overlap) + ")");
  }
  const Operator& v = out.eigensystem.vectors;
  const Eigen::VectorXd pops = (v.adjoint() * rho * v).diagonal().real();
  const Eigen::VectorXd slopes = (v.adjoint() * dh * v).diagonal().real();
  out.value = pops.dot(slopes);
  return out;
}

double amplification_estimate(double p_plus, double p_minus, double gap) {
  if (p_plus < 0.0 || p_plus > 1.0 || p_minus < 0.0 || p_minus > 1.0) {
    throw ValidationError("populations must lie in [0, 1]");
  }
  return (p_plus - p_minus) * gap;
}

}  // namespace cqed
