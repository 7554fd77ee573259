#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace cqed {

std::string to_string(BathTarget target) { return target == BathTarget::atom ? "atom" : "cavity"; }

double bose_occupation(double gap, double temperature) {
  if (temperature < 0.0) throw ValidationError("bath temperature must be >= 0");
  if (temperature == 0.0 || gap <= 0.0) return 0.0;
  return 1.0 / std::expm1(gap / temperature);
}

namespace {

constexpr double kGapTol = 1e-12;
constexpr double kElementFloor = 1e-20;

double max_abs(const Operator& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Liouvillian::Liouvillian(const Operator& h_static, std::vector<BathSpec> baths)
    : h_(h_static), baths_(std::move(baths)) {
  const Index d = h_.rows();
  if (d < 4 || d % 2 != 0) throw ValidationError("Liouvillian needs an atom-cavity operator");
  for (const auto& b : baths_) {
    if (!(b.rate >= 0.0) || !(b.temperature >= 0.0)) {
      throw ValidationError("bath rate and temperature must be >= 0");
    }
  }
  eig_ = eigendecompose(h_);
  const FockCutoff cutoff(static_cast<int>(d / 2 - 1));
  const Operator& v = eig_.vectors;
  const Operator a = annihilation(cutoff);
  const auto atom = atom_ops(cutoff);
  const Operator x_cavity = v.adjoint() * (a + a.adjoint()) * v;
  const Operator x_atom = v.adjoint() * (atom.raise + atom.lower) * v;

  // Ordered pairs with positive gap, grouped into frequency classes.
  struct Pair {
    double gap;
    Index lower;
    Index upper;
    double class_gap;
  };
  std::vector<Pair> pairs;
  const auto& e = eig_.values;
  for (Index k = 0; k < d; ++k) {
    for (Index j = 0; j < k; ++j) {
      const double gap = e(k) - e(j);
      if (gap > kGapTol) pairs.push_back({gap, j, k, gap});
    }
  }
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return pairs[x].gap < pairs[y].gap; });
  double class_start = 0.0;
  double previous = -1.0;
  for (size_t i : order) {
    if (previous < 0.0 || pairs[i].gap - previous > kGapTol) class_start = pairs[i].gap;
    previous = pairs[i].gap;
    pairs[i].class_gap = class_start;
  }

  outflow_ = Eigen::VectorXd::Zero(d);
  outflow_atom_ = Eigen::VectorXd::Zero(d);
  outflow_cavity_ = Eigen::VectorXd::Zero(d);
  for (const auto& bath : baths_) {
    if (bath.rate == 0.0) continue;
    const Operator& x = bath.target == BathTarget::atom ? x_atom : x_cavity;
    auto& out_t = bath.target == BathTarget::atom ? outflow_atom_ : outflow_cavity_;
    for (const auto& p : pairs) {
      const double element = std::norm(x(p.lower, p.upper));
      if (element < kElementFloor) continue;
      const double n = bose_occupation(p.class_gap, bath.temperature);
      const double down = bath.rate * element * (n + 1.0);
      transitions_.push_back({p.upper, p.lower, down, bath.target});
      out_t(p.upper) += down;
      if (n > 0.0) {
        const double up = bath.rate * element * n;
        transitions_.push_back({p.lower, p.upper, up, bath.target});
        out_t(p.lower) += up;
      }
    }
  }
  outflow_ = outflow_atom_ + outflow_cavity_;
}

bool Liouvillian::has(BathTarget target) const {
  return std::any_of(baths_.begin(), baths_.end(),
                     [&](const BathSpec& b) { return b.target == target && b.rate > 0.0; });
}

void Liouvillian::apply_eigen(const Operator& rho, Operator& out,
                              std::optional<BathTarget> only) const {
  const Eigen::VectorXd& o =
      !only ? outflow_ : (*only == BathTarget::atom ? outflow_atom_ : outflow_cavity_);
  const Index d = rho.rows();
  out.resize(d, d);
  for (Index b = 0; b < d; ++b) {
    for (Index a = 0; a < d; ++a) out(a, b) = -0.5 * (o(a) + o(b)) * rho(a, b);
  }
  for (const auto& tr : transitions_) {
    if (only && tr.target != *only) continue;
    out(tr.to, tr.to) += tr.weight * rho(tr.from, tr.from);
  }
}

Operator Liouvillian::apply(const Operator& rho, std::optional<BathTarget> only) const {
  const Operator& v = eig_.vectors;
  Operator out;
  apply_eigen(v.adjoint() * rho * v, out, only);
  return v * out * v.adjoint();
}

double Liouvillian::heat_rate_eigen(const Operator& rho, BathTarget target) const {
  double q = 0.0;
  for (const auto& tr : transitions_) {
    if (tr.target != target) continue;
    q += tr.weight * rho(tr.from, tr.from).real() * (eig_.values(tr.to) - eig_.values(tr.from));
  }
  return q;
}

double Liouvillian::heat_rate(const Operator& rho, BathTarget target) const {
  const Operator& v = eig_.vectors;
  return heat_rate_eigen(v.adjoint() * rho * v, target);
}

Operator rhs(double t, const Operator& rho, const Hamiltonian& h, const Liouvillian* bath) {
  const Operator ht = h.at(t);
  Operator out = Complex(0.0, -1.0) * (ht * rho - rho * ht);
  if (bath) out += bath->apply(rho);
  return out;
}

void IntegratorConfig::validate(double bound) const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("integrator step must be > 0");
  if (sample_every < 1) throw ValidationError("sample_every must be >= 1");
  if (!(leakage_tol > 0.0)) throw ValidationError("leakage_tol must be > 0");
  if (step * bound > 0.1 * (1.0 + 1e-12)) {
    throw ValidationError("integrator step " + std::to_string(step) + " times spectral bound " +
                          std::to_string(bound) + " exceeds 0.1");
  }
}

double spectral_bound(const Hamiltonian& h) {
  std::vector<double> omegas{h.drive().omega0()};
  if (h.drive().kind() == DriveSchedule::Kind::harmonic && h.drive().epsilon() != 0.0) {
    omegas = {h.drive().omega0() - h.drive().epsilon(), h.drive().omega0() + h.drive().epsilon()};
  }
  std::vector<double> couplings{h.coupling().g0()};
  switch (h.coupling().kind()) {
    case CouplingSchedule::Kind::zero:
      couplings = {0.0};
      break;
    case CouplingSchedule::Kind::constant:
      break;
    case CouplingSchedule::Kind::ramp_on:
    case CouplingSchedule::Kind::ramp_off:
      couplings = {0.0, h.coupling().g0()};
      break;
  }
  double bound = 0.0;
  for (double om : omegas) {
    for (double g : couplings) {
      Eigen::SelfAdjointEigenSolver<Operator> es(h.combine({h.params().omega, om, g}),
                                                 Eigen::EigenvaluesOnly);
      bound = std::max(bound, es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  return bound;
}

Representation::Representation(SectorLayout layout, std::optional<Operator> basis)
    : layout_(std::move(layout)), basis_(std::move(basis)) {
  if (basis_ && layout_.size() != 1) {
    throw ValidationError("a rotated working basis must use a single block");
  }
}

BlockOperator Representation::to_work(const Operator& op) const {
  if (basis_) return {basis_->adjoint() * op * *basis_};
  return layout_.gather(op);
}

Operator Representation::to_product(const BlockOperator& work) const {
  if (basis_) return *basis_ * work[0] * basis_->adjoint();
  return layout_.scatter(work);
}

Eigen::VectorXd Representation::populations(const BlockOperator& work) const {
  if (basis_) {
    const Operator m = *basis_ * work[0];
    return m.cwiseProduct(basis_->conjugate()).rowwise().sum().real();
  }
  Eigen::VectorXd p(layout_.dim());
  for (Index i = 0; i < layout_.dim(); ++i) {
    const auto [b, l] = layout_.locate(i);
    p(i) = work[b](l, l).real();
  }
  return p;
}

double Representation::population(const BlockOperator& work, Index i) const {
  if (basis_) {
    const auto row = basis_->row(i);
    return (row.conjugate() * work[0] * row.transpose()).real()(0, 0);
  }
  const auto [b, l] = layout_.locate(i);
  return work[b](l, l).real();
}

long long step_count(double t0, double t1, double step) {
  const double span = t1 - t0;
  if (span < 0.0) throw ValidationError("integration interval has negative length");
  if (span == 0.0) return 0;
  const double ratio = span / step;
  const long long n = std::llround(ratio);
  if (n >= 1 && std::abs(static_cast<double>(n) * step - span) <= 1e-9 * std::max(1.0, span)) {
    return n;
  }
  return std::max<long long>(1, static_cast<long long>(std::ceil(ratio)));
}

namespace {

/// Right-hand side in the working basis.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual void apply(double t, const BlockOperator& rho, BlockOperator& out) = 0;
};

class UnitaryGenerator final : public Generator {
 public:
  UnitaryGenerator(const Hamiltonian& h, const SectorLayout& layout) : h_(h), sh_(h, layout) {}

  void apply(double t, const BlockOperator& rho, BlockOperator& out) override {
    if (t != cached_t_ || !cached_) {
      sh_.combine(h_.coefficients(t), values_);
      cached_t_ = t;
      cached_ = true;
    }
    sh_.commutator(values_, rho, out);
  }

 private:
  const Hamiltonian& h_;
  SectorHamiltonian sh_;
  std::vector<std::vector<double>> values_;
  double cached_t_ = 0.0;
  bool cached_ = false;
};

/// Static H plus dissipator in the Liouvillian eigenbasis, where the
/// generator acts entrywise apart from the population transfer.
class EigenbasisGenerator final : public Generator {
 public:
  explicit EigenbasisGenerator(const Liouvillian& l) : l_(l) {
    const auto& e = l.eigensystem().values;
    const auto& o = l.outflow();
    const Index d = e.size();
    factor_.resize(d, d);
    for (Index b = 0; b < d; ++b) {
      for (Index a = 0; a < d; ++a) factor_(a, b) = Complex(-0.5 * (o(a) + o(b)), -(e(a) - e(b)));
    }
  }

  void apply(double, const BlockOperator& rho, BlockOperator& out) override {
    out[0] = factor_.cwiseProduct(rho[0]);
    for (const auto& tr : l_.transitions()) {
      out[0](tr.to, tr.to) += tr.weight * rho[0](tr.from, tr.from);
    }
  }

 private:
  const Liouvillian& l_;
  Operator factor_;
};

void axpy(BlockOperator& y, const BlockOperator& x, double a, const BlockOperator& base) {
  for (size_t b = 0; b < y.size(); ++b) y[b] = base[b] + a * x[b];
}

}  // namespace

SectorLayout unitary_layout(const Hamiltonian& h, const Operator& rho0) {
  const auto& terms = h.terms();
  return SectorLayout::from_patterns({&terms[0], &terms[1], &terms[2], &rho0}, h.dim());
}

std::vector<BlockOperator> block_propagators(const Hamiltonian& h, const SectorLayout& layout,
                                             double t_begin, double dt, long long steps) {
  if (steps < 0 || !(dt > 0.0)) throw ValidationError("block_propagators: need dt > 0, steps >= 0");
  const SectorHamiltonian sh(h, layout);
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const Complex commutator_weight(0.0, -std::sqrt(3.0) * dt * dt / 12.0);
  std::vector<BlockOperator> out;
  out.reserve(static_cast<size_t>(steps) + 1);
  BlockOperator u;
  for (size_t b = 0; b < layout.size(); ++b) {
    const Index n = static_cast<Index>(layout.block(b).size());
    u.push_back(Operator::Identity(n, n));
  }
  out.push_back(u);
  Eigen::SelfAdjointEigenSolver<Operator> es;
  for (long long i = 0; i < steps; ++i) {
    const double t = t_begin + static_cast<double>(i) * dt;
    const BlockOperator h1 = sh.dense(h.coefficients(t + c1 * dt));
    const BlockOperator h2 = sh.dense(h.coefficients(t + c2 * dt));
    for (size_t b = 0; b < u.size(); ++b) {
      // Fourth-order Magnus generator, exponentiated exactly.
      const Operator k = (0.5 * dt) * (h1[b] + h2[b]) +
                         commutator_weight * (h2[b] * h1[b] - h1[b] * h2[b]);
      es.compute(0.5 * (k + k.adjoint()));
      const Eigen::VectorXcd phases =
          (es.eigenvalues().cast<Complex>() * Complex(0.0, -1.0)).array().exp();
      u[b] = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u[b];
    }
    out.push_back(u);
  }
  return out;
}

EvolveResult evolve(const DensityMatrix& rho0, double t0, double t1, const Hamiltonian& h,
                    const Liouvillian* bath, const IntegratorConfig& cfg,
                    const SampleObserver& observer) {
  if (!(t1 >= t0)) throw ValidationError("evolve: t1 must be >= t0");
  if (rho0.dim() != h.dim()) throw ValidationError("evolve: state and Hamiltonian dimensions differ");
  const bool dissipative = bath != nullptr && !bath->empty();
  if (dissipative && !h.is_static()) {
    throw ValidationError("driving and dissipation in the same stroke are not supported");
  }
  cfg.validate(spectral_bound(h));

  const long long n = step_count(t0, t1, cfg.step);
  const double dt = n > 0 ? (t1 - t0) / static_cast<double>(n) : 0.0;
  const Index d = h.dim();

  std::optional<Representation> rep;
  std::unique_ptr<Generator> gen;
  if (dissipative) {
    const Operator h0 = h.at(t0);
    if (max_abs(h0 - bath->hamiltonian()) > 1e-10 * std::max(1.0, max_abs(h0))) {
      throw ValidationError("Liouvillian was built for a different Hamiltonian");
    }
    rep.emplace(SectorLayout::single(d), bath->eigensystem().vectors);
    gen = std::make_unique<EigenbasisGenerator>(*bath);
  } else {
    rep.emplace(unitary_layout(h, rho0.matrix()), std::nullopt);
    gen = std::make_unique<UnitaryGenerator>(h, rep->layout());
  }

  const int n_max = h.cutoff().n_max();
  std::vector<Index> top;
  for (int layer = n_max - 1; layer <= n_max; ++layer) {
    for (auto s : {AtomLevel::ground, AtomLevel::excited}) top.push_back(h.cutoff().index(layer, s));
  }

  BlockOperator rho = rep->to_work(rho0.matrix());
  BlockOperator k1 = zeros_like(rho), k2 = k1, k3 = k1, k4 = k1, tmp = k1;

  EvolveResult result{rho0, dt, n, 0.0, 0.0};
  auto sample = [&](long long i) {
    const double t = t0 + static_cast<double>(i) * dt;
    hermitize(rho);
    const double tr = trace(rho).real();
    const double drift = std::abs(tr - 1.0);
    result.max_trace_drift = std::max(result.max_trace_drift, drift);
    if (cfg.renormalize_trace) {
      for (auto& blk : rho) blk /= tr;
    } else if (drift > 1e-6) {
      throw PhysicsError("trace drifted by " + std::to_string(drift) + " at t = " +
                         std::to_string(t) + "; reduce the step or enable renormalization");
    }
    double leak = 0.0;
    for (Index idx : top) leak += rep->population(rho, idx);
    result.max_leakage = std::max(result.max_leakage, leak);
    if (leak > cfg.leakage_tol) {
      throw PhysicsError("population of the top two Fock layers reached " + std::to_string(leak) +
                         " at t = " + std::to_string(t) + " (leakage_tol " +
                         std::to_string(cfg.leakage_tol) + "); increase n_max");
    }
    if (observer) {
      SampleView view;
      view.t = t;
      view.step = i;
      view.total_steps = n;
      view.last = i == n;
      view.rep = &*rep;
      view.rho = &rho;
      view.bath = dissipative ? bath : nullptr;
      observer(view);
    }
  };

  sample(0);
  for (long long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    gen->apply(t, rho, k1);
    axpy(tmp, k1, 0.5 * dt, rho);
    gen->apply(t + 0.5 * dt, tmp, k2);
    axpy(tmp, k2, 0.5 * dt, rho);
    gen->apply(t + 0.5 * dt, tmp, k3);
    axpy(tmp, k3, dt, rho);
    gen->apply(t + dt, tmp, k4);
    for (size_t b = 0; b < rho.size(); ++b) {
      rho[b] += (dt / 6.0) * (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b]);
    }
    if ((i + 1) % cfg.sample_every == 0 || i + 1 == n) sample(i + 1);
  }

  result.final_state = DensityMatrix(rep->to_product(rho));
  return result;
}

}  // namespace cqed
