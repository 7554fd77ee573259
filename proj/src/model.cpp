#include "cqed/model.hpp"

#include <cmath>
#include <sstream>

namespace cqed {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::jaynes_cummings ? "jc" : "rabi";
}

ModelKind model_from_string(const std::string& name) {
  if (name == "jc") return ModelKind::jaynes_cummings;
  if (name == "rabi") return ModelKind::rabi;
  throw ValidationError("unknown model '" + name + "' (expected jc or rabi)");
}

std::vector<std::string> validate(const SystemParams& p, const FockCutoff& cutoff) {
  std::vector<std::string> warnings;
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  std::ostringstream msg;

  if (!(p.omega > 0.0)) fail("omega must be > 0");
  if (!(p.omega0 > 0.0)) fail("omega0 must be > 0");
  if (p.epsilon < 0.0 || p.g0 < 0.0 || p.eta < 0.0) {
    fail("epsilon, eta and g0 must be non-negative");
  }

  const double eps_ratio = p.epsilon / p.omega0;
  if (eps_ratio > 0.25) {
    msg << "weak modulation violated: epsilon/omega0 = " << eps_ratio << " > 0.25";
    fail(msg.str());
  }
  if (eps_ratio > 0.1) {
    msg << "epsilon/omega0 = " << eps_ratio << " exceeds 0.1; perturbative drive is marginal";
    warnings.push_back(msg.str());
    msg.str("");
  }

  const double g_ratio = p.g0 / p.omega;
  if (g_ratio > 0.1) {
    msg << "weak coupling violated: g0/omega = " << g_ratio << " > 0.1";
    fail(msg.str());
  }

  const double lhs = std::abs(p.detuning());
  const double rhs = 2.0 * p.g0 * std::sqrt(static_cast<double>(cutoff.n_max()));
  if (!(lhs > rhs)) {
    msg << "dispersive condition violated: |omega - omega0| = " << lhs
        << " <= 2 g0 sqrt(n_max) = " << rhs;
    fail(msg.str());
  }
  return warnings;
}

CouplingSchedule CouplingSchedule::zero() { return {Kind::zero, 0.0, 0.0}; }
CouplingSchedule CouplingSchedule::constant(double g0) { return {Kind::constant, g0, 0.0}; }
CouplingSchedule CouplingSchedule::ramp_on(double g0, double t_start) {
  return {Kind::ramp_on, g0, t_start};
}
CouplingSchedule CouplingSchedule::ramp_off(double g0, double t_start) {
  return {Kind::ramp_off, g0, t_start};
}

double CouplingSchedule::value(double t) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return g0_;
    case Kind::ramp_on:
      return t < t_start_ ? 0.0 : -g0_ * std::expm1(-2.0 * g0_ * (t - t_start_));
    case Kind::ramp_off:
      return t < t_start_ ? g0_ : g0_ * std::exp(-2.0 * g0_ * (t - t_start_));
  }
  return 0.0;
}

double CouplingSchedule::rate(double t) const {
  if (t < t_start_) return 0.0;
  switch (kind_) {
    case Kind::zero:
    case Kind::constant:
      return 0.0;
    case Kind::ramp_on:
      return 2.0 * g0_ * g0_ * std::exp(-2.0 * g0_ * (t - t_start_));
    case Kind::ramp_off:
      return -2.0 * g0_ * g0_ * std::exp(-2.0 * g0_ * (t - t_start_));
  }
  return 0.0;
}

DriveSchedule DriveSchedule::constant(double omega0) {
  return {Kind::constant, omega0, 0.0, 0.0, 0.0};
}

DriveSchedule DriveSchedule::harmonic(double omega0, double epsilon, double eta, double t_ref) {
  return {Kind::harmonic, omega0, epsilon, eta, t_ref};
}

double DriveSchedule::value(double t) const {
  if (kind_ == Kind::constant) return omega0_;
  return omega0_ + epsilon_ * std::sin(eta_ * (t - t_ref_));
}

double DriveSchedule::rate(double t) const {
  if (kind_ == Kind::constant) return 0.0;
  return epsilon_ * eta_ * std::cos(eta_ * (t - t_ref_));
}

Operator jc_interaction(const FockCutoff& cutoff) {
  const Operator a = annihilation(cutoff);
  const auto atom = atom_ops(cutoff);
  return a * atom.raise + a.adjoint() * atom.lower;
}

Operator rabi_interaction(const FockCutoff& cutoff) {
  const Operator a = annihilation(cutoff);
  const auto atom = atom_ops(cutoff);
  return (atom.raise + atom.lower) * (a + a.adjoint());
}

Hamiltonian::Hamiltonian(ModelKind kind, const SystemParams& params, CouplingSchedule coupling,
                         DriveSchedule drive, const FockCutoff& cutoff)
    : kind_(kind),
      params_(params),
      coupling_(coupling),
      drive_(drive),
      cutoff_(cutoff),
      terms_{number(cutoff), 0.5 * atom_ops(cutoff).sz,
             kind == ModelKind::jaynes_cummings ? jc_interaction(cutoff)
                                                : rabi_interaction(cutoff)} {}

Hamiltonian::Coefficients Hamiltonian::coefficients(double t) const {
  return {params_.omega, drive_.value(t), coupling_.value(t)};
}

Hamiltonian::Coefficients Hamiltonian::coefficient_rates(double t) const {
  return {0.0, drive_.rate(t), coupling_.rate(t)};
}

bool Hamiltonian::is_static() const noexcept {
  const bool drive_static = drive_.kind() == DriveSchedule::Kind::constant || drive_.epsilon() == 0.0;
  const bool coupling_static = coupling_.kind() == CouplingSchedule::Kind::zero ||
                               coupling_.kind() == CouplingSchedule::Kind::constant;
  return drive_static && coupling_static;
}

Operator Hamiltonian::combine(const Coefficients& c) const {
  Operator h = c[0] * terms_[0];
  for (int k = 1; k < kTerms; ++k) {
    if (c[static_cast<size_t>(k)] != 0.0) h += c[static_cast<size_t>(k)] * terms_[static_cast<size_t>(k)];
  }
  return h;
}

Operator hamiltonian_jc(const SystemParams& params, const CouplingSchedule& g,
                        const DriveSchedule& drive, const FockCutoff& cutoff, double t) {
  return Hamiltonian(ModelKind::jaynes_cummings, params, g, drive, cutoff).at(t);
}

Operator hamiltonian_rabi(const SystemParams& params, const CouplingSchedule& g,
                          const DriveSchedule& drive, const FockCutoff& cutoff, double t) {
  return Hamiltonian(ModelKind::rabi, params, g, drive, cutoff).at(t);
}

Operator dh_dt(ModelKind kind, const SystemParams& params, const CouplingSchedule& g,
               const DriveSchedule& drive, const FockCutoff& cutoff, double t) {
  return Hamiltonian(kind, params, g, drive, cutoff).rate(t);
}

Operator static_hamiltonian(ModelKind kind, const SystemParams& params, const FockCutoff& cutoff,
                            double omega_atom, double g) {
  return Hamiltonian(kind, params, CouplingSchedule::constant(g), DriveSchedule::constant(omega_atom),
                     cutoff)
      .at(0.0);
}

}  // namespace cqed
