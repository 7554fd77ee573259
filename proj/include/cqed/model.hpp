#pragma once

#include <array>
#include <string>
#include <vector>

#include "cqed/hilbert.hpp"

namespace cqed {

enum class ModelKind { jaynes_cummings, rabi };

std::string to_string(ModelKind kind);
ModelKind model_from_string(const std::string& name);

/// Model constants, all angular frequencies in units of the cavity frequency.
struct SystemParams {
  double omega = 1.0;    // cavity
  double omega0 = 1.8;   // bare atomic transition
  double epsilon = 0.0;  // modulation amplitude
  double eta = 0.0;      // modulation frequency
  double g0 = 0.05;      // coupling plateau

  double detuning() const noexcept { return omega - omega0; }

  bool operator==(const SystemParams&) const = default;
};

/// Checks the weak-modulation, weak-coupling and dispersive conditions for
/// the given cutoff. Hard violations throw ValidationError; soft ones come
/// back as warnings.
std::vector<std::string> validate(const SystemParams& params, const FockCutoff& cutoff);

class CouplingSchedule {
 public:
  enum class Kind { zero, ramp_on, constant, ramp_off };

  static CouplingSchedule zero();
  static CouplingSchedule constant(double g0);
  /// g0 (1 - exp[-2 g0 (t - t_start)]) for t >= t_start, zero before.
  static CouplingSchedule ramp_on(double g0, double t_start);
  /// g0 exp[-2 g0 (t - t_start)] for t >= t_start, g0 before.
  static CouplingSchedule ramp_off(double g0, double t_start);

  double value(double t) const;
  double rate(double t) const;

  Kind kind() const noexcept { return kind_; }
  double g0() const noexcept { return g0_; }
  double t_start() const noexcept { return t_start_; }

 private:
  CouplingSchedule(Kind kind, double g0, double t_start) : kind_(kind), g0_(g0), t_start_(t_start) {}

  Kind kind_;
  double g0_;
  double t_start_;
};

class DriveSchedule {
 public:
  enum class Kind { constant, harmonic };

  static DriveSchedule constant(double omega0);
  /// omega0 + epsilon sin(eta (t - t_ref)).
  static DriveSchedule harmonic(double omega0, double epsilon, double eta, double t_ref);

  double value(double t) const;
  double rate(double t) const;

  Kind kind() const noexcept { return kind_; }
  double omega0() const noexcept { return omega0_; }
  double epsilon() const noexcept { return epsilon_; }
  double eta() const noexcept { return eta_; }
  double t_ref() const noexcept { return t_ref_; }

 private:
  DriveSchedule(Kind kind, double omega0, double epsilon, double eta, double t_ref)
      : kind_(kind), omega0_(omega0), epsilon_(epsilon), eta_(eta), t_ref_(t_ref) {}

  Kind kind_;
  double omega0_;
  double epsilon_;
  double eta_;
  double t_ref_;
};

/// H(t) = omega a^dag a + Omega_t sigma_z / 2 + g_t V, with V the JC or Rabi
/// interaction. The three operator terms are kept separately so that the
/// integrator can exploit their sparsity and symmetry sectors.
class Hamiltonian {
 public:
  static constexpr int kTerms = 3;
  using Coefficients = std::array<double, kTerms>;

  Hamiltonian(ModelKind kind, const SystemParams& params, CouplingSchedule coupling,
              DriveSchedule drive, const FockCutoff& cutoff);

  ModelKind kind() const noexcept { return kind_; }
  const SystemParams& params() const noexcept { return params_; }
  const FockCutoff& cutoff() const noexcept { return cutoff_; }
  const CouplingSchedule& coupling() const noexcept { return coupling_; }
  const DriveSchedule& drive() const noexcept { return drive_; }
  Index dim() const noexcept { return cutoff_.dim(); }

  /// {a^dag a, sigma_z / 2, V}.
  const std::array<Operator, kTerms>& terms() const noexcept { return terms_; }
  const Operator& interaction() const noexcept { return terms_[2]; }

  /// {omega, Omega_t, g_t} and their time derivatives.
  Coefficients coefficients(double t) const;
  Coefficients coefficient_rates(double t) const;
  bool is_static() const noexcept;

  Operator combine(const Coefficients& c) const;
  Operator at(double t) const { return combine(coefficients(t)); }
  /// Exact dH/dt from the analytic schedule derivatives.
  Operator rate(double t) const { return combine(coefficient_rates(t)); }

 private:
  ModelKind kind_;
  SystemParams params_;
  CouplingSchedule coupling_;
  DriveSchedule drive_;
  FockCutoff cutoff_;
  std::array<Operator, kTerms> terms_;
};

Operator jc_interaction(const FockCutoff& cutoff);
Operator rabi_interaction(const FockCutoff& cutoff);

Operator hamiltonian_jc(const SystemParams& params, const CouplingSchedule& g,
                        const DriveSchedule& drive, const FockCutoff& cutoff, double t);
Operator hamiltonian_rabi(const SystemParams& params, const CouplingSchedule& g,
                          const DriveSchedule& drive, const FockCutoff& cutoff, double t);
Operator dh_dt(ModelKind kind, const SystemParams& params, const CouplingSchedule& g,
               const DriveSchedule& drive, const FockCutoff& cutoff, double t);

/// Time-independent Hamiltonian at fixed Omega and g.
Operator static_hamiltonian(ModelKind kind, const SystemParams& params, const FockCutoff& cutoff,
                            double omega_atom, double g);

}  // namespace cqed
