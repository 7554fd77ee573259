#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cqed/config.hpp"

namespace cqed {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_runtime = 2 };

/// Initial state of the work stroke: the hot isochore from |g,0>.
struct PreparedStroke {
  StrokeRecord hot;

  double t2() const noexcept { return hot.t_end; }
  const DensityMatrix& rho() const { return hot.final_state.value(); }
};
PreparedStroke prepare_work_stroke(const CycleSpec& cycle, const StepPolicy& policy);

/// Work-stroke length for `stroke` and `sweep`: the configured duration, or
/// the t3 found at the exact resonance, or pi/(2 lambda).
double work_duration(const RunConfig& config, const PreparedStroke& prepared);

/// Work stroke at modulation frequency eta from the prepared state.
StrokeRecord run_work_stroke(const RunConfig& config, const PreparedStroke& prepared,
                             double eta, double duration);

struct SweepPoint {
  double eta = 0.0;
  double t_end = 0.0;  // stroke length
  double W = 0.0;
  double W_c = 0.0;
  double P_av = 0.0;
  double P_c_av = 0.0;
  std::vector<std::string> warnings;
};
/// Points run concurrently; the result is in the order of `etas`.
std::vector<SweepPoint> run_sweep(const RunConfig& config, const std::vector<double>& etas,
                                  unsigned threads = 0);

/// Entry point of the `cqed` tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqed
