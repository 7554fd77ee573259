#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/cycle.hpp"

namespace cqed {

/// Stroke lengths; unset entries use the default rule of otto_cycle.
struct DurationSettings {
  std::optional<double> hot;
  std::optional<double> work;
  std::optional<double> cold;
  std::optional<double> reset;

  bool operator==(const DurationSettings&) const = default;
};

struct CycleSettings {
  bool optimize_t3 = true;
  std::array<double, 2> t3_window{0.5, 1.5};
  DurationSettings durations;

  bool operator==(const CycleSettings&) const = default;
};

struct RabiConfig {
  RabiRegime regime = RabiRegime::jc;
  RabiSettings settings;

  bool operator==(const RabiConfig&) const = default;
};

struct SweepSettings {
  std::optional<double> eta_from;
  std::optional<double> eta_to;
  int steps = 11;

  bool operator==(const SweepSettings&) const = default;
};

struct OutputSettings {
  std::string directory = "out";

  bool operator==(const OutputSettings&) const = default;
};

/// Everything a run needs. params.eta is ignored; `eta` unset means the
/// exact red-sideband gap |g,1> <-> |e,0> of the configured model.
struct RunConfig {
  ModelKind model = ModelKind::jaynes_cummings;
  SystemParams params{1.0, 1.8, 0.144, 0.0, 0.05};
  std::optional<double> eta;
  int n_max = 4;
  BathSettings baths;
  StepPolicy policy;  // thin and max_rows live under "output" in the file
  CycleSettings cycle;
  RabiConfig rabi;
  SweepSettings sweep;
  OutputSettings output;

  bool operator==(const RunConfig&) const = default;
};

/// Full tree with every default written out; auto values are null.
nlohmann::json to_json(const RunConfig& config);
/// Strict reader: unknown keys and wrong types are ValidationErrors naming
/// the offending field. Missing keys take their defaults.
RunConfig config_from_json(const nlohmann::json& tree);
/// Parses, fills defaults and validates. An empty file is a schema error.
RunConfig load_config(const std::filesystem::path& path);

/// Re-checks every invariant with the resolved eta. Hard violations throw,
/// soft ones are returned.
std::vector<std::string> validate(const RunConfig& config);

double resolve_eta(const RunConfig& config);
SystemParams resolved_params(const RunConfig& config);
/// Otto cycle with the configured durations and t3 options.
CycleSpec cycle_spec(const RunConfig& config);

/// FNV-1a 64-bit hash of the compact JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace cqed
