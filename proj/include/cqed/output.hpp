#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/config.hpp"

namespace cqed {

std::string code_version();

/// t,stroke,U,S,W,Q_a,Q_f,P_inst,P_av,P_c_av followed by pop_g0, pop_e0,
/// pop_g1, ... in basis order 2n + s.
std::vector<std::string> csv_header(const FockCutoff& cutoff);

/// "%.12g"; NaN prints as "nan".
std::string format_value(double x);

/// Rows of the given strokes in order. Each stroke contributes its own
/// cumulative W, Q_a and Q_f.
void write_csv(std::ostream& out, const std::vector<const StrokeRecord*>& strokes,
               const FockCutoff& cutoff);
void write_csv(const std::filesystem::path& path, const std::vector<const StrokeRecord*>& strokes,
               const FockCutoff& cutoff);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column position; throws std::out_of_range for an unknown name.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Per-stroke totals rebuilt from the last row of each stroke segment.
struct StrokeTotals {
  int stroke = 0;
  double U_start = 0.0;
  double U_end = 0.0;
  double W = 0.0;
  double Q_a = 0.0;
  double Q_f = 0.0;
};
std::vector<StrokeTotals> totals_from_csv(const CsvTable& table);

nlohmann::json to_json(const ResonanceReport& report);
nlohmann::json to_json(const T3Result& t3);
nlohmann::json to_json(const AmplificationCheck& a);
/// Scalar summary of a stroke (no rows).
nlohmann::json to_json(const StrokeRecord& record);
nlohmann::json to_json(const CycleRecord& record);
nlohmann::json to_json(const RabiResult& result);

/// config, config_hash and code_version.
nlohmann::json provenance(const RunConfig& config);

/// Pretty-printed with a trailing newline. I/O failures name the path.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace cqed
