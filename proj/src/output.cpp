#include "cqed/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifndef CQED_VERSION
#define CQED_VERSION "0.0.0"
#endif

namespace cqed {

using nlohmann::json;

namespace {

constexpr int kFixedColumns = 10;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json pair_json(double a, double b) { return json::array({a, b}); }

}  // namespace

std::string code_version() { return CQED_VERSION; }

std::vector<std::string> csv_header(const FockCutoff& cutoff) {
  std::vector<std::string> h{"t", "stroke", "U", "S", "W", "Q_a", "Q_f", "P_inst", "P_av", "P_c_av"};
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    h.push_back("pop_g" + std::to_string(n));
    h.push_back("pop_e" + std::to_string(n));
  }
  return h;
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<const StrokeRecord*>& strokes,
               const FockCutoff& cutoff) {
  const auto header = csv_header(cutoff);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const size_t dim = static_cast<size_t>(cutoff.dim());
  for (const StrokeRecord* s : strokes) {
    for (const StrokeRow& r : s->rows) {
      if (r.populations.size() != dim) {
        throw std::invalid_argument("row population count does not match the cutoff");
      }
      out << format_value(r.t) << ',' << r.stroke << ',' << format_value(r.U) << ','
          << format_value(r.S) << ',' << format_value(r.W) << ',' << format_value(r.Q_a) << ','
          << format_value(r.Q_f) << ',' << format_value(r.P_inst) << ','
          << format_value(r.P_av) << ',' << format_value(r.P_c_av);
      for (double p : r.populations) out << ',' << format_value(p);
      out << '\n';
    }
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<const StrokeRecord*>& strokes,
               const FockCutoff& cutoff) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, strokes, cutoff);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw std::runtime_error("CSV has no header");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        throw std::runtime_error("CSV line " + std::to_string(lineno) + ": bad value '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " values");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return parse_csv(in);
}

std::vector<StrokeTotals> totals_from_csv(const CsvTable& table) {
  const size_t c_stroke = table.column("stroke"), c_u = table.column("U"),
               c_w = table.column("W"), c_qa = table.column("Q_a"), c_qf = table.column("Q_f");
  std::vector<StrokeTotals> out;
  for (const auto& row : table.rows) {
    const int stroke = static_cast<int>(std::lround(row[c_stroke]));
    if (out.empty() || out.back().stroke != stroke) {
      StrokeTotals s;
      s.stroke = stroke;
      s.U_start = row[c_u];
      out.push_back(s);
    }
    StrokeTotals& s = out.back();
    s.U_end = row[c_u];
    s.W = row[c_w];
    s.Q_a = row[c_qa];
    s.Q_f = row[c_qf];
  }
  return out;
}

json to_json(const ResonanceReport& r) {
  json j = {{"n", r.n},
            {"detuning", r.detuning},
            {"bloch_siegert", r.bloch_siegert},
            {"eta_r", r.eta_r},
            {"eta_sideband_jc", r.eta_sideband_jc},
            {"eta_sideband_rabi", r.eta_sideband_rabi},
            {"eta_sideband_refined", r.eta_sideband_refined},
            {"eta_adce", r.eta_adce},
            {"lambda", r.lambda},
            {"half_transfer_time", number_or_null(r.half_transfer_time)}};
  j["eta_adce_refined"] = r.eta_adce_refined ? json(*r.eta_adce_refined) : json(nullptr);
  return j;
}

json to_json(const T3Result& t) {
  return {{"duration", t.duration},
          {"analytic_guess", t.analytic_guess},
          {"W_min", t.W_min},
          {"interior", t.interior},
          {"warnings", t.warnings}};
}

json to_json(const AmplificationCheck& a) {
  return {{"p_plus", a.p_plus}, {"p_minus", a.p_minus}, {"gap", a.gap}, {"estimate", a.estimate}};
}

json to_json(const StrokeRecord& s) {
  json j = {{"index", s.index},
            {"label", s.label},
            {"unitary", s.unitary},
            {"t_start", s.t_start},
            {"t_end", s.t_end},
            {"step", s.step},
            {"steps", s.steps},
            {"rows", s.rows.size()},
            {"U_start", s.U_start},
            {"U_end", s.U_end},
            {"delta_U", s.delta_U()},
            {"S_start", s.S_start},
            {"S_end", s.S_end},
            {"W", s.W},
            {"Q_a", s.Q_a},
            {"Q_f", s.Q_f},
            {"W_c", s.W_c},
            {"closure", s.closure()},
            {"warnings", s.warnings}};
  j["diagnostics"] = {{"max_entropy_drift", s.max_entropy_drift},
                      {"min_eigenvalue", s.min_eigenvalue},
                      {"max_leakage", s.max_leakage},
                      {"max_trace_drift", s.max_trace_drift},
                      {"min_tracking_overlap", s.min_tracking_overlap}};
  const auto& m = s.min_work;
  j["min_work"] = {{"found", m.found}, {"t", m.t}, {"W", m.W}, {"W_c", m.W_c}, {"U", m.U}};
  return j;
}

json to_json(const CycleRecord& c) {
  json strokes = json::array();
  for (const auto& s : c.strokes) strokes.push_back(to_json(s));
  json j = {{"strokes", strokes},
            {"boundaries", c.boundaries},
            {"Q_in", c.Q_in},
            {"W_out", c.W_out},
            {"Q_out", c.Q_out},
            {"W_in", c.W_in},
            {"cycle_sum", c.cycle_sum()},
            {"U_start", c.U_start},
            {"U_end", c.U_end},
            {"first_law_residual", c.first_law_residual()},
            {"final_ground_fidelity", c.final_ground_fidelity},
            {"warnings", c.warnings}};
  j["t3"] = c.t3 ? to_json(*c.t3) : json(nullptr);
  j["amplification"] = c.amplification ? to_json(*c.amplification) : json(nullptr);
  return j;
}

json to_json(const RabiResult& r) {
  return {{"regime", to_string(r.regime)},
          {"eta", r.eta},
          {"eta_closed_form", r.eta_closed_form},
          {"coupling", r.coupling},
          {"half_transfer_time", number_or_null(r.half_transfer_time)},
          {"duration", r.duration},
          {"truncated_mass", r.truncated_mass},
          {"source", {{"n", r.source_n}, {"level", "g"}}},
          {"target", {{"n", r.target_n}, {"level", "e"}}},
          {"t_min", r.t_min},
          {"W_min", r.W_min},
          {"P_av_min", r.P_av_min},
          {"P_c_av_min", r.P_c_av_min},
          {"source_population", pair_json(r.source_initial, r.source_at_min)},
          {"target_population", pair_json(r.target_initial, r.target_at_min)},
          {"stroke", to_json(r.record)}};
}

json provenance(const RunConfig& config) {
  return {{"config", to_json(config)},
          {"config_hash", config_hash(config)},
          {"code_version", code_version()}};
}

void write_json(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace cqed
