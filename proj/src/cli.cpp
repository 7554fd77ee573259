#include "cqed/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "cqed/output.hpp"

namespace cqed {

using nlohmann::json;

PreparedStroke prepare_work_stroke(const CycleSpec& cycle, const StepPolicy& policy) {
  if (cycle.strokes.empty() || cycle.strokes.front().kind != StrokeKind::hot_isochore) {
    throw ValidationError("the cycle must start with the hot isochore");
  }
  const auto ground = DensityMatrix::pure(basis_state(cycle.cutoff, 0, AtomLevel::ground));
  return {run_stroke(ground, 0.0, 1, cycle.strokes.front(), cycle, policy)};
}

double work_duration(const RunConfig& config, const PreparedStroke& prepared) {
  if (config.cycle.durations.work) return *config.cycle.durations.work;
  // The same length at every eta: the t3 of the resonant drive.
  RunConfig resonant = config;
  resonant.eta.reset();
  const CycleSpec cycle = cycle_spec(resonant);
  if (config.cycle.optimize_t3) {
    return optimize_t3_from(prepared.rho(), prepared.t2(), cycle, config.policy).duration;
  }
  return cycle.strokes[1].duration;
}

StrokeRecord run_work_stroke(const RunConfig& config, const PreparedStroke& prepared, double eta,
                             double duration) {
  if (!(eta > 0.0)) throw ValidationError("eta must be > 0");
  CycleSpec cycle = cycle_spec(config);
  cycle.params.eta = eta;
  return run_stroke(prepared.rho(), prepared.t2(), 2, StrokeSpec::work_extraction(duration), cycle,
                    config.policy);
}

std::vector<SweepPoint> run_sweep(const RunConfig& config, const std::vector<double>& etas,
                                  unsigned threads) {
  const PreparedStroke prepared = prepare_work_stroke(cycle_spec(config), config.policy);
  const double duration = work_duration(config, prepared);

  std::vector<SweepPoint> points(etas.size());
  std::vector<std::exception_ptr> errors(etas.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < etas.size(); i = next++) {
      try {
        const StrokeRecord r = run_work_stroke(config, prepared, etas[i], duration);
        SweepPoint& p = points[i];
        p.eta = etas[i];
        p.t_end = r.t_end - r.t_start;
        p.W = r.W;
        p.W_c = r.W_c;
        p.P_av = avg_quantum_power(r, r.t_end);
        p.P_c_av = avg_classical_power(r, r.t_end);
        p.warnings = r.warnings;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<size_t>(etas.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return points;
}

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> output;
  std::optional<std::string> model;
  std::optional<double> omega, omega0, epsilon, g0, eta;
  std::optional<int> n_max;
  std::optional<int> thin;
  std::optional<long long> max_rows;
  std::optional<double> leakage_tol;
};

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--output", o.output, "output directory");
  app.add_option("--model", o.model, "jc or rabi");
  app.add_option("--omega", o.omega, "cavity frequency");
  app.add_option("--omega0", o.omega0, "atomic transition frequency");
  app.add_option("--epsilon", o.epsilon, "modulation amplitude");
  app.add_option("--g0", o.g0, "coupling plateau");
  app.add_option("--n-max", o.n_max, "Fock cutoff");
  app.add_option("--thin", o.thin, "keep every k-th sample as a CSV row");
  app.add_option("--max-rows", o.max_rows, "row budget per stroke");
  app.add_option("--leakage-tol", o.leakage_tol, "population allowed in the top two Fock layers");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.output) c.output.directory = *o.output;
  if (o.model) c.model = model_from_string(*o.model);
  if (o.omega) c.params.omega = *o.omega;
  if (o.omega0) c.params.omega0 = *o.omega0;
  if (o.epsilon) c.params.epsilon = *o.epsilon;
  if (o.g0) c.params.g0 = *o.g0;
  if (o.eta) c.eta = *o.eta;
  if (o.n_max) c.n_max = *o.n_max;
  if (o.thin) c.policy.thin = *o.thin;
  if (o.max_rows) c.policy.max_rows = *o.max_rows;
  if (o.leakage_tol) c.policy.leakage_tol = *o.leakage_tol;
  return c;
}

std::filesystem::path output_dir(const RunConfig& c) {
  std::filesystem::path dir(c.output.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

json summary_head(const std::string& command, const RunConfig& c,
                  const std::vector<std::string>& warnings) {
  json j = provenance(c);
  j["command"] = command;
  j["resolved_eta"] = resolve_eta(c);
  j["validation_warnings"] = warnings;
  return j;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::string eta_tag(double eta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", eta);
  return buf;
}

int cmd_otto(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto warnings = validate(c);
  const CycleSpec cycle = cycle_spec(c);
  const CycleRecord rec = run_otto_cycle(cycle, c.policy);
  const auto dir = output_dir(c);

  std::vector<const StrokeRecord*> strokes;
  for (const auto& s : rec.strokes) strokes.push_back(&s);
  write_csv(dir / "otto.csv", strokes, cycle.cutoff);
  json j = summary_head("otto", c, warnings);
  j["resonance"] = to_json(resonance_report(c.model, cycle.params, cycle.cutoff, 0));
  j["cycle"] = to_json(rec);
  write_json(dir / "otto.json", j);

  print_warnings(err, rec.warnings);
  out << "Q_in  " << format_value(rec.Q_in) << "\nW_out " << format_value(rec.W_out)
      << "\nQ_out " << format_value(rec.Q_out) << "\nW_in  " << format_value(rec.W_in)
      << "\nsum   " << format_value(rec.cycle_sum()) << "\nwrote " << (dir / "otto.csv").string()
      << '\n';
  return exit_ok;
}

int cmd_stroke(const RunConfig& c, std::optional<double> duration, std::ostream& out,
               std::ostream& err) {
  if (!c.eta) throw ValidationError("stroke needs --eta");
  const auto warnings = validate(c);
  const PreparedStroke prepared = prepare_work_stroke(cycle_spec(c), c.policy);
  const double length = duration ? *duration : work_duration(c, prepared);
  const StrokeRecord rec = run_work_stroke(c, prepared, *c.eta, length);
  const auto dir = output_dir(c);

  const std::string name = "stroke_eta" + eta_tag(*c.eta);
  write_csv(dir / (name + ".csv"), {&rec}, FockCutoff(c.n_max));
  json j = summary_head("stroke", c, warnings);
  j["hot_isochore"] = to_json(prepared.hot);
  j["stroke"] = to_json(rec);
  j["P_av_end"] = avg_quantum_power(rec, rec.t_end);
  j["P_c_av_end"] = avg_classical_power(rec, rec.t_end);
  write_json(dir / (name + ".json"), j);

  print_warnings(err, rec.warnings);
  out << "W " << format_value(rec.W) << "\nP_av " << format_value(j["P_av_end"].get<double>())
      << "\nP_c_av " << format_value(j["P_c_av_end"].get<double>()) << "\nwrote "
      << (dir / (name + ".csv")).string() << '\n';
  return exit_ok;
}

int cmd_resonance(const RunConfig& c, int n, std::ostream& out, std::ostream& err) {
  const auto warnings = validate(c);
  print_warnings(err, warnings);
  SystemParams p = resolved_params(c);
  out << to_json(resonance_report(c.model, p, FockCutoff(c.n_max), n)).dump(2) << '\n';
  return exit_ok;
}

int cmd_rabi(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SystemParams p = c.params;
  p.eta = 0.0;
  const auto warnings = validate(p, FockCutoff(c.n_max));
  validate(c);
  const RabiResult r =
      run_rabi_extraction(c.rabi.regime, p, FockCutoff(c.n_max), c.rabi.settings, c.policy);
  const auto dir = output_dir(c);
  const std::string name = "rabi_" + to_string(c.rabi.regime);
  write_csv(dir / (name + ".csv"), {&r.record}, FockCutoff(c.n_max));
  json j = summary_head("rabi", c, warnings);
  j["rabi"] = to_json(r);
  write_json(dir / (name + ".json"), j);

  print_warnings(err, r.record.warnings);
  out << "eta " << format_value(r.eta) << "\nt_min " << format_value(r.t_min) << "\nW_min "
      << format_value(r.W_min) << "\nP_av " << format_value(r.P_av_min) << "\nP_c_av "
      << format_value(r.P_c_av_min) << "\nwrote " << (dir / (name + ".csv")).string() << '\n';
  return exit_ok;
}

int cmd_sweep(const RunConfig& c, unsigned threads, std::ostream& out, std::ostream& err) {
  if (!c.sweep.eta_from || !c.sweep.eta_to) throw ValidationError("sweep needs --eta-from and --eta-to");
  const auto warnings = validate(c);
  std::vector<double> etas;
  const int n = c.sweep.steps;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    etas.push_back(*c.sweep.eta_from + f * (*c.sweep.eta_to - *c.sweep.eta_from));
  }
  const auto points = run_sweep(c, etas, threads);
  const auto dir = output_dir(c);

  std::ofstream csv(dir / "sweep.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + (dir / "sweep.csv").string());
  csv << "eta,duration,W,W_c,P_av,P_c_av\n";
  json rows = json::array();
  for (const auto& p : points) {
    csv << format_value(p.eta) << ',' << format_value(p.t_end) << ',' << format_value(p.W) << ','
        << format_value(p.W_c) << ',' << format_value(p.P_av) << ',' << format_value(p.P_c_av)
        << '\n';
    rows.push_back({{"eta", p.eta}, {"duration", p.t_end}, {"W", p.W}, {"W_c", p.W_c},
                    {"P_av", p.P_av}, {"P_c_av", p.P_c_av}, {"warnings", p.warnings}});
    print_warnings(err, p.warnings);
  }
  json j = summary_head("sweep", c, warnings);
  j["points"] = rows;
  write_json(dir / "sweep.json", j);
  out << "wrote " << (dir / "sweep.csv").string() << '\n';
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Otto engine in a modulated cavity-QED system", "cqed"};
  app.require_subcommand(1);

  Overrides o_otto, o_stroke, o_res, o_rabi, o_sweep;
  auto* otto = app.add_subcommand("otto", "full four-stroke cycle");
  add_common(*otto, o_otto);
  otto->add_option("--eta", o_otto.eta, "modulation frequency (default: resonance)");

  std::optional<double> stroke_duration;
  auto* stroke = app.add_subcommand("stroke", "single work-extraction stroke after the hot isochore");
  add_common(*stroke, o_stroke);
  stroke->add_option("--eta", o_stroke.eta, "modulation frequency")->required();
  stroke->add_option("--duration", stroke_duration, "stroke length");

  int res_n = 0;
  auto* res = app.add_subcommand("resonance", "print the resonance report as JSON");
  add_common(*res, o_res);
  res->add_option("--eta", o_res.eta, "modulation frequency");
  res->add_option("--n", res_n, "photon number of the sideband |g,n+1> <-> |e,n>");

  std::optional<std::string> regime;
  std::optional<double> nbar, rabi_duration, window_factor;
  auto* rabi = app.add_subcommand("rabi", "Rabi-model extraction from a thermal cavity");
  add_common(*rabi, o_rabi);
  rabi->add_option("--regime", regime, "jc or adce");
  rabi->add_option("--nbar", nbar, "thermal photon number");
  rabi->add_option("--duration", rabi_duration, "stroke length");
  rabi->add_option("--window-factor", window_factor, "stroke length in units of pi/(2c)");

  std::optional<double> eta_from, eta_to;
  std::optional<int> sweep_steps;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "P_av and P_c_av at the stroke end versus eta");
  add_common(*sweep, o_sweep);
  sweep->add_option("--eta-from", eta_from, "first eta");
  sweep->add_option("--eta-to", eta_to, "last eta");
  sweep->add_option("--steps", sweep_steps, "number of eta values");
  sweep->add_option("--threads", threads, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_validation;
  }

  try {
    if (otto->parsed()) return cmd_otto(resolve(o_otto), out, err);
    if (stroke->parsed()) return cmd_stroke(resolve(o_stroke), stroke_duration, out, err);
    if (res->parsed()) return cmd_resonance(resolve(o_res), res_n, out, err);
    if (rabi->parsed()) {
      RunConfig c = resolve(o_rabi);
      if (regime) c.rabi.regime = regime_from_string(*regime);
      if (nbar) c.rabi.settings.nbar = *nbar;
      if (rabi_duration) c.rabi.settings.duration = *rabi_duration;
      if (window_factor) c.rabi.settings.window_factor = *window_factor;
      return cmd_rabi(c, out, err);
    }
    if (sweep->parsed()) {
      RunConfig c = resolve(o_sweep);
      if (eta_from) c.sweep.eta_from = *eta_from;
      if (eta_to) c.sweep.eta_to = *eta_to;
      if (sweep_steps) c.sweep.steps = *sweep_steps;
      return cmd_sweep(c, threads, out, err);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_validation;
}

}  // namespace cqed
