#include "cqed/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cqed {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

/// One JSON object being read. Keys that were never asked for are reported
/// by finish().
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(where() + ": expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, key);
  }

  void optional(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else {
        out = as_number(*v, key);
      }
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ValidationError(field(key) + ": expected an integer");
      out = v->get<Int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ValidationError(field(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ValidationError(field(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  void pair(const std::string& key, std::array<double, 2>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->size() != 2) {
        throw ValidationError(field(key) + ": expected an array of two numbers");
      }
      out = {as_number((*v)[0], key), as_number((*v)[1], key)};
    }
  }

  std::optional<Section> child(const std::string& key) {
    if (const json* v = find(key)) return Section(*v, field(key));
    return std::nullopt;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ValidationError(field(it.key()) + ": unknown key");
    }
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ValidationError(field(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field(key) + ": must be finite");
    return x;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(field + ": " + e.what());
  }
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["model"] = to_string(c.model);
  j["params"] = {{"omega", c.params.omega},
                 {"omega0", c.params.omega0},
                 {"epsilon", c.params.epsilon},
                 {"g0", c.params.g0},
                 {"eta", optional_number(c.eta)}};
  j["cutoff"] = {{"n_max", c.n_max}};
  j["baths"] = {{"gamma", c.baths.gamma},
                {"t_atom", c.baths.t_atom},
                {"kappa", c.baths.kappa},
                {"t_cavity", c.baths.t_cavity}};
  j["integrator"] = {{"min_steps_per_period", c.policy.min_steps_per_period},
                     {"isochore_rate_factor", c.policy.isochore_rate_factor},
                     {"max_step", c.policy.max_step},
                     {"leakage_tol", c.policy.leakage_tol},
                     {"renormalize_trace", c.policy.renormalize_trace}};
  const auto& d = c.cycle.durations;
  j["cycle"] = {{"optimize_t3", c.cycle.optimize_t3},
                {"t3_window", {c.cycle.t3_window[0], c.cycle.t3_window[1]}},
                {"durations",
                 {{"hot", optional_number(d.hot)},
                  {"work", optional_number(d.work)},
                  {"cold", optional_number(d.cold)},
                  {"reset", optional_number(d.reset)}}}};
  j["rabi"] = {{"regime", to_string(c.rabi.regime)},
               {"nbar", c.rabi.settings.nbar},
               {"tail_tol", c.rabi.settings.tail_tol},
               {"window_factor", c.rabi.settings.window_factor},
               {"duration", optional_number(c.rabi.settings.duration)}};
  j["sweep"] = {{"eta_from", optional_number(c.sweep.eta_from)},
                {"eta_to", optional_number(c.sweep.eta_to)},
                {"steps", c.sweep.steps}};
  j["output"] = {{"directory", c.output.directory},
                 {"thin", c.policy.thin},
                 {"max_rows", c.policy.max_rows}};
  return j;
}

RunConfig config_from_json(const json& tree) {
  RunConfig c;
  Section root(tree, "");

  if (const json* m = root.find("model")) {
    if (!m->is_string()) throw ValidationError("model: expected \"jc\" or \"rabi\"");
    c.model = with_field("model", [&] { return model_from_string(m->get<std::string>()); });
  }
  if (auto s = root.child("params")) {
    s->number("omega", c.params.omega);
    s->number("omega0", c.params.omega0);
    s->number("epsilon", c.params.epsilon);
    s->number("g0", c.params.g0);
    s->optional("eta", c.eta);
    s->finish();
  }
  if (auto s = root.child("cutoff")) {
    s->integer("n_max", c.n_max);
    s->finish();
  }
  if (auto s = root.child("baths")) {
    s->number("gamma", c.baths.gamma);
    s->number("t_atom", c.baths.t_atom);
    s->number("kappa", c.baths.kappa);
    s->number("t_cavity", c.baths.t_cavity);
    s->finish();
  }
  if (auto s = root.child("integrator")) {
    s->integer("min_steps_per_period", c.policy.min_steps_per_period);
    s->number("isochore_rate_factor", c.policy.isochore_rate_factor);
    s->number("max_step", c.policy.max_step);
    s->number("leakage_tol", c.policy.leakage_tol);
    s->boolean("renormalize_trace", c.policy.renormalize_trace);
    s->finish();
  }
  if (auto s = root.child("cycle")) {
    s->boolean("optimize_t3", c.cycle.optimize_t3);
    s->pair("t3_window", c.cycle.t3_window);
    if (auto d = s->child("durations")) {
      d->optional("hot", c.cycle.durations.hot);
      d->optional("work", c.cycle.durations.work);
      d->optional("cold", c.cycle.durations.cold);
      d->optional("reset", c.cycle.durations.reset);
      d->finish();
    }
    s->finish();
  }
  if (auto s = root.child("rabi")) {
    if (const json* r = s->find("regime")) {
      if (!r->is_string()) throw ValidationError("rabi.regime: expected \"jc\" or \"adce\"");
      c.rabi.regime = with_field("rabi.regime", [&] { return regime_from_string(r->get<std::string>()); });
    }
    s->number("nbar", c.rabi.settings.nbar);
    s->number("tail_tol", c.rabi.settings.tail_tol);
    s->number("window_factor", c.rabi.settings.window_factor);
    s->optional("duration", c.rabi.settings.duration);
    s->finish();
  }
  if (auto s = root.child("sweep")) {
    s->optional("eta_from", c.sweep.eta_from);
    s->optional("eta_to", c.sweep.eta_to);
    s->integer("steps", c.sweep.steps);
    s->finish();
  }
  if (auto s = root.child("output")) {
    s->string("directory", c.output.directory);
    s->integer("thin", c.policy.thin);
    s->integer("max_rows", c.policy.max_rows);
    s->finish();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ValidationError(path.string() + ": empty config, expected a JSON object");
  }
  json tree;
  try {
    tree = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  RunConfig c = config_from_json(tree);
  validate(c);
  return c;
}

std::vector<std::string> validate(const RunConfig& c) {
  auto positive = [](double x, const std::string& what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(what + " must be finite and > 0");
  };
  auto non_negative = [](double x, const std::string& what) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(what + " must be finite and >= 0");
  };

  if (c.n_max < 1) throw ValidationError("cutoff.n_max must be >= 1");
  if (c.eta) positive(*c.eta, "params.eta");
  positive(c.baths.gamma, "baths.gamma");
  positive(c.baths.kappa, "baths.kappa");
  non_negative(c.baths.t_atom, "baths.t_atom");
  non_negative(c.baths.t_cavity, "baths.t_cavity");
  c.policy.validate();

  const auto& w = c.cycle.t3_window;
  if (!(w[0] >= 0.0) || !(w[1] > w[0])) {
    throw ValidationError("cycle.t3_window must satisfy 0 <= lo < hi");
  }
  const auto& d = c.cycle.durations;
  if (d.hot) positive(*d.hot, "cycle.durations.hot");
  if (d.work) positive(*d.work, "cycle.durations.work");
  if (d.cold) positive(*d.cold, "cycle.durations.cold");
  if (d.reset) positive(*d.reset, "cycle.durations.reset");

  non_negative(c.rabi.settings.nbar, "rabi.nbar");
  if (!(c.rabi.settings.tail_tol > 0.0 && c.rabi.settings.tail_tol < 1.0)) {
    throw ValidationError("rabi.tail_tol must lie in (0, 1)");
  }
  positive(c.rabi.settings.window_factor, "rabi.window_factor");
  if (c.rabi.settings.duration) positive(*c.rabi.settings.duration, "rabi.duration");

  if (c.sweep.steps < 1) throw ValidationError("sweep.steps must be >= 1");
  if (c.sweep.eta_from) positive(*c.sweep.eta_from, "sweep.eta_from");
  if (c.sweep.eta_to) positive(*c.sweep.eta_to, "sweep.eta_to");
  if (c.output.directory.empty()) throw ValidationError("output.directory must not be empty");

  return validate(resolved_params(c), FockCutoff(c.n_max));
}

double resolve_eta(const RunConfig& c) {
  if (c.eta) return *c.eta;
  SystemParams p = c.params;
  p.eta = 0.0;
  validate(p, FockCutoff(c.n_max));
  return resonance_report(c.model, p, FockCutoff(c.n_max), 0).eta_sideband_refined;
}

SystemParams resolved_params(const RunConfig& c) {
  SystemParams p = c.params;
  p.eta = resolve_eta(c);
  return p;
}

CycleSpec cycle_spec(const RunConfig& c) {
  CycleSpec s = otto_cycle(c.model, resolved_params(c), FockCutoff(c.n_max), c.baths);
  const auto& d = c.cycle.durations;
  if (d.hot) s.strokes[0].duration = *d.hot;
  if (d.work) s.strokes[1].duration = *d.work;
  if (d.cold) s.strokes[2].duration = *d.cold;
  if (d.reset) s.strokes[3].duration = *d.reset;
  // An explicit work duration takes precedence over the t3 search.
  s.optimize_t3 = c.cycle.optimize_t3 && !d.work;
  s.t3_window = c.cycle.t3_window;
  return s;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace cqed
