#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqed/cli.hpp"
#include "cqed/output.hpp"

using namespace cqed;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = CQED_CONFIG_DIR;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cqed_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cqed");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("config round trip", "[cli_io]") {
  RunConfig c;
  c.model = ModelKind::rabi;
  c.eta = 0.81;
  c.cycle.durations.work = 123.0;
  c.rabi.regime = RabiRegime::adce;
  c.sweep.eta_from = 0.7;
  c.policy.thin = 3;
  const RunConfig back = config_from_json(to_json(c));
  CHECK(back == c);
  CHECK(config_hash(back) == config_hash(c));
  c.policy.thin = 4;
  CHECK(config_hash(back) != config_hash(c));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("fig1 preset", "[cli_io]") {
  const RunConfig c = load_config(kConfigs / "fig1.json");
  CHECK(c.model == ModelKind::jaynes_cummings);
  CHECK(c.params.omega0 == 1.8);
  CHECK(c.params.epsilon == 0.144);
  CHECK(c.params.g0 == 0.05);
  CHECK(c.baths.t_atom == Catch::Approx(2.8 * 1.8));
  CHECK(c.n_max == 4);
  CHECK_FALSE(c.eta.has_value());
  CHECK_THAT(resolve_eta(c), WithinAbs(0.80623, 5e-6));
  CHECK(validate(c).empty());

  const RunConfig r = load_config(kConfigs / "fig3.json");
  CHECK(r.model == ModelKind::rabi);
  CHECK(r.n_max == 15);
  CHECK(r.rabi.settings.nbar == 1.8);
}

TEST_CASE("config errors name the field", "[cli_io]") {
  const fs::path dir = scratch_dir("config_errors");
  CHECK_THROWS_WITH(load_config(write_file(dir / "empty.json", "")),
                    ContainsSubstring("empty config"));
  CHECK_THROWS_WITH(load_config(write_file(dir / "typo.json", R"({"params": {"omegaa": 1}})")),
                    ContainsSubstring("params.omegaa"));
  CHECK_THROWS_WITH(load_config(write_file(dir / "type.json", R"({"cutoff": {"n_max": "four"}})")),
                    ContainsSubstring("cutoff.n_max"));
  CHECK_THROWS_WITH(load_config(write_file(dir / "strong.json", R"({"params": {"g0": 0.5}})")),
                    ContainsSubstring("weak coupling violated"));
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ValidationError);
}

TEST_CASE("CSV header and value format", "[cli_io]") {
  const auto h = csv_header(FockCutoff(1));
  const std::vector<std::string> expected{"t", "stroke", "U", "S", "W", "Q_a", "Q_f", "P_inst",
                                          "P_av", "P_c_av", "pop_g0", "pop_e0", "pop_g1", "pop_e1"};
  CHECK(h == expected);
  CHECK(format_value(std::nan("")) == "nan");
  CHECK(format_value(0.1) == "0.1");

  std::istringstream bad("t,U\n1,2\n3\n");
  CHECK_THROWS_AS(parse_csv(bad), std::runtime_error);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), std::runtime_error);
}

TEST_CASE("otto run: CSV totals match the summary, reruns are identical", "[cli_io]") {
  const fs::path a = scratch_dir("otto");
  const std::string cfg = (kConfigs / "fig1.json").string();
  REQUIRE(cli({"otto", "--config", cfg, "--output", a.string()}).code == exit_ok);
  const std::string csv = slurp(a / "otto.csv"), summary_text = slurp(a / "otto.json");
  REQUIRE(cli({"otto", "--config", cfg, "--output", a.string()}).code == exit_ok);
  CHECK(slurp(a / "otto.csv") == csv);
  CHECK(slurp(a / "otto.json") == summary_text);

  const auto summary = nlohmann::json::parse(slurp(a / "otto.json"));
  const auto totals = totals_from_csv(read_csv(a / "otto.csv"));
  const auto& strokes = summary.at("cycle").at("strokes");
  REQUIRE(totals.size() == 4);
  REQUIRE(strokes.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(totals[i].stroke == static_cast<int>(i + 1));
    CHECK_THAT(totals[i].W, WithinAbs(strokes[i].at("W").get<double>(), 1e-9));
    CHECK_THAT(totals[i].Q_a, WithinAbs(strokes[i].at("Q_a").get<double>(), 1e-9));
    CHECK_THAT(totals[i].Q_f, WithinAbs(strokes[i].at("Q_f").get<double>(), 1e-9));
    CHECK_THAT(totals[i].U_end, WithinAbs(strokes[i].at("U_end").get<double>(), 1e-9));
  }
  CHECK(summary.at("config_hash").get<std::string>().size() == 16);
  CHECK(summary.at("code_version").get<std::string>() == code_version());
}

TEST_CASE("exit codes", "[cli_io]") {
  const fs::path dir = scratch_dir("exit_codes");
  CHECK(cli({"--help"}).code == exit_ok);
  CHECK(cli({}).code == exit_validation);
  CHECK(cli({"otto", "--bogus"}).code == exit_validation);

  const auto strong = cli({"resonance", "--g0", "0.5"});
  CHECK(strong.code == exit_validation);
  CHECK_THAT(strong.err, ContainsSubstring("weak coupling violated"));

  const auto empty = cli({"otto", "--config", write_file(dir / "e.json", "").string()});
  CHECK(empty.code == exit_validation);

  // With n_max = 1 every state sits in the top two Fock layers.
  const auto leak = cli({"stroke", "--eta", "0.806", "--n-max", "1", "--duration", "50",
                         "--output", dir.string()});
  CHECK(leak.code == exit_runtime);
  CHECK_THAT(leak.err, ContainsSubstring("Fock layers"));

  const auto report = cli({"resonance", "--config", (kConfigs / "fig1.json").string()});
  REQUIRE(report.code == exit_ok);
  const auto j = nlohmann::json::parse(report.out);
  CHECK_THAT(j.at("eta_r").get<double>(), WithinAbs(0.80623, 5e-6));
}

TEST_CASE("parallel sweep matches sequential strokes", "[cli_io]") {
  RunConfig c = load_config(kConfigs / "fig1.json");
  c.cycle.durations.work = 60.0;
  const std::vector<double> etas{0.70, 0.80623, 0.75};
  const auto points = run_sweep(c, etas, 3);
  REQUIRE(points.size() == 3);
  const auto prepared = prepare_work_stroke(cycle_spec(c), c.policy);
  for (size_t i = 0; i < etas.size(); ++i) {
    CHECK(points[i].eta == etas[i]);
    const auto r = run_work_stroke(c, prepared, etas[i], 60.0);
    CHECK(points[i].W == r.W);
    CHECK(points[i].W_c == r.W_c);
  }
}
