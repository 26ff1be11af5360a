#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fermigas/config.hpp"
#include "fermigas/output.hpp"
#include "fermigas/runner.hpp"
#include "json.hpp"

using namespace fermigas;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fermigas_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("configuration parsing") {
  const auto cfg = parse_run_config(R"({
    "command": "predict",
    "potential": {"kind": "harmonic_plus_one", "offset": 0},
    "interaction": {"kind": "square_barrier", "amplitude": 2, "radius": 1},
    "sweeps": {"n": [1e6], "beta": ["34/81", 0.4]},
    "tolerance": {"abs": 1e-11},
    "output": {"directory": "x", "json_mirror": true}
  })");
  CHECK(cfg.command == "predict");
  REQUIRE(cfg.potential);
  CHECK(cfg.potential->offset == 0.0);
  REQUIRE(cfg.sweeps.beta.size() == 2);
  CHECK(cfg.sweeps.beta[0] == "34/81");
  CHECK(cfg.sweeps.beta[1] == "0.4");
  CHECK(cfg.tolerance.abs == 1e-11);
  CHECK(cfg.tolerance.rel == Tolerance{}.rel);
  CHECK(cfg.output_directory == "x");
  CHECK(cfg.json_mirror);

  CHECK_THROWS_AS(parse_run_config(R"({"command": "tf"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "tf", "potential": {"kind": "harmonic_plus_one", "ofset": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "nope"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "budget", "sweeps": {"n": []}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "budget", "sweeps": {"n": [1e4]}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "tf", "potential": {"kind": "harmonic_plus_one", "offset": "1"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "scatter", "interaction": {"kind": "square_barrier", "radius": -1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"command": "verify-all", "options": {"points": 10}})"), ConfigError);
  CHECK_NOTHROW(default_run_config("verify-all"));
  CHECK_THROWS_AS(default_run_config("tf"), ConfigError);
}

TEST_CASE("resolved configuration carries every default") {
  const auto a = parse_run_config(R"({"command": "verify-all"})");
  const auto b = parse_run_config(R"({"command": "verify-all", "options": {"hbar": 0.05, "points": 1200}})");
  CHECK(resolved_config_json(a) == resolved_config_json(b));
  const auto j = nlohmann::json::parse(resolved_config_json(a));
  CHECK(j.at("tolerance").at("max_refinements") == Tolerance{}.max_refinements);
  CHECK(j.at("options").at("fill") == 10);
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = mant(gen) * std::pow(10.0, expo(gen));
    const auto text = format_number(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
  }
  CHECK(format_number(-0.0) == "0");
  CHECK_THROWS_AS(format_number(std::nan("")), NumericalError);
  CHECK_THROWS_AS(format_number(INFINITY), NumericalError);
}

TEST_CASE("csv rendering") {
  Table t;
  t.name = "demo";
  t.columns = {"x", "label", "count"};
  t.formulas = {"demo.identity"};
  t.add_row({1.5, std::string("a,b \"q\""), 3LL});
  CHECK_THROWS_AS(t.add_row({1.0}), NumericalError);
  const auto csv = render_csv(t, {"9.9", "{}"});
  CHECK(csv == "# fermigas 9.9\n# table: demo\n# config: {}\n# formulas: demo.identity\nx,label,count\n"
               "1.5,\"a,b \"\"q\"\"\",3\n");
  const auto j = nlohmann::json::parse(render_json(t, {"9.9", "{}"}));
  CHECK(j.at("rows").at(0).at(2) == 3);
}

TEST_CASE("tables are written all or nothing") {
  Table good;
  good.name = "good";
  good.columns = {"x"};
  good.add_row({1.0});
  Table bad = good;
  bad.name = "bad";
  bad.rows.push_back({std::nan("")});
  const auto dir = scratch("atomic");
  CHECK_THROWS_AS(write_tables({good, bad}, {"v", "{}"}, dir.string(), false), NumericalError);
  CHECK_FALSE(fs::exists(dir));
  write_tables({good}, {"v", "{}"}, dir.string(), true);
  CHECK(fs::exists(dir / "good.csv"));
  CHECK(fs::exists(dir / "good.json"));
  fs::remove_all(dir);
}

TEST_CASE("runner: offset trap shifts the multiplier by one") {
  const auto cfg = parse_run_config(R"({"command": "tf", "potential": {"kind": "harmonic_plus_one"}})");
  const auto result = execute(cfg);
  REQUIRE(result.tables.size() == 2);
  const auto& row = result.tables[0].rows.at(0);
  CHECK(std::get<double>(row[1]) == doctest::Approx(std::cbrt(24.0) + 1.0).epsilon(1e-10));
  for (const auto& r : result.tables[1].rows)
    for (const auto& c : r) CHECK(std::isfinite(std::get<double>(c)));
}

TEST_CASE("runner: worker count does not change output") {
  const auto cfg = parse_run_config(R"({
    "command": "scatter",
    "interaction": {"kind": "square_barrier", "amplitude": 1, "radius": 1},
    "sweeps": {"amplitudes": [1, 2, 5, 10, 50, 100, 1000]}
  })");
  const auto one = execute(cfg, 1);
  const auto three = execute(cfg, 3);
  REQUIRE(one.tables.size() == three.tables.size());
  const Provenance prov{"v", resolved_config_json(cfg)};
  for (std::size_t i = 0; i < one.tables.size(); ++i)
    CHECK(render_csv(one.tables[i], prov) == render_csv(three.tables[i], prov));
  const auto& lengths = one.tables[1];
  for (std::size_t i = 0; i < lengths.rows.size(); ++i) {
    const double amp = std::get<double>(lengths.rows[i][0]);
    const double k = std::sqrt(amp / 2.0);
    CHECK(std::get<double>(lengths.rows[i][1]) == doctest::Approx(1.0 - std::tanh(k) / k).epsilon(1e-9));
  }
}

TEST_CASE("runner: sweep commands") {
  const auto budget = execute(parse_run_config(R"({"command": "budget", "sweeps": {"n": [1e4, 1e6], "beta": ["2/5"]}})"));
  REQUIRE(budget.tables[0].rows.size() == 2);
  CHECK(std::get<std::string>(budget.tables[0].rows[0][2]) == "2/5");

  const auto spectra = execute(parse_run_config(R"({"command": "spectra", "sweeps": {"n": [1, 10, 100]},
                                                     "options": {"hbar": 0.5, "free_states": 4}})"));
  REQUIRE(spectra.tables.size() == 4);
  CHECK(spectra.tables[0].name == "spectra_levels");
  CHECK(std::get<double>(spectra.tables[0].rows[0][1]) == 1.5);
  CHECK(std::get<long long>(spectra.tables[0].rows[1][2]) == 3);

  const auto semi = execute(parse_run_config(R"({"command": "semiclass",
      "potential": {"kind": "harmonic_plus_one", "offset": 0}, "sweeps": {"levels": [1, 2, 3, 4, 5, 6]}})"));
  const auto& first = semi.tables[0].rows[0];
  CHECK(std::get<double>(first[1]) == doctest::Approx(1.0 / 48.0).epsilon(1e-9));

  CHECK_THROWS_AS(
      execute(parse_run_config(R"({"command": "boxes", "potential": {"kind": "harmonic_plus_one", "offset": 0},
          "interaction": {"kind": "square_barrier"}, "sweeps": {"n": [1e6], "beta": ["0.45"]}})")),
      ConfigError);
}
