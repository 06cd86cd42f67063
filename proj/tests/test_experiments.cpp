#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "affwalk/combinatorics.hpp"
#include "affwalk/criteria.hpp"
#include "affwalk/experiment.hpp"
#include "affwalk/report.hpp"

using namespace affwalk;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("affwalk_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

DecayFit synthetic_fit() {
  std::vector<std::pair<double, double>> logs;
  for (double n : {4.0, 6.0, 8.0, 10.0, 12.0}) {
    logs.emplace_back(n, 2.0 * decay_scale(n) + 1.0 / n);
  }
  return fit_decay_log(logs);
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig cfg;
  cfg.experiment = "quasi-local";
  cfg.seed = 123456789012345ULL;
  cfg.workers = 3;
  cfg.output_dir = "results/x";
  cfg.params = json{{"t", 4.0}, {"n", 16384}, {"gamma", 0.25}, {"p", {"1/5", "2/5"}}};
  const json j = cfg;
  const auto back = json::parse(j.dump()).get<ExperimentConfig>();
  CHECK(back.experiment == cfg.experiment);
  CHECK(back.seed == cfg.seed);
  CHECK(back.workers == cfg.workers);
  CHECK(back.output_dir == cfg.output_dir);
  CHECK(back.params == cfg.params);
  CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("config hash ignores workers and output location") {
  ExperimentConfig a{"kernel", 5, 1, "a", json{{"t_grid", {1.0}}}};
  ExperimentConfig b{"kernel", 5, 4, "b", json{{"t_grid", {1.0}}}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 6;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("invalid configs list every violation") {
  try {
    json::parse(R"({"experiment": 3, "workers": 0, "colour": "red"})").get<ExperimentConfig>();
    FAIL("accepted");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 3);
  }
  ExperimentConfig bad{"quasi-local", 1, 1, "", json{{"gamma", 0.7}, {"n", 3}, {"extra", 1}}};
  try {
    run_experiment(bad);
    FAIL("accepted");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("(0, 1/2)") != std::string::npos);
    CHECK(what.find("params.n") != std::string::npos);
    CHECK(what.find("params.extra: unknown parameter") != std::string::npos);
  }
  CHECK_THROWS_AS(run_experiment({"no-such-thing", 1, 1, "", json::object()}), ConfigError);
  CHECK_THROWS_AS(run_experiment({"toy-return", 1, 1, "", json{{"p", {"1/2", "1/3"}}}}),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment({"decay-fit", 1, 1, "", json{{"n2_grid", {8, 10, 12, 16}}}}),
                  ConfigError);
}

TEST_CASE("every CSV row carries seed and config hash") {
  for (const auto& name : {"kernel", "exact-return", "local-time", "toy-point", "walk-path"}) {
    ExperimentConfig cfg{name, 77, 1, "", json::object()};
    if (std::string(name) == "toy-point") {
      cfg.params = json{{"n", 40}, {"d", {2, -2}}};
    }
    const auto out = run_experiment(cfg);
    const std::string hash = config_hash(cfg);
    for (const auto& f : out.files) {
      if (f.name.ends_with(".csv")) {
        const auto rows = lines(f.content);
        REQUIRE(rows.size() >= 2);
        CHECK(rows[0].ends_with(",seed,config_hash"));
        for (std::size_t i = 1; i < rows.size(); ++i) {
          CHECK(rows[i].ends_with(",77," + hash));
        }
      }
    }
  }
}

TEST_CASE("diag-asymptote ratios increase along the t grid") {
  const ExperimentConfig cfg{"diag-asymptote", 1, 1, "", json{{"t_grid", {10, 50, 100, 200}}}};
  const auto rows = lines(run_experiment(cfg).files.at(0).content);
  REQUIRE(rows.size() == 5);
  double previous = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream row(rows[i]);
    std::string cell;
    for (int c = 0; c < 4; ++c) {
      std::getline(row, cell, ',');
    }
    const double ratio = std::stod(cell);
    CHECK(ratio > previous);
    previous = ratio;
  }
}

TEST_CASE("exact-return emits exact rationals") {
  const ExperimentConfig cfg{"exact-return", 1, 1, "", json{{"n2_grid", {4, 8}}}};
  const auto rows = lines(run_experiment(cfg).files.at(0).content);
  CHECK(rows[1].starts_with("4,1,32,0.03125,enumeration,"));
  CHECK(rows[2].starts_with("8,45,8192,"));
}

TEST_CASE("reruns and worker counts give identical bytes") {
  ExperimentConfig cfg{"rb-return", 9, 1, "", json{{"n2_grid", {8}}, {"samples", 30000}}};
  const auto a = run_experiment(cfg).files.at(0).content;
  const auto b = run_experiment(cfg).files.at(0).content;
  cfg.workers = 4;
  const auto c = run_experiment(cfg).files.at(0).content;
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("summary JSON carries provenance") {
  const ExperimentConfig cfg{"walk-stats", 3, 1, "", json{{"n", 64}, {"samples", 2000}}};
  const auto out = run_experiment(cfg);
  const auto j = json::parse(out.files.at(0).content);
  CHECK(j["provenance"]["seed"] == 3);
  CHECK(j["provenance"]["config_hash"] == config_hash(cfg));
  CHECK(j["provenance"]["version"] == kToolVersion);
  CHECK(j["b_n"]["n_samples"] == 2000);
}

TEST_CASE("contrast report") {
  const auto fit = synthetic_fit();
  const std::vector<std::pair<double, double>> series{{10.0, 0.5}, {20.0, 0.6}, {40.0, 0.75}};
  const std::string report = contrast_report(fit, series);
  CHECK(report == slurp(std::filesystem::path(AFFWALK_FIXTURE_DIR) / "contrast_synthetic.txt"));
  CHECK_THROWS_AS(contrast_report(DecayFit{}, series), std::invalid_argument);
  CHECK_THROWS_AS(contrast_report(fit, {}), std::invalid_argument);
}

TEST_CASE("outputs are written under the output directory") {
  const auto dir = scratch_dir("write");
  ExperimentConfig cfg{"exact-return", 1, 1, (dir / "nested").string(),
                       json{{"n2_grid", {4}}}};
  write_outputs(cfg, run_experiment(cfg));
  CHECK(std::filesystem::exists(dir / "nested" / "exact-return.csv"));
}

TEST_CASE("command line interface") {
  const auto dir = scratch_dir("cli");
  const auto config = dir / "cfg.json";
  std::ofstream(config) << R"({"experiment": "exact-return", "seed": 4, "params": {"n2_grid": [4, 8]}})";
  const std::string cli = AFFWALK_CLI;
  auto run = [&](const std::string& args) {
    return std::system((cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
  };
  CHECK(run("exact-return --config " + config.string() + " --out " + (dir / "a").string()) == 0);
  CHECK(run("exact-return --config " + config.string() + " --out " + (dir / "b").string() +
            " --workers 2") == 0);
  CHECK(slurp(dir / "a" / "exact-return.csv") == slurp(dir / "b" / "exact-return.csv"));
  CHECK(run("exact-return --config " + config.string() + " --seed 5 --out " +
            (dir / "c").string()) == 0);
  CHECK(lines(slurp(dir / "c" / "exact-return.csv"))[1].find(",5,") != std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"experiment": "quasi-local", "params": {"gamma": 0.7}})";
  CHECK(run("quasi-local --config " + (dir / "bad.json").string()) != 0);
  CHECK(slurp(dir / "log.txt").find("(0, 1/2)") != std::string::npos);
  CHECK(run("kernel --config " + config.string()) != 0);

  std::ofstream(dir / "acc.json") << R"({"experiment": "acceptance", "params": {"criteria": [5]}})";
  CHECK(run("acceptance --config " + (dir / "acc.json").string() + " --out " +
            (dir / "acc").string()) == 0);
  CHECK(slurp(dir / "acc" / "acceptance.txt").starts_with("criterion 5: PASS"));
}

TEST_CASE("acceptance formatting") {
  const std::vector<CriterionResult> results{{1, "one", true, "ok", 0.1, 1.0},
                                             {2, "two", false, "bad", 0.2, 1.0}};
  CHECK(format_acceptance(results) ==
        "criterion 1: PASS [one] ok\ncriterion 2: FAIL [two] bad\n1 of 2 criteria passed\n");
  CHECK_THROWS_AS(run_criterion(13), std::invalid_argument);
}
