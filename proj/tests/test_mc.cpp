#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <optional>
#include <fstream>
#include <sstream>
#include <vector>

#include "hurstq/csv.hpp"
#include "hurstq/mc.hpp"

using namespace hurstq;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.model = {"fbm", 0.7, 1.0};
  cfg.n = 256;
  cfg.replications = 12;
  cfg.seed = 31415;
  cfg.estimators = {EstimatorSpec::preset("median"), EstimatorSpec::preset("qv"),
                    EstimatorSpec::preset("whittle")};
  return cfg;
}

std::string summary_string(const McReport& report) {
  std::ostringstream out;
  write_mc_summary_csv(out, report);
  return out.str();
}

std::string raw_string(const McReport& report) {
  std::ostringstream out;
  write_mc_raw_csv(out, report);
  return out.str();
}

}  // namespace

TEST_CASE("monte carlo runs are identical across thread counts") {
  ExperimentConfig cfg = small_config();
  cfg.contaminate = true;

  cfg.threads = 1;
  const McReport serial = run_mc(cfg);
  cfg.threads = 8;
  const McReport parallel = run_mc(cfg);

  // thread count is configuration, not provenance: compare the tables
  CHECK(serial.raw == parallel.raw);
  CHECK(raw_string(serial) == raw_string(parallel));
  for (std::size_t e = 0; e < serial.summaries.size(); ++e) {
    CHECK(serial.summaries[e].mean == parallel.summaries[e].mean);
    CHECK(serial.summaries[e].sd == parallel.summaries[e].sd);
  }
}

TEST_CASE("single replication reports an empty sd field") {
  ExperimentConfig cfg = small_config();
  cfg.replications = 1;
  cfg.estimators = {EstimatorSpec::preset("median")};
  const McReport report = run_mc(cfg);
  REQUIRE(report.summaries.size() == 1);
  CHECK(report.summaries[0].ok == 1);
  CHECK(std::isnan(report.summaries[0].sd));
  CHECK(report.summaries[0].mean == *report.raw[0][0]);
  CHECK(summary_string(report).find("median," ) != std::string::npos);
  // mean,,ok,failures with the sd slot empty
  const std::string line = summary_string(report);
  CHECK(line.find(",,1,0") != std::string::npos);
}

TEST_CASE("summary recomputes exactly from the raw csv") {
  const McReport report = run_mc(small_config());
  std::istringstream raw(raw_string(report));
  std::string line;
  // skip comments and the header row
  while (std::getline(raw, line) && !line.empty() && line[0] == '#') {
  }
  std::vector<std::vector<double>> columns(report.summaries.size());
  while (std::getline(raw, line)) {
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // replication index
    for (auto& column : columns) {
      std::getline(row, cell, ',');
      if (!cell.empty()) column.push_back(std::stod(cell));
    }
  }
  for (std::size_t e = 0; e < columns.size(); ++e) {
    REQUIRE(columns[e].size() ==
            static_cast<std::size_t>(report.summaries[e].ok));
    double mean = 0.0;
    for (double v : columns[e]) mean += v;
    mean /= columns[e].size();
    double ss = 0.0;
    for (double v : columns[e]) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (columns[e].size() - 1));
    CHECK(std::abs(mean - report.summaries[e].mean) < 1e-12);
    CHECK(std::abs(sd - report.summaries[e].sd) < 1e-12);
  }
}

TEST_CASE("failure accounting") {
  std::vector<std::vector<std::optional<double>>> raw(
      20, std::vector<std::optional<double>>(1, 0.5));
  raw[3][0] = std::nullopt;  // 5% failures: tolerated and counted
  const auto ok = summarize_estimates(raw, {"est"});
  CHECK(ok[0].failures == 1);
  CHECK(ok[0].ok == 19);

  raw[5][0] = raw[8][0] = std::nullopt;  // 15%: the study aborts
  CHECK_THROWS_AS(summarize_estimates(raw, {"est"}), std::runtime_error);
}

TEST_CASE("estimator presets and study configuration") {
  const auto estimators = study_estimators();
  REQUIRE(estimators.size() == 6);
  CHECK(estimators[0].label == "median");
  CHECK(estimators[1].p == std::vector<double>{0.9});
  CHECK(estimators[2].transform == "power");
  CHECK(estimators[3].beta1 == 0.1);
  CHECK(estimators[4].kind == "qv");
  CHECK(estimators[5].kind == "whittle");
  CHECK_THROWS_AS(EstimatorSpec::preset("nope"), std::invalid_argument);

  const auto cfg = study_config("exp", true, 100, 9, 2);
  CHECK(cfg.model.type == "exp");
  CHECK(cfg.model.hurst == 0.8);
  CHECK(cfg.n == 1000);
  CHECK(cfg.contaminate);
}

TEST_CASE("config json round trip") {
  ExperimentConfig cfg = small_config();
  cfg.contaminate = true;
  cfg.contamination.snr_db = 18.0;
  cfg.estimators.push_back(EstimatorSpec::preset("trim10"));

  const std::string text = config_to_json(cfg);
  const ExperimentConfig back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.model.type == cfg.model.type);
  CHECK(back.model.hurst == cfg.model.hurst);
  CHECK(back.seed == cfg.seed);
  CHECK(back.contamination.snr_db == 18.0);
  REQUIRE(back.estimators.size() == cfg.estimators.size());
  CHECK(back.estimators[3].beta1 == 0.1);

  // presets may be given as bare strings
  const auto from_names = config_from_json(
      R"({"estimators": ["median", "whittle"], "n": 128})");
  CHECK(from_names.estimators.size() == 2);
  CHECK(from_names.estimators[1].kind == "whittle");
  CHECK(from_names.n == 128);
}

TEST_CASE("shipped example configs round-trip through the parser") {
  for (const char* name : {"table1_fbm_clean.json", "table1_fbm_contaminated.json",
                           "clt_check.json"}) {
    const std::string file = std::string(HURSTQ_SOURCE_DIR) + "/configs/" + name;
    std::ifstream in(file);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ExperimentConfig cfg = config_from_json(buffer.str());
    CHECK(cfg.estimators.size() == (std::string(name) == "clt_check.json" ? 3 : 6));
    const std::string normalized = config_to_json(cfg);
    CHECK(config_to_json(config_from_json(normalized)) == normalized);
  }
}

TEST_CASE("estimator failures abort the study past the 10% gate") {
  ExperimentConfig cfg = small_config();
  cfg.n = 32;  // below the whittle minimum: every replication fails
  cfg.replications = 10;
  cfg.estimators = {EstimatorSpec::preset("median"),
                    EstimatorSpec::preset("whittle")};
  CHECK_THROWS_WITH_AS(run_mc(cfg), doctest::Contains("whittle"),
                       std::runtime_error);

  // clean runs carry no failure log
  const McReport ok = run_mc(small_config());
  CHECK(ok.failure_log.empty());
  CHECK(summary_string(ok).find("# failed:") == std::string::npos);
}

TEST_CASE("configuration-level failures surface from worker threads") {
  ExperimentConfig cfg = small_config();
  cfg.model.type = "exp";
  cfg.n = (1 << 14) + 8;  // beyond the dense-synthesis cutoff
  cfg.threads = 2;
  CHECK_THROWS_WITH_AS(run_mc(cfg), doctest::Contains("2^14"),
                       std::runtime_error);
}

TEST_CASE("path csv round trip and error reporting") {
  const auto path = synth_general(ProcessModel::fbm(0.6, 2.0), 50, 99);
  std::ostringstream out;
  write_path_csv(out, path);

  std::istringstream in(out.str());
  const SamplePath back = read_path_csv(in);
  CHECK(back.values == path.values);  // %.17g round-trips doubles exactly
  CHECK(back.model.label() == "fbm");
  CHECK(back.model.hurst() == 0.6);
  CHECK(back.model.sigma2() == 2.0);
  CHECK(back.seed == 99);

  std::istringstream bad("# n=2\n1.25\nnot-a-number\n");
  CHECK_THROWS_WITH_AS(read_path_csv(bad, "bad.csv"),
                       doctest::Contains("bad.csv:3"), std::runtime_error);

  std::istringstream mismatch("# n=3\n1.0\n2.0\n");
  CHECK_THROWS_AS(read_path_csv(mismatch), std::runtime_error);
}

TEST_CASE("estimate_once dispatches per kind") {
  const auto path = synth_general(ProcessModel::fbm(0.8), 800, 4);

  EstimatorSpec median = EstimatorSpec::preset("median");
  median.filter = "db4";
  EstimatorConfig direct;
  direct.filter = Filter::named("db4");
  CHECK(estimate_once(path.values, median) ==
        estimate_h(path.values, direct).h_hat);

  EstimatorSpec qv = EstimatorSpec::preset("qv");
  qv.filter = "inc2";
  CHECK(estimate_once(path.values, qv) ==
        estimate_h_quadratic_variations(path.values, Filter::named("inc2"), 5)
            .h_hat);

  const EstimatorSpec whittle = EstimatorSpec::preset("whittle");
  CHECK(estimate_once(path.values, whittle) == estimate_h_whittle(path.values));

  EstimatorSpec custom = EstimatorSpec::preset("median");
  custom.filter = "custom";
  custom.filter_coeffs = {1.0, -2.0, 1.0};
  CHECK(std::isfinite(estimate_once(path.values, custom)));
}
