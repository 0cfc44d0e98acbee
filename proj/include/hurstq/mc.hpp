#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hurstq/asymptotics.hpp"
#include "hurstq/estimators.hpp"
#include "hurstq/synthesis.hpp"

namespace hurstq {

struct ModelSpec {
  std::string type = "fbm";  // fbm | exp | log
  double hurst = 0.5;
  double sigma2 = 1.0;
};

ProcessModel make_model(const ModelSpec& spec);

// One estimator column of a Monte Carlo study. "quantile" and "trim" run
// estimate_h with the matching statistic, "qv" is the quadratic-variations
// baseline and "whittle" needs no further fields. filter = "astar" applies
// the db4 pilot rule per replication.
struct EstimatorSpec {
  std::string label;
  std::string kind = "quantile";  // quantile | trim | qv | whittle
  std::string filter = "astar";   // inc1 | inc2 | db4 | astar | custom
  std::vector<double> filter_coeffs;  // used when filter == "custom"
  int num_scales = 5;
  std::vector<double> p{0.5};
  std::vector<double> c{1.0};
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::string transform = "log";  // log | power
  double alpha = 2.0;

  // Named presets: median, q90, quartiles, trim10, qv, whittle.
  static EstimatorSpec preset(std::string_view name);
};

double estimate_once(std::span<const double> path, const EstimatorSpec& spec);

struct ExperimentConfig {
  ModelSpec model;
  int n = 1000;
  int replications = 500;
  std::uint64_t seed = 1;
  std::vector<EstimatorSpec> estimators;
  bool contaminate = false;
  ContaminationSpec contamination;
  int threads = 1;  // 0 = hardware concurrency
};

struct McEstimatorSummary {
  std::string label;
  double mean = 0.0;
  double sd = 0.0;  // unbiased (R-1) divisor; NaN with fewer than 2 values
  int ok = 0;
  int failures = 0;
};

struct McReport {
  ExperimentConfig config;
  std::vector<McEstimatorSummary> summaries;
  // raw[r][e]: estimate of estimator e on replication r; nullopt = failure.
  std::vector<std::vector<std::optional<double>>> raw;
  // one line per failed (replication, estimator) with its streams, so the
  // case can be replayed from the master seed
  std::vector<std::string> failure_log;
};

// Runs the study. Replication r draws its path from stream (seed, 2r) and
// its contamination from stream (seed, 2r+1), so results do not depend on
// the number of worker threads. Throws if any estimator fails on more than
// 10% of the replications.
McReport run_mc(const ExperimentConfig& cfg);

std::vector<McEstimatorSummary> summarize_estimates(
    const std::vector<std::vector<std::optional<double>>>& raw,
    const std::vector<std::string>& labels, double max_failure_rate = 0.1);

// JSON round-trip for config files.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

// The estimator set of the simulation study: median, q90, quartiles,
// trim10, qv, whittle at M = 5 with the a* filter rule.
std::vector<EstimatorSpec> study_estimators();
ExperimentConfig study_config(const std::string& model_type, bool contaminated,
                              int replications, std::uint64_t seed, int threads);

// Asymptotic-constant grids behind the variance figures: sigma2 of the
// alpha=2 trimmed-mean estimator over a beta grid, and the single-quantile
// constant over a p grid, for each requested H with the a* filter.
struct VarianceGridPoint {
  double hurst = 0.0;
  double param = 0.0;  // beta or p
  double sigma2 = 0.0;
  double tail = 0.0;
};
struct VarianceGrids {
  std::vector<VarianceGridPoint> trimmed;   // param = beta
  std::vector<VarianceGridPoint> quantile;  // param = p
};
VarianceGrids variance_grids(const std::vector<double>& hursts,
                             int num_scales = 5);

}  // namespace hurstq
