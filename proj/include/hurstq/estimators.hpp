#pragma once

#include <span>
#include <variant>
#include <vector>

#include "hurstq/filters.hpp"
#include "hurstq/quantile_stats.hpp"

namespace hurstq {

// Per-scale statistic: either a convex quantile combination or a trimmed
// mean of the transformed filtered values.
using Statistic = std::variant<QuantileScheme, TrimSpec>;

// Centered regression design over dilations m = 1..M:
// A_m = log m - mean(log m), B = A/||A||^2, so B.(log m) = 1 and sum B = 0.
struct RegressionDesign {
  explicit RegressionDesign(int num_scales);
  std::vector<double> A;
  std::vector<double> B;
};

struct EstimatorConfig {
  Filter filter = Filter::named("inc1");
  int num_scales = 5;  // M
  Statistic statistic = QuantileScheme::median();
  Transform transform = Transform::log_abs();
};

struct EstimatorReport {
  double h_hat = 0.0;
  std::vector<double> responses;  // per-scale regression responses
  std::vector<double> residuals;  // response minus fitted value
  long log_zero_exclusions = 0;   // zero filtered values dropped under log
  EstimatorConfig config;
};

// Regression slope of the per-scale statistics on log m, divided by alpha
// for the power transform. Responses are log(stat(|X^{a^m}|^alpha)) under
// power and stat(log|X^{a^m}|) under log.
EstimatorReport estimate_h(std::span<const double> path,
                           const EstimatorConfig& cfg);

// The classical variations estimator: power(2) with no trimming.
EstimatorReport estimate_h_quadratic_variations(std::span<const double> path,
                                                const Filter& filter,
                                                int num_scales);

// Pilot threshold: below it the short filter wins, above it db4.
inline constexpr double kAstarThreshold = 0.75;

// Runs the config once with db4 as a pilot, then re-estimates with inc1
// (pilot < 0.75) or db4.
EstimatorReport estimate_h_astar(std::span<const double> path,
                                 EstimatorConfig cfg);

// Whittle estimator on the increments of the path: minimizes the profiled
// fGn Whittle contrast over H in (0.01, 0.99). Needs >= 64 observations.
double estimate_h_whittle(std::span<const double> path);

}  // namespace hurstq
