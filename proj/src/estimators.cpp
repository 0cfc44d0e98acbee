#include "hurstq/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "hurstq/synthesis.hpp"

namespace hurstq {

RegressionDesign::RegressionDesign(int num_scales) {
  if (num_scales < 2) {
    throw std::invalid_argument("RegressionDesign: need at least 2 scales");
  }
  A.resize(num_scales);
  double mean_log = 0.0;
  for (int m = 1; m <= num_scales; ++m) mean_log += std::log(m);
  mean_log /= num_scales;
  double norm2 = 0.0;
  for (int m = 1; m <= num_scales; ++m) {
    A[m - 1] = std::log(m) - mean_log;
    norm2 += A[m - 1] * A[m - 1];
  }
  B.resize(num_scales);
  for (int m = 0; m < num_scales; ++m) B[m] = A[m] / norm2;
}

namespace {

double statistic_of(std::span<const double> values, const Statistic& stat) {
  if (std::holds_alternative<QuantileScheme>(stat)) {
    return quantile_combination(values, std::get<QuantileScheme>(stat));
  }
  return trimmed_mean(values, std::get<TrimSpec>(stat));
}

}  // namespace

EstimatorReport estimate_h(std::span<const double> path,
                           const EstimatorConfig& cfg) {
  const int num_scales = cfg.num_scales;
  const int l = cfg.filter.length() - 1;
  if (num_scales < 2) {
    throw std::invalid_argument("estimate_h: need num_scales >= 2");
  }
  if (path.size() <= static_cast<std::size_t>(num_scales) * l + 1) {
    throw std::invalid_argument(
        "estimate_h: path too short for the requested scales");
  }

  EstimatorReport report;
  report.config = cfg;
  report.responses.resize(num_scales);

  std::vector<double> transformed;
  for (int m = 1; m <= num_scales; ++m) {
    const std::vector<double> filtered = apply_filter(dilate(cfg.filter, m), path);
    transformed.clear();
    transformed.reserve(filtered.size());
    if (cfg.transform.kind == Transform::Kind::Power) {
      for (double y : filtered) {
        transformed.push_back(std::pow(std::abs(y), cfg.transform.alpha));
      }
      const double stat = statistic_of(transformed, cfg.statistic);
      if (!(stat > 0.0) || !std::isfinite(stat)) {
        throw std::runtime_error(
            "estimate_h: per-scale statistic is not positive; data degenerate");
      }
      report.responses[m - 1] = std::log(stat);
    } else {
      // log|0| is a null event for continuous paths; if zeros do occur they
      // are dropped and counted.
      for (double y : filtered) {
        if (y == 0.0) {
          ++report.log_zero_exclusions;
        } else {
          transformed.push_back(std::log(std::abs(y)));
        }
      }
      if (transformed.empty()) {
        throw std::runtime_error(
            "estimate_h: every filtered value is zero at scale " +
            std::to_string(m));
      }
      report.responses[m - 1] = statistic_of(transformed, cfg.statistic);
    }
  }

  const RegressionDesign design(num_scales);
  double slope = 0.0;
  for (int m = 0; m < num_scales; ++m) slope += design.B[m] * report.responses[m];

  const double alpha =
      (cfg.transform.kind == Transform::Kind::Power) ? cfg.transform.alpha : 1.0;
  report.h_hat = slope / alpha;

  double mean_resp = std::accumulate(report.responses.begin(),
                                     report.responses.end(), 0.0) / num_scales;
  double mean_log = 0.0;
  for (int m = 1; m <= num_scales; ++m) mean_log += std::log(m);
  mean_log /= num_scales;
  const double intercept = mean_resp - slope * mean_log;
  report.residuals.resize(num_scales);
  for (int m = 1; m <= num_scales; ++m) {
    report.residuals[m - 1] =
        report.responses[m - 1] - (slope * std::log(m) + intercept);
  }
  return report;
}

EstimatorReport estimate_h_quadratic_variations(std::span<const double> path,
                                                const Filter& filter,
                                                int num_scales) {
  EstimatorConfig cfg;
  cfg.filter = filter;
  cfg.num_scales = num_scales;
  cfg.statistic = TrimSpec(0.0, 0.0);
  cfg.transform = Transform::power(2.0);
  return estimate_h(path, cfg);
}

EstimatorReport estimate_h_astar(std::span<const double> path,
                                 EstimatorConfig cfg) {
  cfg.filter = Filter::named("db4");
  const EstimatorReport pilot = estimate_h(path, cfg);
  if (pilot.h_hat < kAstarThreshold) {
    cfg.filter = Filter::named("inc1");
    return estimate_h(path, cfg);
  }
  return pilot;
}

namespace {

// fGn spectral density shape (scale dropped): (1 - cos l) * S_H(l) with
// S_H(l) = sum_{|k| <= K} |l + 2 pi k|^{-2H-1} plus an integral correction
// for the discarded tail.
constexpr int kSpectralCutoff = 200;

double fgn_spectrum_shape(double lambda, double hurst) {
  const double expo = 2.0 * hurst + 1.0;
  double s = std::pow(std::abs(lambda), -expo);
  for (int k = 1; k <= kSpectralCutoff; ++k) {
    const double w = 2.0 * M_PI * k;
    s += std::pow(w + lambda, -expo) + std::pow(w - lambda, -expo);
  }
  const double edge = 2.0 * M_PI * (kSpectralCutoff + 0.5);
  s += (std::pow(edge + lambda, -2.0 * hurst) +
        std::pow(edge - lambda, -2.0 * hurst)) /
       (4.0 * M_PI * hurst);
  return (1.0 - std::cos(lambda)) * s;
}

double whittle_contrast(double hurst, const std::vector<double>& lambdas,
                        const std::vector<double>& pgram) {
  double ratio = 0.0, log_shape = 0.0;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double g = fgn_spectrum_shape(lambdas[j], hurst);
    ratio += pgram[j] / g;
    log_shape += std::log(g);
  }
  const double count = static_cast<double>(lambdas.size());
  return std::log(ratio / count) + log_shape / count;
}

}  // namespace

double estimate_h_whittle(std::span<const double> path) {
  if (path.size() < 64) {
    throw std::invalid_argument("estimate_h_whittle: need at least 64 values");
  }
  std::vector<double> incr(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    incr[i] = path[i + 1] - path[i];
  }
  const std::vector<double> pgram = periodogram(incr);
  std::vector<double> lambdas(pgram.size());
  for (std::size_t j = 0; j < pgram.size(); ++j) {
    lambdas[j] = 2.0 * M_PI * static_cast<double>(j + 1) /
                 static_cast<double>(incr.size());
  }

  constexpr double lo = 0.01, hi = 0.99;
  const auto [h, value] = boost::math::tools::brent_find_minima(
      [&](double hurst) { return whittle_contrast(hurst, lambdas, pgram); }, lo,
      hi, 26);
  if (!std::isfinite(h) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "estimate_h_whittle: minimization failed on [" << lo << ", " << hi
        << "]; contrast at ends: " << whittle_contrast(lo, lambdas, pgram)
        << ", " << whittle_contrast(hi, lambdas, pgram);
    throw std::runtime_error(msg.str());
  }
  return h;
}

}  // namespace hurstq
