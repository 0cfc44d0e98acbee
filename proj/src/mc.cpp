#include "hurstq/mc.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace hurstq {

using nlohmann::json;

ProcessModel make_model(const ModelSpec& spec) {
  if (spec.type == "fbm") return ProcessModel::fbm(spec.hurst, spec.sigma2);
  if (spec.type == "exp") return ProcessModel::exponential(spec.hurst);
  if (spec.type == "log") return ProcessModel::logarithmic(spec.hurst);
  throw std::invalid_argument("make_model: unknown model type '" + spec.type +
                              "'");
}

EstimatorSpec EstimatorSpec::preset(std::string_view name) {
  EstimatorSpec spec;
  spec.label = std::string(name);
  if (name == "median") {
    spec.kind = "quantile";
    spec.p = {0.5};
    spec.c = {1.0};
    spec.transform = "log";
  } else if (name == "q90") {
    spec.kind = "quantile";
    spec.p = {0.9};
    spec.c = {1.0};
    spec.transform = "log";
  } else if (name == "quartiles") {
    spec.kind = "quantile";
    spec.p = {0.25, 0.75};
    spec.c = {0.5, 0.5};
    spec.transform = "power";
    spec.alpha = 2.0;
  } else if (name == "trim10") {
    spec.kind = "trim";
    spec.beta1 = 0.1;
    spec.beta2 = 0.1;
    spec.transform = "power";
    spec.alpha = 2.0;
  } else if (name == "qv") {
    spec.kind = "qv";
  } else if (name == "whittle") {
    spec.kind = "whittle";
  } else {
    throw std::invalid_argument("EstimatorSpec::preset: unknown preset '" +
                                std::string(name) + "'");
  }
  return spec;
}

namespace {

Statistic statistic_from_spec(const EstimatorSpec& spec) {
  if (spec.kind == "quantile") return QuantileScheme(spec.p, spec.c);
  if (spec.kind == "trim" || spec.kind == "qv") {
    return TrimSpec(spec.beta1, spec.beta2);
  }
  throw std::invalid_argument("estimator kind '" + spec.kind +
                              "' has no statistic");
}

Transform transform_from_spec(const EstimatorSpec& spec) {
  if (spec.transform == "log") return Transform::log_abs();
  if (spec.transform == "power") return Transform::power(spec.alpha);
  throw std::invalid_argument("unknown transform '" + spec.transform + "'");
}

Filter filter_from_spec(const EstimatorSpec& spec) {
  if (spec.filter == "custom") return Filter(spec.filter_coeffs, "custom");
  if (spec.filter == "astar") {
    throw std::logic_error("filter_from_spec: astar resolved elsewhere");
  }
  return Filter::named(spec.filter);
}

}  // namespace

double estimate_once(std::span<const double> path, const EstimatorSpec& spec) {
  if (spec.kind == "whittle") return estimate_h_whittle(path);

  EstimatorConfig cfg;
  cfg.num_scales = spec.num_scales;
  if (spec.kind == "qv") {
    cfg.statistic = TrimSpec(0.0, 0.0);
    cfg.transform = Transform::power(2.0);
  } else {
    cfg.statistic = statistic_from_spec(spec);
    cfg.transform = transform_from_spec(spec);
  }
  if (spec.filter == "astar") {
    return estimate_h_astar(path, cfg).h_hat;
  }
  cfg.filter = filter_from_spec(spec);
  return estimate_h(path, cfg).h_hat;
}

std::vector<McEstimatorSummary> summarize_estimates(
    const std::vector<std::vector<std::optional<double>>>& raw,
    const std::vector<std::string>& labels, double max_failure_rate) {
  const int num_estimators = static_cast<int>(labels.size());
  const int reps = static_cast<int>(raw.size());
  std::vector<McEstimatorSummary> out(num_estimators);
  for (int e = 0; e < num_estimators; ++e) {
    auto& summary = out[e];
    summary.label = labels[e];
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
      if (raw[r][e].has_value()) {
        sum += *raw[r][e];
        ++summary.ok;
      } else {
        ++summary.failures;
      }
    }
    if (summary.failures > max_failure_rate * reps) {
      throw std::runtime_error("Monte Carlo: estimator '" + labels[e] +
                               "' failed on " + std::to_string(summary.failures) +
                               " of " + std::to_string(reps) + " replications");
    }
    if (summary.ok > 0) summary.mean = sum / summary.ok;
    if (summary.ok > 1) {
      double ss = 0.0;
      for (int r = 0; r < reps; ++r) {
        if (raw[r][e].has_value()) {
          const double d = *raw[r][e] - summary.mean;
          ss += d * d;
        }
      }
      summary.sd = std::sqrt(ss / (summary.ok - 1));
    } else {
      summary.sd = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

McReport run_mc(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) {
    throw std::invalid_argument("run_mc: need at least one replication");
  }
  if (cfg.estimators.empty()) {
    throw std::invalid_argument("run_mc: estimator list is empty");
  }
  const ProcessModel model = make_model(cfg.model);
  const int reps = cfg.replications;
  const int num_estimators = static_cast<int>(cfg.estimators.size());

  McReport report;
  report.config = cfg;
  report.raw.assign(reps,
                    std::vector<std::optional<double>>(num_estimators));
  std::vector<std::vector<std::string>> errors(
      reps, std::vector<std::string>(num_estimators));

  int threads = cfg.threads;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  threads = std::min(threads, reps);

  std::atomic<int> next{0};
  std::mutex fatal_mutex;
  std::string fatal_error;
  auto worker = [&]() {
    try {
      PathSynthesizer synth(model, cfg.n);
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= reps) break;
        RngStream path_stream(cfg.seed, 2ull * static_cast<std::uint64_t>(r));
        SamplePath path = synth.sample(path_stream, cfg.seed);
        if (cfg.contaminate) {
          RngStream noise_stream(cfg.seed,
                                 2ull * static_cast<std::uint64_t>(r) + 1ull);
          contaminate_inplace(path, cfg.contamination, noise_stream);
        }
        for (int e = 0; e < num_estimators; ++e) {
          try {
            report.raw[r][e] = estimate_once(path.values, cfg.estimators[e]);
          } catch (const std::exception& err) {
            report.raw[r][e] = std::nullopt;
            errors[r][e] = err.what();
          }
        }
      }
    } catch (const std::exception& err) {
      // configuration-level failure (synthesis setup, contamination spec)
      std::lock_guard<std::mutex> lock(fatal_mutex);
      if (fatal_error.empty()) fatal_error = err.what();
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!fatal_error.empty()) {
    throw std::runtime_error("run_mc: " + fatal_error);
  }

  for (int r = 0; r < reps; ++r) {
    for (int e = 0; e < num_estimators; ++e) {
      if (!errors[r][e].empty()) {
        report.failure_log.push_back(
            "replication " + std::to_string(r) + " estimator " +
            cfg.estimators[e].label + " (seed " + std::to_string(cfg.seed) +
            ", streams " + std::to_string(2 * r) + "/" +
            std::to_string(2 * r + 1) + "): " + errors[r][e]);
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(num_estimators);
  for (const auto& e : cfg.estimators) labels.push_back(e.label);
  report.summaries = summarize_estimates(report.raw, labels);
  return report;
}

namespace {

void to_json(json& j, const EstimatorSpec& spec) {
  j = json{{"label", spec.label},       {"kind", spec.kind},
           {"filter", spec.filter},     {"num_scales", spec.num_scales},
           {"p", spec.p},               {"c", spec.c},
           {"beta1", spec.beta1},       {"beta2", spec.beta2},
           {"transform", spec.transform}, {"alpha", spec.alpha}};
  if (spec.filter == "custom") j["filter_coeffs"] = spec.filter_coeffs;
}

EstimatorSpec estimator_from_json(const json& j) {
  if (j.is_string()) return EstimatorSpec::preset(j.get<std::string>());
  EstimatorSpec spec;
  j.at("label").get_to(spec.label);
  spec.kind = j.value("kind", spec.kind);
  spec.filter = j.value("filter", spec.filter);
  if (j.contains("filter_coeffs")) {
    j.at("filter_coeffs").get_to(spec.filter_coeffs);
  }
  spec.num_scales = j.value("num_scales", spec.num_scales);
  if (j.contains("p")) j.at("p").get_to(spec.p);
  if (j.contains("c")) j.at("c").get_to(spec.c);
  spec.beta1 = j.value("beta1", spec.beta1);
  spec.beta2 = j.value("beta2", spec.beta2);
  spec.transform = j.value("transform", spec.transform);
  spec.alpha = j.value("alpha", spec.alpha);
  return spec;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["model"] = {{"type", cfg.model.type},
                {"hurst", cfg.model.hurst},
                {"sigma2", cfg.model.sigma2}};
  j["n"] = cfg.n;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  j["contaminate"] = cfg.contaminate;
  j["contamination"] = {{"bernoulli_p", cfg.contamination.bernoulli_p},
                        {"snr_db", cfg.contamination.snr_db}};
  j["threads"] = cfg.threads;
  json est = json::array();
  for (const auto& e : cfg.estimators) {
    json je;
    to_json(je, e);
    est.push_back(je);
  }
  j["estimators"] = est;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("model")) {
    const auto& jm = j.at("model");
    cfg.model.type = jm.value("type", cfg.model.type);
    cfg.model.hurst = jm.value("hurst", cfg.model.hurst);
    cfg.model.sigma2 = jm.value("sigma2", cfg.model.sigma2);
  }
  cfg.n = j.value("n", cfg.n);
  cfg.replications = j.value("replications", cfg.replications);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.contaminate = j.value("contaminate", cfg.contaminate);
  if (j.contains("contamination")) {
    const auto& jc = j.at("contamination");
    cfg.contamination.bernoulli_p =
        jc.value("bernoulli_p", cfg.contamination.bernoulli_p);
    cfg.contamination.snr_db = jc.value("snr_db", cfg.contamination.snr_db);
  }
  cfg.threads = j.value("threads", cfg.threads);
  if (j.contains("estimators")) {
    cfg.estimators.clear();
    for (const auto& je : j.at("estimators")) {
      cfg.estimators.push_back(estimator_from_json(je));
    }
  }
  return cfg;
}

std::vector<EstimatorSpec> study_estimators() {
  return {EstimatorSpec::preset("median"),    EstimatorSpec::preset("q90"),
          EstimatorSpec::preset("quartiles"), EstimatorSpec::preset("trim10"),
          EstimatorSpec::preset("qv"),        EstimatorSpec::preset("whittle")};
}

ExperimentConfig study_config(const std::string& model_type, bool contaminated,
                              int replications, std::uint64_t seed,
                              int threads) {
  ExperimentConfig cfg;
  cfg.model.type = model_type;
  cfg.model.hurst = 0.8;
  cfg.n = 1000;
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.contaminate = contaminated;
  cfg.estimators = study_estimators();
  // H is part of the study design, so a* resolves to a fixed filter here;
  // the per-replication pilot is for data with unknown H.
  const std::string astar =
      cfg.model.hurst < kAstarThreshold ? "inc1" : "db4";
  for (auto& est : cfg.estimators) {
    if (est.filter == "astar") est.filter = astar;
  }
  return cfg;
}

VarianceGrids variance_grids(const std::vector<double>& hursts,
                             int num_scales) {
  VarianceGrids grids;
  for (double hurst : hursts) {
    // H is known here, so the a* rule is applied directly.
    const Filter filter =
        Filter::named(hurst < kAstarThreshold ? "inc1" : "db4");
    VarianceConfig cfg;
    cfg.filter = filter;
    cfg.num_scales = num_scales;
    cfg.hurst = hurst;

    for (int i = 0; i <= 18; ++i) {
      const double beta = 0.025 * i;  // 0 .. 0.45
      cfg.statistic = TrimSpec(beta, beta);
      cfg.alpha = 2.0;
      const VarianceResult res = sigma2_alpha_tm(cfg);
      grids.trimmed.push_back({hurst, beta, res.value, res.tail_hermite});
    }
    for (int i = 1; i <= 49; ++i) {
      const double p = 0.02 * i;  // 0.02 .. 0.98
      cfg.statistic = QuantileScheme::single(p);
      cfg.alpha = 0.0;  // single quantile: sigma2 is alpha-free
      const VarianceResult res = sigma2_alpha(cfg);
      grids.quantile.push_back({hurst, p, res.value, res.tail_hermite});
    }
  }
  return grids;
}

}  // namespace hurstq
