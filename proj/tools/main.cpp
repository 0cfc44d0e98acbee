// hurstq: path synthesis, Hurst estimation, Monte Carlo studies and
// asymptotic-variance tables for locally self-similar Gaussian processes.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hurstq/asymptotics.hpp"
#include "hurstq/csv.hpp"
#include "hurstq/mc.hpp"
#include "hurstq/synthesis.hpp"

using namespace hurstq;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("empty numeric list");
  return out;
}

// --scheme accepts a preset name ("median", "q90", "quartiles") or an
// explicit "p:c,p:c" list.
void apply_scheme(EstimatorSpec& spec, const std::string& text) {
  if (text == "median" || text == "q90" || text == "quartiles") {
    const EstimatorSpec preset = EstimatorSpec::preset(text);
    spec.kind = preset.kind;
    spec.p = preset.p;
    spec.c = preset.c;
    spec.transform = preset.transform;
    spec.alpha = preset.alpha;
    return;
  }
  spec.kind = "quantile";
  spec.p.clear();
  spec.c.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--scheme expects p:c pairs or a preset name");
    }
    spec.p.push_back(std::stod(item.substr(0, colon)));
    spec.c.push_back(std::stod(item.substr(colon + 1)));
  }
}

void apply_trim(EstimatorSpec& spec, const std::string& text) {
  const auto values = parse_list(text);
  spec.kind = "trim";
  spec.beta1 = values[0];
  spec.beta2 = values.size() > 1 ? values[1] : values[0];
}

struct EstimatorFlags {
  std::string estimator;  // preset name, overrides the rest
  std::string filter = "astar";
  int num_scales = 5;
  std::string scheme;
  std::string trim;
  std::string transform;
  double alpha = 2.0;
  bool alpha_set = false;
  bool transform_set = false;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& flags) {
  cmd->add_option("--estimator", flags.estimator,
                  "preset: median|q90|quartiles|trim10|qv|whittle");
  cmd->add_option("--filter", flags.filter, "inc1|inc2|db4|astar")
      ->capture_default_str();
  cmd->add_option("--M,--num-scales", flags.num_scales,
                  "number of dilations in the regression")
      ->capture_default_str();
  cmd->add_option("--scheme", flags.scheme,
                  "quantile scheme: preset name or p:c,p:c list");
  cmd->add_option("--trim", flags.trim, "trimming fractions b1[,b2]");
  cmd->add_option("--transform", flags.transform, "log|power")
      ->check(CLI::IsMember({"log", "power"}));
  cmd->add_option("--alpha", flags.alpha, "exponent of the power transform");
}

EstimatorSpec estimator_from_flags(const CLI::App* cmd,
                                   const EstimatorFlags& flags) {
  EstimatorSpec spec;
  if (!flags.estimator.empty()) {
    spec = EstimatorSpec::preset(flags.estimator);
  } else {
    spec = EstimatorSpec::preset("median");
    spec.label = "custom";
  }
  if (cmd->count("--scheme")) apply_scheme(spec, flags.scheme);
  if (cmd->count("--trim")) apply_trim(spec, flags.trim);
  if (cmd->count("--transform")) spec.transform = flags.transform;
  if (cmd->count("--alpha")) {
    spec.alpha = flags.alpha;
    if (!cmd->count("--transform")) spec.transform = "power";
  }
  spec.filter = flags.filter;
  spec.num_scales = flags.num_scales;
  return spec;
}

ModelSpec model_from_flags(const std::string& type, double hurst, double sigma2) {
  ModelSpec spec;
  spec.type = type;
  spec.hurst = hurst;
  spec.sigma2 = sigma2;
  return spec;
}

std::ofstream open_out(const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open '" + filename + "' for writing");
  return out;
}

// Minimal SVG line chart; one polyline per labeled series.
void write_svg_curves(
    const std::string& filename, const std::string& x_label,
    const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>&
        series) {
  const double width = 640, height = 420, margin = 50;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& [label, pts] : series) {
    for (const auto& [x, y] : pts) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (y_max <= y_min) y_max = y_min + 1.0;
  auto sx = [&](double x) {
    return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
  };
  auto sy = [&](double y) {
    return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out = open_out(filename);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect x='" << margin << "' y='" << margin << "' width='"
      << width - 2 * margin << "' height='" << height - 2 * margin
      << "' fill='none' stroke='black'/>\n";
  int idx = 0;
  for (const auto& [label, pts] : series) {
    out << "<polyline fill='none' stroke='" << colors[idx % 4]
        << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) out << sx(x) << "," << sy(y) << " ";
    out << "'/>\n";
    out << "<text x='" << width - margin - 120 << "' y='"
        << margin + 18 * (idx + 1) << "' fill='" << colors[idx % 4] << "'>"
        << label << "</text>\n";
    ++idx;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", y_min);
  out << "<text x='6' y='" << height - margin << "'>" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", y_max);
  out << "<text x='6' y='" << margin + 6 << "'>" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", x_min);
  out << "<text x='" << margin << "' y='" << height - margin + 20 << "'>" << buf
      << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.3g", x_max);
  out << "<text x='" << width - margin - 20 << "' y='" << height - margin + 20
      << "'>" << buf << "</text>\n";
  out << "<text x='" << width / 2 - 20 << "' y='" << height - 8 << "'>"
      << x_label << "</text>\n";
  out << "</svg>\n";
}

int cmd_synth(const std::string& model_type, double hurst, double sigma2, int n,
              std::uint64_t seed, bool contam, const ContaminationSpec& cspec,
              const std::string& out_file) {
  const ProcessModel model = make_model(model_from_flags(model_type, hurst, sigma2));
  SamplePath path = synth_general(model, n, seed);
  if (contam) {
    RngStream rng(seed, 1);
    contaminate_inplace(path, cspec, rng);
  }
  if (out_file.empty() || out_file == "-") {
    write_path_csv(std::cout, path);
  } else {
    write_path_file(out_file, path);
    std::printf("wrote %d values to %s\n", path.n(), out_file.c_str());
  }
  return 0;
}

int cmd_estimate(const std::string& path_file, const EstimatorSpec& spec,
                 const std::string& out_file) {
  const SamplePath path = read_path_file(path_file);
  const double h = estimate_once(path.values, spec);

  std::printf("file        %s\n", path_file.c_str());
  std::printf("estimator   %s\n", spec.label.c_str());
  std::printf("h_hat       %.6f\n", h);
  if (spec.kind != "whittle") {
    std::printf("filter      %s, M = %d\n", spec.filter.c_str(), spec.num_scales);
  }
  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::app);
    if (!out) throw std::runtime_error("cannot open '" + out_file + "'");
    out << path_file << "," << spec.label << "," << spec.filter << ","
        << spec.num_scales << "," << spec.transform << ","
        << format_double(spec.alpha) << "," << format_double(h) << "\n";
  }
  return 0;
}

int cmd_mc(const ExperimentConfig& cfg, const std::string& out_file) {
  const McReport report = run_mc(cfg);
  write_mc_summary_csv(std::cout, report);
  if (!out_file.empty()) {
    auto out = open_out(out_file);
    write_mc_summary_csv(out, report);
    auto raw = open_out(out_file + ".raw.csv");
    write_mc_raw_csv(raw, report);
    std::printf("# wrote %s and %s.raw.csv\n", out_file.c_str(), out_file.c_str());
  }
  return 0;
}

int cmd_variance(const std::vector<double>& hursts, const EstimatorSpec& est,
                 long lag_cutoff, int hermite_cutoff,
                 const std::string& out_file) {
  std::ostringstream csv;
  csv << "hurst,filter,M,statistic,alpha,sigma2,tail_lag,tail_hermite,clt_valid\n";
  for (double hurst : hursts) {
    VarianceConfig cfg;
    cfg.filter = est.filter == "astar"
                     ? Filter::named(hurst < kAstarThreshold ? "inc1" : "db4")
                     : Filter::named(est.filter);
    cfg.num_scales = est.num_scales;
    cfg.hurst = hurst;
    cfg.lag_cutoff = lag_cutoff;
    cfg.hermite_cutoff = hermite_cutoff;
    cfg.alpha = est.transform == "log" ? 0.0 : est.alpha;

    VarianceResult res;
    std::string stat_label;
    if (est.kind == "trim" || est.kind == "qv") {
      cfg.statistic = TrimSpec(est.beta1, est.beta2);
      if (est.kind == "qv") cfg.alpha = 2.0;
      res = sigma2_alpha_tm(cfg);
      stat_label = "trim(" + format_double(est.beta1) + ";" +
                   format_double(est.beta2) + ")";
    } else {
      cfg.statistic = QuantileScheme(est.p, est.c);
      res = sigma2_alpha(cfg);
      stat_label = "quantile(";
      for (std::size_t k = 0; k < est.p.size(); ++k) {
        stat_label += (k ? ";" : "") + format_double(est.p[k]);
      }
      stat_label += ")";
    }
    csv << format_double(hurst) << "," << cfg.filter.name() << ","
        << cfg.num_scales << "," << stat_label << "," << format_double(cfg.alpha)
        << "," << format_double(res.value) << "," << format_double(res.tail_lag)
        << "," << format_double(res.tail_hermite) << ","
        << (res.clt_valid ? 1 : 0) << "\n";
  }
  std::cout << csv.str();
  if (!out_file.empty()) open_out(out_file) << csv.str();
  return 0;
}

int cmd_reproduce(const std::string& target, int reps, std::uint64_t seed,
                  int threads, const std::string& out_dir, bool plot) {
  if (target == "table1") {
    std::ostringstream csv;
    csv << "block,model,estimator,mean,sd,ok,failures\n";
    for (const std::string model : {"fbm", "exp"}) {
      for (bool contaminated : {false, true}) {
        const McReport report =
            run_mc(study_config(model, contaminated, reps, seed, threads));
        for (const auto& s : report.summaries) {
          csv << (contaminated ? "contaminated" : "clean") << "," << model
              << "," << s.label << "," << format_double(s.mean) << ","
              << format_double(s.sd) << "," << s.ok << "," << s.failures
              << "\n";
        }
        std::printf("finished %s/%s block\n", model.c_str(),
                    contaminated ? "contaminated" : "clean");
      }
    }
    const std::string file = out_dir + "/table1.csv";
    open_out(file) << csv.str();
    std::printf("wrote %s\n", file.c_str());
    return 0;
  }

  if (target == "fig2") {
    const VarianceGrids grids = variance_grids({0.3, 0.5, 0.8});
    std::ostringstream csv;
    csv << "curve,hurst,param,sigma2,tail_hermite\n";
    for (const auto& pt : grids.trimmed) {
      csv << "trimmed," << format_double(pt.hurst) << ","
          << format_double(pt.param) << "," << format_double(pt.sigma2) << ","
          << format_double(pt.tail) << "\n";
    }
    for (const auto& pt : grids.quantile) {
      csv << "quantile," << format_double(pt.hurst) << ","
          << format_double(pt.param) << "," << format_double(pt.sigma2) << ","
          << format_double(pt.tail) << "\n";
    }
    const std::string file = out_dir + "/fig2.csv";
    open_out(file) << csv.str();
    std::printf("wrote %s\n", file.c_str());

    if (plot) {
      for (const char* curve : {"trimmed", "quantile"}) {
        std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>
            series;
        for (double hurst : {0.3, 0.5, 0.8}) {
          std::vector<std::pair<double, double>> pts;
          const auto& grid = std::string(curve) == "trimmed" ? grids.trimmed
                                                             : grids.quantile;
          for (const auto& pt : grid) {
            if (pt.hurst == hurst) pts.emplace_back(pt.param, pt.sigma2);
          }
          char label[32];
          std::snprintf(label, sizeof(label), "H = %.1f", hurst);
          series.emplace_back(label, std::move(pts));
        }
        const std::string svg = out_dir + "/fig2_" + curve + ".svg";
        write_svg_curves(svg, std::string(curve) == "trimmed" ? "beta" : "p",
                         series);
        std::printf("wrote %s\n", svg.c_str());
      }
    }
    return 0;
  }
  throw CLI::ValidationError("reproduce target must be table1 or fig2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hurst exponent estimation from quantiles and trimmed means of "
               "discrete variations"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate an exact sample path");
  std::string model_type = "fbm";
  double hurst = 0.5, sigma2 = 1.0;
  int n = 1000;
  std::uint64_t seed = 1;
  bool contam = false;
  ContaminationSpec cspec;
  std::string out_file;
  synth->add_option("--model", model_type, "fbm|exp|log")->capture_default_str();
  synth->add_option("--hurst,-H", hurst, "Hurst exponent in (0,1)")
      ->capture_default_str();
  synth->add_option("--sigma2", sigma2, "scale (fbm only)")->capture_default_str();
  synth->add_option("--n", n, "grid size")->capture_default_str();
  synth->add_option("--seed", seed, "random seed")->capture_default_str();
  synth->add_flag("--contaminate", contam, "add Bernoulli-Gaussian outliers");
  synth->add_option("--bern-p", cspec.bernoulli_p, "outlier probability")
      ->capture_default_str();
  synth->add_option("--snr-db", cspec.snr_db, "signal-to-noise ratio in dB")
      ->capture_default_str();
  synth->add_option("--out,-o", out_file, "output CSV ('-' for stdout)");

  // ---- estimate ----
  auto* estimate = app.add_subcommand("estimate", "estimate H from a path file");
  std::string path_file, est_out;
  EstimatorFlags est_flags;
  estimate->add_option("path", path_file, "path CSV produced by synth")
      ->required();
  add_estimator_flags(estimate, est_flags);
  estimate->add_option("--out,-o", est_out, "append a CSV report row here");

  // ---- mc ----
  auto* mc = app.add_subcommand("mc", "Monte Carlo study over replications");
  std::string config_file, estimators_list, mc_out;
  double mc_hurst = 0.5, mc_sigma2 = 1.0;
  std::string mc_model = "fbm";
  int mc_n = 1000, reps = 500, threads = 0;
  std::uint64_t mc_seed = 1;
  bool mc_contam = false;
  ContaminationSpec mc_cspec;
  EstimatorFlags mc_est_flags;
  mc->add_option("--config", config_file, "JSON config (flags win on conflict)");
  mc->add_option("--model", mc_model, "fbm|exp|log");
  mc->add_option("--hurst,-H", mc_hurst, "Hurst exponent");
  mc->add_option("--sigma2", mc_sigma2, "scale (fbm only)");
  mc->add_option("--n", mc_n, "grid size");
  mc->add_option("--reps,-R", reps, "number of replications");
  mc->add_option("--seed", mc_seed, "master seed");
  mc->add_option("--estimators", estimators_list,
                 "comma list of presets (median,q90,quartiles,trim10,qv,whittle)");
  add_estimator_flags(mc, mc_est_flags);
  mc->add_flag("--contaminate", mc_contam, "contaminate each path");
  mc->add_option("--bern-p", mc_cspec.bernoulli_p, "outlier probability");
  mc->add_option("--snr-db", mc_cspec.snr_db, "signal-to-noise ratio in dB");
  mc->add_option("--threads", threads, "worker threads (0 = all cores)");
  mc->add_option("--out,-o", mc_out, "summary CSV (raw goes to <out>.raw.csv)");

  // ---- variance ----
  auto* variance =
      app.add_subcommand("variance", "asymptotic variance constants sigma2");
  std::string hurst_list = "0.5";
  long lag_cutoff = 200;
  int hermite_cutoff = 150;
  std::string var_out;
  EstimatorFlags var_flags;
  variance->add_option("--hurst,-H", hurst_list, "comma list of H values")
      ->capture_default_str();
  add_estimator_flags(variance, var_flags);
  variance->add_option("--lag-cutoff", lag_cutoff, "|i| truncation")
      ->capture_default_str();
  variance->add_option("--hermite-cutoff", hermite_cutoff, "j truncation")
      ->capture_default_str();
  variance->add_option("--out,-o", var_out, "output CSV");

  // ---- reproduce ----
  auto* reproduce =
      app.add_subcommand("reproduce", "re-run the simulation study outputs");
  std::string target, out_dir = ".";
  int rep_reps = 500, rep_threads = 0;
  std::uint64_t rep_seed = 1;
  bool plot = false;
  reproduce->add_option("target", target, "table1|fig2")->required();
  reproduce->add_option("--reps,-R", rep_reps, "replications per block")
      ->capture_default_str();
  reproduce->add_option("--seed", rep_seed, "master seed")->capture_default_str();
  reproduce->add_option("--threads", rep_threads, "worker threads (0 = all)");
  reproduce->add_option("--out-dir", out_dir, "output directory")
      ->capture_default_str();
  reproduce->add_flag("--plot", plot, "also write SVG plots (fig2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit with 1
  }

  try {
    if (synth->parsed()) {
      return cmd_synth(model_type, hurst, sigma2, n, seed, contam, cspec,
                       out_file);
    }
    if (estimate->parsed()) {
      return cmd_estimate(path_file, estimator_from_flags(estimate, est_flags),
                          est_out);
    }
    if (mc->parsed()) {
      ExperimentConfig cfg;
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::runtime_error("cannot open '" + config_file + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        cfg = config_from_json(buffer.str());
      }
      if (mc->count("--model")) cfg.model.type = mc_model;
      if (mc->count("--hurst")) cfg.model.hurst = mc_hurst;
      if (mc->count("--sigma2")) cfg.model.sigma2 = mc_sigma2;
      if (mc->count("--n")) cfg.n = mc_n;
      if (mc->count("--reps")) cfg.replications = reps;
      if (mc->count("--seed")) cfg.seed = mc_seed;
      if (mc->count("--contaminate")) cfg.contaminate = mc_contam;
      if (mc->count("--bern-p")) cfg.contamination.bernoulli_p = mc_cspec.bernoulli_p;
      if (mc->count("--snr-db")) cfg.contamination.snr_db = mc_cspec.snr_db;
      if (mc->count("--threads")) cfg.threads = threads;
      if (mc->count("--estimators")) {
        cfg.estimators.clear();
        std::stringstream ss(estimators_list);
        std::string name;
        while (std::getline(ss, name, ',')) {
          if (!name.empty()) cfg.estimators.push_back(EstimatorSpec::preset(name));
        }
      } else if (cfg.estimators.empty() ||
                 mc->count("--scheme") || mc->count("--trim") ||
                 mc->count("--estimator")) {
        cfg.estimators = {estimator_from_flags(mc, mc_est_flags)};
      }
      return cmd_mc(cfg, mc_out);
    }
    if (variance->parsed()) {
      return cmd_variance(parse_list(hurst_list),
                          estimator_from_flags(variance, var_flags), lag_cutoff,
                          hermite_cutoff, var_out);
    }
    if (reproduce->parsed()) {
      return cmd_reproduce(target, rep_reps, rep_seed, rep_threads, out_dir,
                           plot);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
