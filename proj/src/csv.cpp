#include "hurstq/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hurstq {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void write_provenance(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# model=" << cfg.model.type << "\n";
  out << "# hurst=" << format_double(cfg.model.hurst) << "\n";
  out << "# sigma2=" << format_double(cfg.model.sigma2) << "\n";
  out << "# n=" << cfg.n << "\n";
  out << "# replications=" << cfg.replications << "\n";
  out << "# seed=" << cfg.seed << "\n";
  out << "# contaminated=" << (cfg.contaminate ? 1 : 0) << "\n";
  if (cfg.contaminate) {
    out << "# bernoulli_p=" << format_double(cfg.contamination.bernoulli_p)
        << "\n";
    out << "# snr_db=" << format_double(cfg.contamination.snr_db) << "\n";
  }
}

}  // namespace

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "# n=" << path.n() << "\n";
  out << "# model=" << path.model.label() << "\n";
  out << "# hurst=" << format_double(path.model.hurst()) << "\n";
  out << "# sigma2=" << format_double(path.model.sigma2()) << "\n";
  out << "# seed=" << path.seed << "\n";
  out << "# contaminated=" << (path.contaminated ? 1 : 0) << "\n";
  for (double v : path.values) {
    out << format_double(v) << "\n";
  }
}

SamplePath read_path_csv(std::istream& in, const std::string& name) {
  std::map<std::string, std::string> header;
  std::vector<double> values;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        header[key] = line.substr(eq + 1);
      }
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == line.c_str() || (end && *end != '\0')) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": malformed value '" + line + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw std::runtime_error(name + ": no path values found");
  }

  const double hurst = header.count("hurst") ? std::stod(header["hurst"]) : 0.5;
  const double sigma2 =
      header.count("sigma2") ? std::stod(header["sigma2"]) : 1.0;
  const std::string model_type =
      header.count("model") ? header["model"] : "fbm";
  ProcessModel model = [&]() {
    if (model_type == "exp") return ProcessModel::exponential(hurst);
    if (model_type == "log") return ProcessModel::logarithmic(hurst);
    return ProcessModel::fbm(hurst, sigma2);
  }();
  const std::uint64_t seed =
      header.count("seed") ? std::stoull(header["seed"]) : 0;
  const bool contaminated =
      header.count("contaminated") && header["contaminated"] == "1";
  if (header.count("n") &&
      std::stol(header["n"]) != static_cast<long>(values.size())) {
    throw std::runtime_error(name + ": header n=" + header["n"] +
                             " does not match " +
                             std::to_string(values.size()) + " values");
  }
  return SamplePath(std::move(values), std::move(model), seed, contaminated);
}

void write_path_file(const std::string& filename, const SamplePath& path) {
  std::ofstream out(filename);
  if (!out) {
    throw std::runtime_error("cannot open '" + filename + "' for writing");
  }
  write_path_csv(out, path);
}

SamplePath read_path_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) {
    throw std::runtime_error("cannot open '" + filename + "' for reading");
  }
  return read_path_csv(in, filename);
}

void write_mc_summary_csv(std::ostream& out, const McReport& report) {
  write_provenance(out, report.config);
  for (const auto& line : report.failure_log) {
    out << "# failed: " << line << "\n";
  }
  out << "estimator,mean,sd,ok,failures\n";
  for (const auto& s : report.summaries) {
    out << s.label << "," << format_double(s.mean) << ",";
    if (std::isnan(s.sd)) {
      out << "";  // sd undefined with a single replication
    } else {
      out << format_double(s.sd);
    }
    out << "," << s.ok << "," << s.failures << "\n";
  }
}

void write_mc_raw_csv(std::ostream& out, const McReport& report) {
  write_provenance(out, report.config);
  out << "replication";
  for (const auto& e : report.config.estimators) out << "," << e.label;
  out << "\n";
  for (std::size_t r = 0; r < report.raw.size(); ++r) {
    out << r;
    for (const auto& value : report.raw[r]) {
      out << ",";
      if (value.has_value()) out << format_double(*value);
    }
    out << "\n";
  }
}

}  // namespace hurstq
