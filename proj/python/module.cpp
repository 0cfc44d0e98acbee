#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "hurstq/asymptotics.hpp"
#include "hurstq/csv.hpp"
#include "hurstq/estimators.hpp"
#include "hurstq/mc.hpp"
#include "hurstq/normal.hpp"
#include "hurstq/synthesis.hpp"

namespace py = pybind11;
using namespace hurstq;

namespace {

Statistic make_statistic(const std::vector<double>& p,
                         const std::vector<double>& c,
                         const std::optional<std::pair<double, double>>& trim) {
  if (trim.has_value()) return TrimSpec(trim->first, trim->second);
  return QuantileScheme(p, c);
}

Transform make_transform(const std::string& name, double alpha) {
  if (name == "log") return Transform::log_abs();
  if (name == "power") return Transform::power(alpha);
  throw std::invalid_argument("transform must be 'log' or 'power'");
}

EstimatorConfig make_config(const Filter& filter, int num_scales,
                            const std::vector<double>& p,
                            const std::vector<double>& c,
                            const std::optional<std::pair<double, double>>& trim,
                            const std::string& transform, double alpha) {
  EstimatorConfig cfg;
  cfg.filter = filter;
  cfg.num_scales = num_scales;
  cfg.statistic = make_statistic(p, c, trim);
  cfg.transform = make_transform(transform, alpha);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_hurstq, m) {
  m.doc() = "Hurst exponent estimation from quantiles and trimmed means of "
            "discretely filtered sample paths";

  py::class_<Filter>(m, "Filter")
      .def(py::init<std::vector<double>, std::string, double>(),
           py::arg("coeffs"), py::arg("name") = "",
           py::arg("order_tol") = kFilterOrderTol)
      .def_static("named", &Filter::named)
      .def_property_readonly("coeffs", &Filter::coeffs)
      .def_property_readonly("order", &Filter::order)
      .def_property_readonly("name", &Filter::name)
      .def("__len__", &Filter::length)
      .def("__repr__", [](const Filter& f) {
        return "<Filter '" + f.name() + "' order " + std::to_string(f.order()) +
               ">";
      });

  py::class_<DilatedFilter>(m, "DilatedFilter")
      .def_property_readonly("coeffs", &DilatedFilter::coeffs)
      .def_property_readonly("order", &DilatedFilter::order)
      .def_property_readonly("dilation", &DilatedFilter::dilation)
      .def("__len__", &DilatedFilter::length);

  m.def("dilate", &dilate, py::arg("filter"), py::arg("m"));
  m.def(
      "apply_filter",
      [](const Filter& f, const std::vector<double>& x) {
        return apply_filter(f, x);
      },
      py::arg("filter"), py::arg("x"));
  m.def(
      "apply_filter",
      [](const DilatedFilter& f, const std::vector<double>& x) {
        return apply_filter(f, x);
      },
      py::arg("filter"), py::arg("x"));

  py::class_<ProcessModel>(m, "ProcessModel")
      .def_property_readonly("hurst", &ProcessModel::hurst)
      .def_property_readonly("sigma2", &ProcessModel::sigma2)
      .def_property_readonly("label", &ProcessModel::label)
      .def("v", &ProcessModel::v)
      .def("remainder", &ProcessModel::remainder);
  m.def("fbm", &ProcessModel::fbm, py::arg("hurst"), py::arg("sigma2") = 1.0);
  m.def("exp_model", &ProcessModel::exponential, py::arg("hurst"));
  m.def("log_model", &ProcessModel::logarithmic, py::arg("hurst"));

  m.def(
      "gamma",
      [](const Filter& a, const Filter& b, long lag, double hurst) {
        return gamma_filtered(a.coeffs(), b.coeffs(), lag, hurst);
      },
      py::arg("a"), py::arg("b"), py::arg("lag"), py::arg("hurst"));
  m.def(
      "rho",
      [](const Filter& a, const Filter& b, long lag, double hurst) {
        return rho_filtered(a.coeffs(), b.coeffs(), lag, hurst);
      },
      py::arg("a"), py::arg("b"), py::arg("lag"), py::arg("hurst"));
  m.def(
      "delta_n",
      [](const Filter& a, const Filter& b, long lag, const ProcessModel& model,
         long n) { return delta_n(a.coeffs(), b.coeffs(), lag, model, n); },
      py::arg("a"), py::arg("b"), py::arg("lag"), py::arg("model"), py::arg("n"));
  m.def("filtered_cov_matrix", &filtered_cov_matrix, py::arg("base"),
        py::arg("max_dilation"), py::arg("model"), py::arg("n"));

  py::class_<SamplePath>(m, "SamplePath")
      .def_property_readonly("values",
                             [](const SamplePath& p) { return p.values; })
      .def_property_readonly("model",
                             [](const SamplePath& p) { return p.model; })
      .def_readonly("seed", &SamplePath::seed)
      .def_readonly("contaminated", &SamplePath::contaminated)
      .def("__len__", &SamplePath::n);

  m.def("synth_fgn_circulant", &synth_fgn_circulant, py::arg("hurst"),
        py::arg("n"), py::arg("seed"));
  m.def("synth_path", &synth_general, py::arg("model"), py::arg("n"),
        py::arg("seed"));
  m.def(
      "contaminate",
      [](const SamplePath& path, double bernoulli_p, double snr_db,
         std::uint64_t seed) {
        return contaminate(path, ContaminationSpec{bernoulli_p, snr_db}, seed);
      },
      py::arg("path"), py::arg("bernoulli_p") = 0.005, py::arg("snr_db") = 20.0,
      py::arg("seed") = 0);

  m.def(
      "sample_quantile",
      [](const std::vector<double>& x, double p) { return sample_quantile(x, p); },
      py::arg("x"), py::arg("p"));
  m.def(
      "quantile_combination",
      [](const std::vector<double>& x, const std::vector<double>& p,
         const std::vector<double>& c) {
        return quantile_combination(x, QuantileScheme(p, c));
      },
      py::arg("x"), py::arg("p"), py::arg("c"));
  m.def(
      "trimmed_mean",
      [](const std::vector<double>& x, double beta1, double beta2) {
        return trimmed_mean(x, TrimSpec(beta1, beta2));
      },
      py::arg("x"), py::arg("beta1") = 0.0, py::arg("beta2") = 0.0);
  m.def("abs_normal_quantile", &abs_normal_quantile, py::arg("p"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def(
      "theoretical_trimmed_mean",
      [](const std::string& transform, double alpha, double beta1, double beta2) {
        return theoretical_trimmed_mean(make_transform(transform, alpha),
                                        TrimSpec(beta1, beta2));
      },
      py::arg("transform"), py::arg("alpha") = 2.0, py::arg("beta1") = 0.0,
      py::arg("beta2") = 0.0);

  py::class_<EstimatorReport>(m, "EstimatorReport")
      .def_readonly("h_hat", &EstimatorReport::h_hat)
      .def_readonly("responses", &EstimatorReport::responses)
      .def_readonly("residuals", &EstimatorReport::residuals)
      .def_readonly("log_zero_exclusions", &EstimatorReport::log_zero_exclusions)
      .def("__repr__", [](const EstimatorReport& r) {
        return "<EstimatorReport h_hat=" + std::to_string(r.h_hat) + ">";
      });

  m.def(
      "estimate_h",
      [](const std::vector<double>& path, const Filter& filter, int num_scales,
         const std::vector<double>& p, const std::vector<double>& c,
         const std::optional<std::pair<double, double>>& trim,
         const std::string& transform, double alpha) {
        return estimate_h(
            path, make_config(filter, num_scales, p, c, trim, transform, alpha));
      },
      py::arg("path"), py::arg("filter") = Filter::named("inc1"),
      py::arg("num_scales") = 5, py::arg("p") = std::vector<double>{0.5},
      py::arg("c") = std::vector<double>{1.0}, py::arg("trim") = py::none(),
      py::arg("transform") = "log", py::arg("alpha") = 2.0);
  m.def(
      "estimate_h_astar",
      [](const std::vector<double>& path, int num_scales,
         const std::vector<double>& p, const std::vector<double>& c,
         const std::optional<std::pair<double, double>>& trim,
         const std::string& transform, double alpha) {
        return estimate_h_astar(
            path, make_config(Filter::named("db4"), num_scales, p, c, trim,
                              transform, alpha));
      },
      py::arg("path"), py::arg("num_scales") = 5,
      py::arg("p") = std::vector<double>{0.5},
      py::arg("c") = std::vector<double>{1.0}, py::arg("trim") = py::none(),
      py::arg("transform") = "log", py::arg("alpha") = 2.0);
  m.def(
      "estimate_h_quadratic_variations",
      [](const std::vector<double>& path, const Filter& filter, int num_scales) {
        return estimate_h_quadratic_variations(path, filter, num_scales);
      },
      py::arg("path"), py::arg("filter") = Filter::named("inc1"),
      py::arg("num_scales") = 5);
  m.def(
      "estimate_h_whittle",
      [](const std::vector<double>& path) { return estimate_h_whittle(path); },
      py::arg("path"));

  m.def("hermite_eval", &hermite_eval, py::arg("degree"), py::arg("t"));
  m.def("hermite_eval_normalized", &hermite_eval_normalized, py::arg("degree"),
        py::arg("t"));
  m.def("hermite_coeff_hp", &hermite_coeff_hp, py::arg("p"), py::arg("degree"));
  m.def("r_matrix", &r_matrix, py::arg("lag"), py::arg("j"), py::arg("base"),
        py::arg("num_scales"), py::arg("hurst"));

  py::class_<VarianceResult>(m, "VarianceResult")
      .def_readonly("value", &VarianceResult::value)
      .def_readonly("tail_lag", &VarianceResult::tail_lag)
      .def_readonly("tail_hermite", &VarianceResult::tail_hermite)
      .def_readonly("clt_valid", &VarianceResult::clt_valid)
      .def("__repr__", [](const VarianceResult& r) {
        return "<VarianceResult " + std::to_string(r.value) + ">";
      });

  m.def(
      "sigma2_alpha",
      [](const Filter& filter, int num_scales, double hurst,
         const std::vector<double>& p, const std::vector<double>& c,
         double alpha, long lag_cutoff, int hermite_cutoff) {
        VarianceConfig cfg;
        cfg.filter = filter;
        cfg.num_scales = num_scales;
        cfg.hurst = hurst;
        cfg.statistic = QuantileScheme(p, c);
        cfg.alpha = alpha;
        cfg.lag_cutoff = lag_cutoff;
        cfg.hermite_cutoff = hermite_cutoff;
        return sigma2_alpha(cfg);
      },
      py::arg("filter"), py::arg("num_scales"), py::arg("hurst"),
      py::arg("p") = std::vector<double>{0.5},
      py::arg("c") = std::vector<double>{1.0}, py::arg("alpha") = 0.0,
      py::arg("lag_cutoff") = 200, py::arg("hermite_cutoff") = 150);
  m.def(
      "sigma2_alpha_tm",
      [](const Filter& filter, int num_scales, double hurst, double beta1,
         double beta2, double alpha, long lag_cutoff, int hermite_cutoff) {
        VarianceConfig cfg;
        cfg.filter = filter;
        cfg.num_scales = num_scales;
        cfg.hurst = hurst;
        cfg.statistic = TrimSpec(beta1, beta2);
        cfg.alpha = alpha;
        cfg.lag_cutoff = lag_cutoff;
        cfg.hermite_cutoff = hermite_cutoff;
        return sigma2_alpha_tm(cfg);
      },
      py::arg("filter"), py::arg("num_scales"), py::arg("hurst"),
      py::arg("beta1") = 0.0, py::arg("beta2") = 0.0, py::arg("alpha") = 2.0,
      py::arg("lag_cutoff") = 200, py::arg("hermite_cutoff") = 150);

  py::class_<RateValue>(m, "RateValue")
      .def_readonly("value", &RateValue::value)
      .def_readonly("branch", &RateValue::branch);
  py::class_<RateTable>(m, "RateTable")
      .def_readonly("r_n", &RateTable::r_n)
      .def_readonly("y_n", &RateTable::y_n)
      .def_readonly("v_n", &RateTable::v_n);
  m.def("rate_table", &rate_table, py::arg("filter_order"), py::arg("hurst"),
        py::arg("n"));

  // Monte Carlo driver fed by the same JSON schema as the CLI config file.
  m.def(
      "run_mc_json",
      [](const std::string& text) {
        const McReport report = run_mc(config_from_json(text));
        py::list out;
        for (const auto& s : report.summaries) {
          py::dict row;
          row["label"] = s.label;
          row["mean"] = s.mean;
          row["sd"] = s.sd;
          row["ok"] = s.ok;
          row["failures"] = s.failures;
          out.append(row);
        }
        return out;
      },
      py::arg("config_json"));
}
