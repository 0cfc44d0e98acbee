#include "hurstq/process_models.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hurstq {

namespace {

void check_hurst(double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("ProcessModel: hurst must lie in (0,1)");
  }
}

}  // namespace

ProcessModel::ProcessModel(VarianceFamily family, double hurst, double sigma2,
                           std::string label)
    : family_(family), hurst_(hurst), sigma2_(sigma2), label_(std::move(label)) {}

ProcessModel ProcessModel::fbm(double hurst, double sigma2) {
  check_hurst(hurst);
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("ProcessModel: sigma2 must be positive");
  }
  return ProcessModel(VarianceFamily::Fbm, hurst, sigma2, "fbm");
}

ProcessModel ProcessModel::exponential(double hurst) {
  check_hurst(hurst);
  return ProcessModel(VarianceFamily::Exp, hurst, 1.0, "exp");
}

ProcessModel ProcessModel::logarithmic(double hurst) {
  check_hurst(hurst);
  return ProcessModel(VarianceFamily::Log, hurst, 1.0, "log");
}

ProcessModel ProcessModel::custom(double hurst, double sigma2,
                                  std::function<double(double)> v,
                                  std::string label) {
  check_hurst(hurst);
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("ProcessModel: sigma2 must be positive");
  }
  if (!v) {
    throw std::invalid_argument("ProcessModel: custom variance fn is empty");
  }
  ProcessModel model(VarianceFamily::Custom, hurst, sigma2, std::move(label));
  model.custom_v_ = std::move(v);
  if (model.v(0.0) != 0.0) {
    throw std::invalid_argument("ProcessModel: v(0) must be 0");
  }
  // Local self-similarity: |r| must shrink as t -> 0.
  if (std::abs(model.remainder(1e-6)) > std::abs(model.remainder(1e-4)) + 1e-9) {
    throw std::invalid_argument(
        "ProcessModel: v(t)/(sigma^2 |t|^{2H}) does not tend to 1 at 0");
  }
  return model;
}

double ProcessModel::v(double t) const {
  const double u = std::pow(std::abs(t), 2.0 * hurst_);
  switch (family_) {
    case VarianceFamily::Fbm:
      return sigma2_ * u;
    case VarianceFamily::Exp:
      return 1.0 - std::exp(-u);
    case VarianceFamily::Log:
      return std::log1p(u);
    case VarianceFamily::Custom:
      return custom_v_(t);
  }
  return 0.0;
}

double ProcessModel::remainder(double t) const {
  if (family_ == VarianceFamily::Fbm || t == 0.0) return 0.0;
  const double u = std::pow(std::abs(t), 2.0 * hurst_);
  switch (family_) {
    case VarianceFamily::Exp:
      // (1 - exp(-u))/u - 1, computed stably for small u.
      return -std::expm1(-u) / u - 1.0;
    case VarianceFamily::Log:
      return std::log1p(u) / u - 1.0;
    default:
      return v(t) / (sigma2_ * u) - 1.0;
  }
}

double gamma_filtered(std::span<const double> a, std::span<const double> b,
                      long lag, double hurst) {
  const double two_h = 2.0 * hurst;
  double s = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (a[q] == 0.0) continue;
    for (std::size_t qp = 0; qp < b.size(); ++qp) {
      const long d = static_cast<long>(q) - static_cast<long>(qp) + lag;
      if (d == 0 || b[qp] == 0.0) continue;
      s += a[q] * b[qp] * std::pow(std::abs(static_cast<double>(d)), two_h);
    }
  }
  return -0.5 * s;
}

double rho_filtered(std::span<const double> a, std::span<const double> b,
                    long lag, double hurst) {
  const double va = gamma_filtered(a, a, 0, hurst);
  const double vb = gamma_filtered(b, b, 0, hurst);
  return gamma_filtered(a, b, lag, hurst) / std::sqrt(va * vb);
}

std::optional<double> delta_n(std::span<const double> a,
                              std::span<const double> b, long lag,
                              const ProcessModel& model, long n) {
  if (n < 1) {
    throw std::invalid_argument("delta_n: n must be positive");
  }
  const double hurst = model.hurst();
  const double g = gamma_filtered(a, b, lag, hurst);
  if (g == 0.0) return std::nullopt;

  const double two_h = 2.0 * hurst;
  double s = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (a[q] == 0.0) continue;
    for (std::size_t qp = 0; qp < b.size(); ++qp) {
      const long d = static_cast<long>(q) - static_cast<long>(qp) + lag;
      if (d == 0 || b[qp] == 0.0) continue;
      const double ad = std::abs(static_cast<double>(d));
      s += a[q] * b[qp] * std::pow(ad, two_h) *
           model.remainder(ad / static_cast<double>(n));
    }
  }
  return -0.5 * s / g;
}

Eigen::MatrixXd filtered_cov_matrix(const Filter& base, int max_dilation,
                                    const ProcessModel& model, int n) {
  if (max_dilation < 1) {
    throw std::invalid_argument("filtered_cov_matrix: need max_dilation >= 1");
  }
  const int l = base.length() - 1;
  if (n <= max_dilation * l) {
    throw std::invalid_argument(
        "filtered_cov_matrix: n must exceed the longest filter");
  }

  std::vector<DilatedFilter> filters;
  filters.reserve(max_dilation);
  std::vector<int> offset;  // block starts in the stacked vector
  int dim = 0;
  for (int m = 1; m <= max_dilation; ++m) {
    filters.emplace_back(base, m);
    offset.push_back(dim);
    dim += n - m * l;  // series m lives on i = m*l+1 .. n
  }

  Eigen::MatrixXd cov(dim, dim);
  for (int m1 = 1; m1 <= max_dilation; ++m1) {
    const auto& f1 = filters[m1 - 1].coeffs();
    const int l1 = static_cast<int>(f1.size()) - 1;
    for (int m2 = m1; m2 <= max_dilation; ++m2) {
      const auto& f2 = filters[m2 - 1].coeffs();
      const int l2 = static_cast<int>(f2.size()) - 1;
      for (int i1 = l1 + 1; i1 <= n; ++i1) {
        for (int i2 = l2 + 1; i2 <= n; ++i2) {
          // E(X^{a}(i1/n) X^{a'}(i2/n)) = -1/2 sum a_q a'_{q'} v((i1-q-i2+q')/n)
          double s = 0.0;
          for (int q = 0; q <= l1; ++q) {
            if (f1[q] == 0.0) continue;
            for (int qp = 0; qp <= l2; ++qp) {
              if (f2[qp] == 0.0) continue;
              const double t =
                  static_cast<double>(i1 - q - i2 + qp) / static_cast<double>(n);
              s += f1[q] * f2[qp] * model.v(t);
            }
          }
          const int row = offset[m1 - 1] + (i1 - l1 - 1);
          const int col = offset[m2 - 1] + (i2 - l2 - 1);
          cov(row, col) = -0.5 * s;
          cov(col, row) = cov(row, col);
        }
      }
    }
  }
  return cov;
}

}  // namespace hurstq
