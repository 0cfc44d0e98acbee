#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "hurstq/filters.hpp"

namespace hurstq {

enum class VarianceFamily { Fbm, Exp, Log, Custom };

// Centered Gaussian process with stationary increments, locally
// self-similar at zero: v(t) = sigma^2 |t|^{2H} (1 + r(t)) with r(t) -> 0.
// For fBm the remainder r is identically zero. For the exp/log families
// the small-t expansion fixes the scale, so sigma^2 = 1 there.
class ProcessModel {
 public:
  static ProcessModel fbm(double hurst, double sigma2 = 1.0);
  static ProcessModel exponential(double hurst);  // v(t) = 1 - exp(-|t|^{2H})
  static ProcessModel logarithmic(double hurst);  // v(t) = log(1 + |t|^{2H})
  static ProcessModel custom(double hurst, double sigma2,
                             std::function<double(double)> v,
                             std::string label);

  double v(double t) const;
  double remainder(double t) const;  // r(t) = v(t)/(sigma^2 |t|^{2H}) - 1

  double hurst() const { return hurst_; }
  double sigma2() const { return sigma2_; }
  VarianceFamily family() const { return family_; }
  const std::string& label() const { return label_; }

 private:
  ProcessModel(VarianceFamily family, double hurst, double sigma2,
               std::string label);

  VarianceFamily family_;
  double hurst_;
  double sigma2_;
  std::string label_;
  std::function<double(double)> custom_v_;
};

// gamma^{a,a'}(j) = -1/2 sum_{q,q'} a_q a'_{q'} |q - q' + j|^{2H}, the
// stationary-limit covariance of the filtered series (|0|^{2H} taken as 0).
double gamma_filtered(std::span<const double> a, std::span<const double> b,
                      long lag, double hurst);

// rho^{a,a'}(j) = gamma^{a,a'}(j) / sqrt(gamma^a(0) gamma^{a'}(0)).
double rho_filtered(std::span<const double> a, std::span<const double> b,
                    long lag, double hurst);

// Relative covariance correction at grid size n,
//   delta_n^{a,a'}(j) = -1/2 sum a_q a'_{q'} |q-q'+j|^{2H} r((q-q'+j)/n)
//                        / gamma^{a,a'}(j),
// so that E(X^a(i/n) X^{a'}((i+j)/n)) = sigma^2 n^{-2H} gamma(j)(1 + delta_n(j)).
// Undefined (nullopt) when gamma(j) = 0.
std::optional<double> delta_n(std::span<const double> a,
                              std::span<const double> b, long lag,
                              const ProcessModel& model, long n);

// Exact covariance matrix of the stacked filtered series X^{a^m}, m = 1..M,
// each over its fully supported indices, under the model's v(.).
Eigen::MatrixXd filtered_cov_matrix(const Filter& base, int max_dilation,
                                    const ProcessModel& model, int n);

}  // namespace hurstq
