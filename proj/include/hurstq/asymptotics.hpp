#pragma once

#include <Eigen/Core>
#include <string>

#include "hurstq/estimators.hpp"

namespace hurstq {

// Probabilists' Hermite polynomial H_j(t), three-term recurrence. Values
// overflow around degree 300; use the normalized variant for large degrees.
double hermite_eval(int degree, double t);

// H_j(t)/sqrt(j!), numerically stable at any degree used here.
double hermite_eval_normalized(int degree, double t);

// Hermite coefficient of h_p(t) = 1{|t| <= q} - p with q = Phi^{-1}((1+p)/2):
// zero for degree 0 and odd degrees, and -2 H_{2j-1}(q) phi(q) at degree 2j.
double hermite_coeff_hp(double p, int degree);

// M x M matrix with entries rho^{a^{m1}, a^{m2}}(lag)^{2j}.
Eigen::MatrixXd r_matrix(long lag, int j, const Filter& base, int num_scales,
                         double hurst);

struct VarianceConfig {
  Filter filter = Filter::named("inc1");
  int num_scales = 5;
  double hurst = 0.5;
  Statistic statistic = QuantileScheme::median();
  double alpha = 0.0;       // 0 encodes the log variant
  long lag_cutoff = 200;    // |i| <= lag_cutoff
  int hermite_cutoff = 150; // j <= hermite_cutoff
};

struct VarianceResult {
  double value = 0.0;
  double tail_lag = 0.0;      // contribution of the outermost lag slice
  double tail_hermite = 0.0;  // contribution of the last Hermite term
  bool clt_valid = true;      // nu > H + 1/4
};

// Asymptotic variance of sqrt(n)(H_hat - H) for the quantile-combination
// estimators, by the truncated double series. Requires a QuantileScheme
// statistic.
VarianceResult sigma2_alpha(const VarianceConfig& cfg);

// Same for the trimmed-mean estimators; the per-term coefficient is a ratio
// of integrals over the trimming window. Requires a TrimSpec statistic.
VarianceResult sigma2_alpha_tm(const VarianceConfig& cfg);

struct RateValue {
  double value = 0.0;
  std::string branch;
};

// Theoretical rate sequences for a filter of order nu at grid size n, with
// the slowly varying factor fixed to 1 (L_2(n) taken as log n on the
// boundary branch):
//   r_n  - Bahadur remainder rate,
//   y_n  - sample-quantile deviation rate,
//   v_n  - empirical-CDF variance rate.
struct RateTable {
  RateValue r_n, y_n, v_n;
};

RateTable rate_table(int filter_order, double hurst, double n);

}  // namespace hurstq
