#include "hurstq/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hurstq/normal.hpp"
#include "hurstq/process_models.hpp"

namespace hurstq {

double hermite_eval(int degree, double t) {
  if (degree < 0) {
    throw std::invalid_argument("hermite_eval: degree must be >= 0");
  }
  double prev = 1.0;  // H_0
  if (degree == 0) return prev;
  double cur = t;  // H_1
  for (int k = 1; k < degree; ++k) {
    const double next = t * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_eval_normalized(int degree, double t) {
  if (degree < 0) {
    throw std::invalid_argument("hermite_eval_normalized: degree must be >= 0");
  }
  double prev = 1.0;
  if (degree == 0) return prev;
  double cur = t;
  for (int k = 1; k < degree; ++k) {
    const double next =
        (t * cur - std::sqrt(static_cast<double>(k)) * prev) /
        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_coeff_hp(double p, int degree) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("hermite_coeff_hp: p must lie in (0,1)");
  }
  if (degree < 0) {
    throw std::invalid_argument("hermite_coeff_hp: degree must be >= 0");
  }
  if (degree == 0 || degree % 2 == 1) return 0.0;
  const double q = abs_normal_quantile(p);
  return -2.0 * hermite_eval(degree - 1, q) * normal_pdf(q);
}

namespace {

// Pairwise correlations rho^{a^{m1}, a^{m2}}(lag) for all scale pairs.
struct DilationCorrelations {
  DilationCorrelations(const Filter& base, int num_scales, double hurst)
      : num_scales_(num_scales) {
    std::vector<std::vector<double>> coeffs;
    coeffs.reserve(num_scales);
    std::vector<double> var0(num_scales);
    for (int m = 1; m <= num_scales; ++m) {
      coeffs.push_back(dilate(base, m).coeffs());
      var0[m - 1] = gamma_filtered(coeffs.back(), coeffs.back(), 0, hurst);
    }
    hurst_ = hurst;
    coeffs_ = std::move(coeffs);
    inv_sd_.resize(num_scales);
    for (int m = 0; m < num_scales; ++m) inv_sd_[m] = 1.0 / std::sqrt(var0[m]);
  }

  double rho(long lag, int m1, int m2) const {
    return gamma_filtered(coeffs_[m1], coeffs_[m2], lag, hurst_) *
           inv_sd_[m1] * inv_sd_[m2];
  }

  int num_scales_;
  double hurst_;
  std::vector<std::vector<double>> coeffs_;
  std::vector<double> inv_sd_;
};

// Lag sums S_j = sum_{|i| <= cutoff} B^T R(i, j) B for j = 1..j_max. The
// i-summand is symmetric in i, so only i >= 0 is evaluated. Also returns
// the (doubled) outermost slice i = +-cutoff for the tail diagnostic.
struct LagSums {
  std::vector<double> total;  // indexed by j-1
  std::vector<double> edge;
};

LagSums weighted_lag_sums(const VarianceConfig& cfg) {
  const int num_scales = cfg.num_scales;
  const DilationCorrelations corr(cfg.filter, num_scales, cfg.hurst);
  const RegressionDesign design(num_scales);

  LagSums sums;
  sums.total.assign(cfg.hermite_cutoff, 0.0);
  sums.edge.assign(cfg.hermite_cutoff, 0.0);

  std::vector<double> rho2(num_scales * num_scales);
  std::vector<double> cur(num_scales * num_scales);
  for (long i = 0; i <= cfg.lag_cutoff; ++i) {
    const double weight = (i == 0) ? 1.0 : 2.0;
    for (int m1 = 0; m1 < num_scales; ++m1) {
      for (int m2 = 0; m2 < num_scales; ++m2) {
        const double r = corr.rho(i, m1, m2);
        rho2[m1 * num_scales + m2] = r * r;
        cur[m1 * num_scales + m2] = 1.0;
      }
    }
    for (int j = 1; j <= cfg.hermite_cutoff; ++j) {
      double quad = 0.0;
      for (int m1 = 0; m1 < num_scales; ++m1) {
        for (int m2 = 0; m2 < num_scales; ++m2) {
          cur[m1 * num_scales + m2] *= rho2[m1 * num_scales + m2];
          quad += design.B[m1] * design.B[m2] * cur[m1 * num_scales + m2];
        }
      }
      sums.total[j - 1] += weight * quad;
      if (i == cfg.lag_cutoff) sums.edge[j - 1] = weight * quad;
    }
  }
  return sums;
}

void check_variance_config(const VarianceConfig& cfg) {
  if (!(cfg.hurst > 0.0 && cfg.hurst < 1.0)) {
    throw std::invalid_argument("sigma2: hurst must lie in (0,1)");
  }
  if (cfg.alpha < 0.0) {
    throw std::invalid_argument("sigma2: alpha must be >= 0");
  }
  if (cfg.lag_cutoff < 1 || cfg.hermite_cutoff < 1) {
    throw std::invalid_argument("sigma2: truncation bounds must be positive");
  }
}

VarianceResult assemble(const VarianceConfig& cfg,
                        const std::vector<double>& coeff) {
  const LagSums sums = weighted_lag_sums(cfg);
  VarianceResult result;
  result.clt_valid = cfg.filter.order() > cfg.hurst + 0.25;
  for (int j = 1; j <= cfg.hermite_cutoff; ++j) {
    const double factor = coeff[j - 1] * coeff[j - 1] / (2.0 * j);
    const double term = factor * sums.total[j - 1];
    result.value += term;
    result.tail_lag += factor * sums.edge[j - 1];
    if (j == cfg.hermite_cutoff) result.tail_hermite = std::abs(term);
  }
  return result;
}

}  // namespace

Eigen::MatrixXd r_matrix(long lag, int j, const Filter& base, int num_scales,
                         double hurst) {
  if (j < 1 || num_scales < 1) {
    throw std::invalid_argument("r_matrix: need j >= 1 and num_scales >= 1");
  }
  const DilationCorrelations corr(base, num_scales, hurst);
  Eigen::MatrixXd out(num_scales, num_scales);
  for (int m1 = 0; m1 < num_scales; ++m1) {
    for (int m2 = 0; m2 < num_scales; ++m2) {
      out(m1, m2) = std::pow(corr.rho(lag, m1, m2), 2 * j);
    }
  }
  return out;
}

VarianceResult sigma2_alpha(const VarianceConfig& cfg) {
  check_variance_config(cfg);
  if (!std::holds_alternative<QuantileScheme>(cfg.statistic)) {
    throw std::invalid_argument("sigma2_alpha: config must hold a QuantileScheme");
  }
  const auto& scheme = std::get<QuantileScheme>(cfg.statistic);

  const int count = scheme.size();
  std::vector<double> q(count), pi(count);
  double denom = 0.0;
  for (int k = 0; k < count; ++k) {
    q[k] = abs_normal_quantile(scheme.p[k]);
    denom += scheme.c[k] * std::pow(q[k], cfg.alpha);
  }
  // alpha = 0 gives pi_k = 1: the log-variant constant sigma2_0.
  for (int k = 0; k < count; ++k) pi[k] = std::pow(q[k], cfg.alpha) / denom;

  // coeff[j-1] = sum_k c_k pi_k H_{2j-1}(q_k)/(q_k sqrt((2j-1)!)); the
  // normalized recurrence keeps every intermediate finite.
  std::vector<double> coeff(cfg.hermite_cutoff, 0.0);
  for (int k = 0; k < count; ++k) {
    const double w = scheme.c[k] * pi[k] / q[k];
    double prev = 1.0, cur = q[k];  // normalized degrees 0 and 1
    for (int d = 1; d < 2 * cfg.hermite_cutoff; ++d) {
      if (d % 2 == 1) coeff[(d - 1) / 2] += w * cur;
      const double next =
          (q[k] * cur - std::sqrt(static_cast<double>(d)) * prev) /
          std::sqrt(static_cast<double>(d + 1));
      prev = cur;
      cur = next;
    }
  }
  return assemble(cfg, coeff);
}

VarianceResult sigma2_alpha_tm(const VarianceConfig& cfg) {
  check_variance_config(cfg);
  if (!std::holds_alternative<TrimSpec>(cfg.statistic)) {
    throw std::invalid_argument("sigma2_alpha_tm: config must hold a TrimSpec");
  }
  const auto& trim = std::get<TrimSpec>(cfg.statistic);

  // All integrals are taken in the q variable: p = 2 Phi(q) - 1, so
  // dp = 2 phi(q) dq and the integrands decay like exp(-q^2/4). The
  // Gauss-Kronrod error estimate stays reliable on the high-degree
  // oscillatory Hermite factors, where level-doubling rules alias.
  using boost::math::quadrature::gauss_kronrod;
  const double q_lo = trim.beta1 > 0.0 ? abs_normal_quantile(trim.beta1) : 0.0;
  const double q_hi =
      trim.beta2 > 0.0 ? abs_normal_quantile(1.0 - trim.beta2) : 45.0;

  boost::math::quadrature::tanh_sinh<double> ts;
  const double denom = ts.integrate(
      [&](double q) { return std::pow(q, cfg.alpha) * 2.0 * normal_pdf(q); },
      q_lo, q_hi, 1e-9);

  std::vector<double> coeff(cfg.hermite_cutoff, 0.0);
  for (int j = 1; j <= cfg.hermite_cutoff; ++j) {
    const double integral = gauss_kronrod<double, 61>::integrate(
        [&](double q) {
          if (q < 1e-280) return 0.0;
          const double weight =
              (cfg.alpha == 1.0) ? 1.0 : std::pow(q, cfg.alpha - 1.0);
          return hermite_eval_normalized(2 * j - 1, q) * weight * 2.0 *
                 normal_pdf(q);
        },
        q_lo, q_hi, 12, 1e-9);
    coeff[j - 1] = integral / denom;
  }
  return assemble(cfg, coeff);
}

RateTable rate_table(int filter_order, double hurst, double n) {
  if (filter_order < 1) {
    throw std::invalid_argument("rate_table: filter order must be >= 1");
  }
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("rate_table: hurst must lie in (0,1)");
  }
  if (!(n >= 2.0)) {
    throw std::invalid_argument("rate_table: n must be >= 2");
  }

  const double decay = 2.0 * (filter_order - hurst);  // correlation exponent
  const double x = 2.0 * decay;                       // times Hermite rank 2
  const double ln = std::log(n);
  RateTable table;

  if (x > 1.0 + 1e-12) {
    table.r_n = {std::pow(n, -0.75) * std::pow(ln, 0.75), "alpha*tau>1"};
  } else if (x > 1.0 - 1e-12) {
    table.r_n = {std::pow(n, -0.75) * std::pow(ln, 1.5), "alpha*tau=1"};
  } else if (x > 2.0 / 3.0) {
    table.r_n = {std::pow(n, -0.5 - 0.5 * decay) * ln, "2/3<alpha*tau<1"};
  } else {
    table.r_n = {std::pow(n, -2.0 * decay) * ln * ln, "alpha*tau<=2/3"};
  }

  if (x > 1.0 + 1e-12) {
    table.y_n = {std::pow(n, -0.5) * std::sqrt(ln), "alpha*tau>1"};
  } else if (x > 1.0 - 1e-12) {
    table.y_n = {std::pow(n, -0.5) * ln, "alpha*tau=1"};
  } else {
    table.y_n = {std::pow(n, -decay) * ln, "alpha*tau<1"};
  }

  if (filter_order > hurst + 0.25) {
    table.v_n = {1.0 / n, "nu>H+1/4"};
  } else if (std::abs(hurst - 0.75) < 1e-12) {
    table.v_n = {ln / n, "nu=1,H=3/4"};
  } else {
    table.v_n = {std::pow(n, -4.0 * (1.0 - hurst)), "nu=1,3/4<H<1"};
  }
  return table;
}

}  // namespace hurstq
