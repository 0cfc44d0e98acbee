#include "hurstq/quantile_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "hurstq/normal.hpp"

namespace hurstq {

namespace {

// ceil(n*p) with a small slack so that p = i/n lands on rank i even after
// the rounding in the product.
long quantile_rank(std::size_t n, double p) {
  const double np = static_cast<double>(n) * p;
  long k = static_cast<long>(std::ceil(np - 1e-9));
  if (k < 1) k = 1;
  if (k > static_cast<long>(n)) k = static_cast<long>(n);
  return k;
}

long trim_count(std::size_t n, double beta) {
  return static_cast<long>(std::floor(static_cast<double>(n) * beta + 1e-9));
}

}  // namespace

QuantileScheme::QuantileScheme(std::vector<double> p_in, std::vector<double> c_in)
    : p(std::move(p_in)), c(std::move(c_in)) {
  if (p.empty() || p.size() != c.size()) {
    throw std::invalid_argument("QuantileScheme: p and c must be non-empty and match");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] > 0.0 && p[k] < 1.0)) {
      throw std::invalid_argument("QuantileScheme: each p_k must lie in (0,1)");
    }
    if (!(c[k] > 0.0)) {
      throw std::invalid_argument("QuantileScheme: each c_k must be positive");
    }
    total += c[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("QuantileScheme: weights must sum to 1");
  }
}

QuantileScheme QuantileScheme::single(double p) { return QuantileScheme({p}, {1.0}); }

TrimSpec::TrimSpec(double b1, double b2) : beta1(b1), beta2(b2) {
  if (!(beta1 >= 0.0 && beta1 <= beta2 && beta2 < 1.0 && beta1 + beta2 < 1.0)) {
    throw std::invalid_argument("TrimSpec: need 0 <= b1 <= b2 < 1 and b1 + b2 < 1");
  }
}

double sample_quantile(std::span<const double> x, double p) {
  if (x.empty()) {
    throw std::invalid_argument("sample_quantile: empty sample");
  }
  // p = 1 is allowed so that rank i always equals the quantile at i/n.
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_quantile: p must lie in (0,1]");
  }
  std::vector<double> buf(x.begin(), x.end());
  const long k = quantile_rank(buf.size(), p);
  std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
  return buf[k - 1];
}

double quantile_combination(std::span<const double> x, const QuantileScheme& scheme) {
  if (x.empty()) {
    throw std::invalid_argument("quantile_combination: empty sample");
  }
  std::vector<double> buf(x.begin(), x.end());
  double out = 0.0;
  if (scheme.size() >= 3) {
    // Many quantiles: one full sort beats repeated selection.
    std::sort(buf.begin(), buf.end());
    for (int k = 0; k < scheme.size(); ++k) {
      out += scheme.c[k] * buf[quantile_rank(buf.size(), scheme.p[k]) - 1];
    }
  } else {
    for (int k = 0; k < scheme.size(); ++k) {
      const long r = quantile_rank(buf.size(), scheme.p[k]);
      std::nth_element(buf.begin(), buf.begin() + (r - 1), buf.end());
      out += scheme.c[k] * buf[r - 1];
    }
  }
  return out;
}

double trimmed_mean(std::span<const double> x, const TrimSpec& trim) {
  if (x.empty()) {
    throw std::invalid_argument("trimmed_mean: empty sample");
  }
  const long n = static_cast<long>(x.size());
  const long lo = trim_count(x.size(), trim.beta1);  // ranks 1..lo dropped
  const long hi = trim_count(x.size(), trim.beta2);  // top hi ranks dropped
  const long kept = n - lo - hi;
  if (kept < 1) {
    throw std::invalid_argument("trimmed_mean: trimming removes every value");
  }
  if (lo == 0 && hi == 0) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  }
  std::vector<double> buf(x.begin(), x.end());
  std::sort(buf.begin(), buf.end());
  double s = 0.0;
  for (long i = lo; i < n - hi; ++i) s += buf[i];
  return s / static_cast<double>(kept);
}

Transform Transform::power(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("Transform::power: alpha must be positive");
  }
  return Transform{Kind::Power, alpha};
}

double Transform::operator()(double t) const {
  return kind == Kind::Power ? std::pow(t, alpha) : std::log(t);
}

double theoretical_quantile(const Transform& g, double p) {
  return g(abs_normal_quantile(p));
}

double theoretical_trimmed_mean(const Transform& g, const TrimSpec& trim) {
  // Integrate in the q variable (p = 2 Phi(q) - 1, dp = 2 phi(q) dq): the
  // integrand then decays like a Gaussian and the log singularity at q = 0
  // stays integrable. tanh-sinh clusters nodes at the endpoints, so guard
  // against q underflowing to zero there.
  const double q_lo = trim.beta1 > 0.0 ? abs_normal_quantile(trim.beta1) : 0.0;
  const double q_hi =
      trim.beta2 > 0.0 ? abs_normal_quantile(1.0 - trim.beta2) : 45.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double value = integrator.integrate(
      [&](double q) {
        if (q < 1e-280) return 0.0;
        return g(q) * 2.0 * normal_pdf(q);
      },
      q_lo, q_hi, 1e-10);
  return value / ((1.0 - trim.beta2) - trim.beta1);
}

}  // namespace hurstq
