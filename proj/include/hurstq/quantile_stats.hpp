#pragma once

#include <span>
#include <vector>

namespace hurstq {

// Convex combination sum_k c_k * (sample quantile at p_k).
struct QuantileScheme {
  std::vector<double> p;
  std::vector<double> c;

  QuantileScheme(std::vector<double> p, std::vector<double> c);  // validates
  static QuantileScheme single(double p);  // K = 1, c = 1
  static QuantileScheme median() { return single(0.5); }
  int size() const { return static_cast<int>(p.size()); }
};

// Trim fractions: drop the lowest [n b1] and highest [n b2] order
// statistics. b1 = b2 = 0 keeps everything (plain mean).
struct TrimSpec {
  double beta1 = 0.0;
  double beta2 = 0.0;

  TrimSpec() = default;
  TrimSpec(double b1, double b2);  // validates
};

// The ceil(n p)-th order statistic, i.e. the left-continuous inverse of
// the empirical CDF. With this convention the i-th order statistic equals
// the sample quantile at p = i/n exactly.
double sample_quantile(std::span<const double> x, double p);

double quantile_combination(std::span<const double> x, const QuantileScheme&);

// Mean of the order statistics with ranks [n b1]+1 .. n-[n b2].
double trimmed_mean(std::span<const double> x, const TrimSpec&);

// The two transforms used throughout: |.|^alpha (alpha > 0) and log|.|.
struct Transform {
  enum class Kind { Power, Log };
  Kind kind = Kind::Power;
  double alpha = 2.0;

  static Transform power(double alpha);
  static Transform log_abs() { return Transform{Kind::Log, 0.0}; }
  double operator()(double t) const;  // applied to t >= 0
};

// Population quantile of g(|Y|), Y standard normal: g(Phi^{-1}((1+p)/2)).
double theoretical_quantile(const Transform& g, double p);

// (1/(1-b1-b2)) int_{b1}^{1-b2} xi(p, g(|Y|)) dp by adaptive quadrature.
double theoretical_trimmed_mean(const Transform& g, const TrimSpec& trim);

}  // namespace hurstq
