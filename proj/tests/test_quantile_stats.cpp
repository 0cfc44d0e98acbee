#include "doctest.h"

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hurstq/normal.hpp"
#include "hurstq/quantile_stats.hpp"
#include "hurstq/rng.hpp"

using namespace hurstq;

TEST_CASE("sample_quantile: ceil(np)-th order statistic") {
  CHECK(sample_quantile(std::vector<double>{3, 1, 2}, 0.5) == 2);
  CHECK(sample_quantile(std::vector<double>{1, 2, 3, 4}, 0.25) == 1);
  CHECK(sample_quantile(std::vector<double>{5}, 0.9) == 5);
  CHECK_THROWS_AS(sample_quantile(std::vector<double>{}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_quantile(std::vector<double>{1.0}, 1.5),
                  std::invalid_argument);
}

TEST_CASE("sample_quantile agrees with the sort-and-scan oracle") {
  RngStream rng(2024, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 200);
    std::vector<double> x(n);
    for (double& v : x) v = rng.gaussian();
    const double p = 0.01 + 0.98 * rng.uniform();

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    // left-continuous inverse: smallest rank i with i/n >= p
    int rank = 1;
    while (static_cast<double>(rank) / n < p) ++rank;
    CHECK(sample_quantile(x, p) == sorted[rank - 1]);
  }
}

TEST_CASE("sample_quantile is monotone in p and commutes with monotone maps") {
  RngStream rng(7, 0);
  std::vector<double> x(101);
  for (double& v : x) v = rng.gaussian();
  double last = -1e300;
  for (double p = 0.05; p < 1.0; p += 0.05) {
    const double q = sample_quantile(x, p);
    CHECK(q >= last);
    last = q;
    std::vector<double> ex(x.size());
    std::transform(x.begin(), x.end(), ex.begin(),
                   [](double t) { return std::exp(t); });
    CHECK(sample_quantile(ex, p) == std::exp(q));
  }
}

TEST_CASE("quantile_combination") {
  const std::vector<double> x{9, 1, 7, 3, 5, 4, 8, 6, 2, 10};
  CHECK(quantile_combination(x, QuantileScheme::median()) ==
        sample_quantile(x, 0.5));
  const QuantileScheme quartiles({0.25, 0.75}, {0.5, 0.5});
  CHECK(quantile_combination(x, quartiles) ==
        0.5 * sample_quantile(x, 0.25) + 0.5 * sample_quantile(x, 0.75));

  const std::vector<double> constant(17, 5.0);
  const QuantileScheme many({0.1, 0.4, 0.6, 0.9}, {0.25, 0.25, 0.25, 0.25});
  CHECK(quantile_combination(constant, many) == 5.0);

  CHECK_THROWS_AS(QuantileScheme({0.5}, {0.9}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileScheme({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileScheme({0.3, 0.6}, {0.5}), std::invalid_argument);
}

TEST_CASE("trimmed_mean matches the order-statistic display") {
  std::vector<double> x{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  CHECK(trimmed_mean(x, TrimSpec(0.0, 0.0)) == doctest::Approx(5.5));
  CHECK(trimmed_mean(x, TrimSpec(0.1, 0.1)) == doctest::Approx(5.5));  // ranks 2..9
  CHECK(trimmed_mean(x, TrimSpec(0.45, 0.45)) == doctest::Approx(5.5));  // ranks 5..6
  CHECK(trimmed_mean(std::vector<double>{1, 2, 100}, TrimSpec(0.0, 1.0 / 3)) ==
        doctest::Approx(1.5));

  CHECK_THROWS_AS(TrimSpec(0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(TrimSpec(-0.1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(trimmed_mean(std::vector<double>{1.0}, TrimSpec(0.6, 0.6)),
                  std::invalid_argument);
}

TEST_CASE("trimmed mean equals the average of retained sample quantiles") {
  RngStream rng(55, 0);
  for (int n : {10, 37, 100}) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.gaussian();
    for (const auto& trim : {TrimSpec(0.0, 0.0), TrimSpec(0.1, 0.1),
                             TrimSpec(0.05, 0.25)}) {
      const long lo = static_cast<long>(std::floor(n * trim.beta1 + 1e-9));
      const long hi = static_cast<long>(std::floor(n * trim.beta2 + 1e-9));
      double acc = 0.0;
      for (long i = lo + 1; i <= n - hi; ++i) {
        acc += sample_quantile(x, static_cast<double>(i) / n);
      }
      acc /= static_cast<double>(n - lo - hi);
      CHECK(trimmed_mean(x, trim) == doctest::Approx(acc).epsilon(1e-14));
    }
  }
}

TEST_CASE("theoretical quantiles of |Y|") {
  // Independent oracle: bisection on the erfc-based CDF.
  auto bisect = [](double target) {
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  for (double p : {0.1, 0.25, 0.5, 0.9, 0.99}) {
    CHECK(abs_normal_quantile(p) ==
          doctest::Approx(bisect(0.5 * (1.0 + p))).epsilon(1e-12));
  }
  CHECK(abs_normal_quantile(0.5) == doctest::Approx(0.674489750196082).epsilon(1e-10));

  // quantile commutes with increasing transforms of |Y|
  const double q = abs_normal_quantile(0.3);
  CHECK(theoretical_quantile(Transform::power(2.0), 0.3) ==
        doctest::Approx(q * q).epsilon(1e-14));
  CHECK(theoretical_quantile(Transform::log_abs(), 0.3) ==
        doctest::Approx(std::log(q)).epsilon(1e-14));
}

TEST_CASE("theoretical trimmed means against moment identities") {
  // int_0^1 xi(p, Y^2) dp = E(Y^2) = 1
  CHECK(theoretical_trimmed_mean(Transform::power(2.0), TrimSpec(0.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // E|Y| = sqrt(2/pi)
  CHECK(theoretical_trimmed_mean(Transform::power(1.0), TrimSpec(0.0, 0.0)) ==
        doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-9));
  // E log|Y| = -(euler_gamma + log 2)/2
  CHECK(theoretical_trimmed_mean(Transform::log_abs(), TrimSpec(0.0, 0.0)) ==
        doctest::Approx(-0.6351814227307391).epsilon(1e-9));
}

TEST_CASE("normal_quantile round-trips through the CDF") {
  for (double p = 1e-10; p < 1.0; p = p * 3.7 + 0.03) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}
