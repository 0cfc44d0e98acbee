#include "doctest.h"

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <vector>

#include "hurstq/process_models.hpp"
#include "hurstq/synthesis.hpp"

using namespace hurstq;

namespace {

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double var_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

double fgn_cov(long j, double hurst) {
  const double two_h = 2.0 * hurst;
  const double aj = std::abs(static_cast<double>(j));
  return 0.5 * (std::pow(aj + 1.0, two_h) - 2.0 * std::pow(aj, two_h) +
                std::pow(std::abs(aj - 1.0), two_h));
}

}  // namespace

TEST_CASE("circulant synthesis is deterministic in the seed") {
  const auto a = synth_fgn_circulant(0.7, 512, 42);
  const auto b = synth_fgn_circulant(0.7, 512, 42);
  const auto c = synth_fgn_circulant(0.7, 512, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.size() == 512);
}

TEST_CASE("H = 1/2 gives iid increments") {
  const int n = 100000;
  const auto d = synth_fgn_circulant(0.5, n, 7);
  CHECK(var_of(d) * n == doctest::Approx(1.0).epsilon(0.03));
  double lag1 = 0.0;
  for (int i = 0; i + 1 < n; ++i) lag1 += d[i] * d[i + 1];
  lag1 /= (n - 1) * var_of(d);
  CHECK(std::abs(lag1) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("circulant fGn reproduces the filtered-covariance values") {
  const double hurst = 0.8;
  const int n = 4096, reps = 200;
  const double scale = std::pow(static_cast<double>(n), -2.0 * hurst);

  FgnSampler sampler(hurst, n);
  std::vector<double> d(n);
  std::vector<std::vector<double>> acov(6, std::vector<double>(reps));
  for (int r = 0; r < reps; ++r) {
    RngStream rng(1234, r);
    sampler.sample(rng, d);
    for (int j = 0; j <= 5; ++j) {
      double s = 0.0;
      for (int i = 0; i + j < n; ++i) s += d[i] * d[i + j];
      acov[j][r] = s / (n - j);
    }
  }
  for (int j = 0; j <= 5; ++j) {
    const double mc_mean = mean_of(acov[j]);
    const double se = std::sqrt(var_of(acov[j]) / reps);
    CHECK(std::abs(mc_mean - fgn_cov(j, hurst) * scale) < 4.0 * se);
  }
}

TEST_CASE("empirical covariance matrix matches the Toeplitz target") {
  const int n = 256, reps = 500;
  for (double hurst : {0.3, 0.5, 0.8}) {
    FgnSampler sampler(hurst, n);
    const double scale = std::pow(static_cast<double>(n), -2.0 * hurst);
    Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> d(n);
    for (int r = 0; r < reps; ++r) {
      RngStream rng(99, r);
      sampler.sample(rng, d);
      Eigen::Map<const Eigen::VectorXd> v(d.data(), n);
      second_moment.selfadjointView<Eigen::Lower>().rankUpdate(v);
    }
    second_moment /= static_cast<double>(reps);

    int outliers = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double cij = fgn_cov(i - j, hurst) * scale;
        const double cii = fgn_cov(0, hurst) * scale;
        const double se =
            std::sqrt((cii * cii + cij * cij) / static_cast<double>(reps));
        if (std::abs(second_moment(i, j) - cij) >= 5.0 * se) ++outliers;
      }
    }
    CHECK(outliers == 0);
  }
}

TEST_CASE("general synthesis: fBm route and variance checks") {
  const auto fbm = ProcessModel::fbm(0.8, 1.0);
  std::vector<double> endpoints(500);
  PathSynthesizer synth(fbm, 256);
  for (int r = 0; r < 500; ++r) {
    RngStream rng(5, r);
    endpoints[r] = synth.sample(rng, 5).values.back();  // X(1)
  }
  CHECK(var_of(endpoints) == doctest::Approx(1.0).epsilon(0.1));

  const auto path = synth_general(fbm, 64, 11);
  CHECK(path.n() == 64);
  CHECK(path.values == synth_general(fbm, 64, 11).values);
  CHECK_FALSE(path.contaminated);
}

TEST_CASE("general synthesis: dense route for the exp model") {
  const auto model = ProcessModel::exponential(0.8);
  const int n = 1000;
  std::vector<double> endpoints(500);
  PathSynthesizer synth(model, n);
  for (int r = 0; r < 500; ++r) {
    RngStream rng(17, r);
    endpoints[r] = synth.sample(rng, 17).values.back();
  }
  // Var X(1) = v(1) = 1 - exp(-1)
  CHECK(var_of(endpoints) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.1));

  CHECK_THROWS_AS(PathSynthesizer(model, (1 << 14) + 1), std::invalid_argument);
}

TEST_CASE("path covariance closed form at n = 2") {
  const auto model = ProcessModel::exponential(0.7);
  const Eigen::MatrixXd cov = path_covariance(model, 2);
  auto v = [](double t) { return 1.0 - std::exp(-std::pow(std::abs(t), 1.4)); };
  CHECK(cov(0, 0) == doctest::Approx(v(0.5)).epsilon(1e-14));
  CHECK(cov(1, 1) == doctest::Approx(v(1.0)).epsilon(1e-14));
  CHECK(cov(0, 1) == doctest::Approx(0.5 * (v(0.5) + v(1.0) - v(0.5))).epsilon(1e-14));
}

TEST_CASE("single-point path") {
  const auto path = synth_general(ProcessModel::fbm(0.8), 1, 3);
  CHECK(path.n() == 1);
  CHECK(std::isfinite(path.values[0]));
}

TEST_CASE("filtered-variance self-similarity on sample paths") {
  const double hurst = 0.7;
  const auto fbm = ProcessModel::fbm(hurst);
  PathSynthesizer synth(fbm, 1024);
  const Filter inc1 = Filter::named("inc1");
  std::vector<double> ratio(200);
  for (int r = 0; r < 200; ++r) {
    RngStream rng(31, r);
    const auto path = synth.sample(rng, 31);
    const auto v1 = apply_filter(dilate(inc1, 1), path.values);
    const auto v2 = apply_filter(dilate(inc1, 2), path.values);
    double s1 = 0.0, s2 = 0.0;
    for (double v : v1) s1 += v * v;
    for (double v : v2) s2 += v * v;
    ratio[r] = (s2 / v2.size()) / (s1 / v1.size());
  }
  CHECK(mean_of(ratio) == doctest::Approx(std::pow(2.0, 2.0 * hurst)).epsilon(0.1));
}

TEST_CASE("contamination model") {
  const auto fbm = ProcessModel::fbm(0.8);
  const auto clean = synth_general(fbm, 1000, 77);

  SUBCASE("p = 0 leaves the path untouched") {
    const auto same = contaminate(clean, ContaminationSpec{0.0, 20.0}, 123);
    CHECK(same.values == clean.values);
    CHECK_FALSE(same.contaminated);
  }

  SUBCASE("hit count is binomial with mean n p") {
    double total_hits = 0.0;
    for (int r = 0; r < 1000; ++r) {
      const auto noisy = contaminate(clean, ContaminationSpec{0.005, 20.0}, r);
      int hits = 0;
      for (int i = 0; i < clean.n(); ++i) {
        if (noisy.values[i] != clean.values[i]) ++hits;
      }
      total_hits += hits;
    }
    CHECK(total_hits / 1000.0 > 4.0);
    CHECK(total_hits / 1000.0 < 6.0);
  }

  SUBCASE("clean values survive where U = 0, and 20 dB means sigma ratio 0.1") {
    const auto noisy = contaminate(clean, ContaminationSpec{1.0, 20.0}, 5);
    CHECK(noisy.contaminated);
    // every index hit: standardized injected noise has sd 0.1
    double ss = 0.0;
    for (int i = 0; i < clean.n(); ++i) {
      const double t = static_cast<double>(i + 1) / clean.n();
      const double z = (noisy.values[i] - clean.values[i]) / std::sqrt(fbm.v(t));
      ss += z * z;
    }
    CHECK(std::sqrt(ss / clean.n()) == doctest::Approx(0.1).epsilon(0.05));

    const auto sparse = contaminate(clean, ContaminationSpec{0.01, 20.0}, 6);
    int unchanged = 0;
    for (int i = 0; i < clean.n(); ++i) {
      if (sparse.values[i] == clean.values[i]) ++unchanged;
    }
    CHECK(unchanged > 950);  // untouched indices keep their exact values
  }
}

TEST_CASE("periodogram matches a direct DFT") {
  std::vector<double> d{0.3, -1.2, 0.7, 0.1, -0.4, 0.9, -0.8, 0.2, 1.1};
  const auto pgram = periodogram(d);
  const std::size_t n = d.size();
  REQUIRE(pgram.size() == (n - 1) / 2);
  for (std::size_t j = 1; j <= pgram.size(); ++j) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * j * t / n;
      re += d[t] * std::cos(ang);
      im += d[t] * std::sin(ang);
    }
    CHECK(pgram[j - 1] ==
          doctest::Approx((re * re + im * im) / (2.0 * M_PI * n)).epsilon(1e-10));
  }
}
