#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hurstq/process_models.hpp"
#include "hurstq/rng.hpp"

namespace hurstq {

// Largest n for which the dense Cholesky route is allowed.
inline constexpr int kDenseSynthesisMaxN = 1 << 14;

struct SamplePath {
  std::vector<double> values;  // X(i/n), i = 1..n; X(0) = 0 is not stored
  ProcessModel model;
  std::uint64_t seed = 0;
  bool contaminated = false;

  SamplePath(std::vector<double> values, ProcessModel model, std::uint64_t seed,
             bool contaminated = false);
  int n() const { return static_cast<int>(values.size()); }
};

struct ContaminationSpec {
  double bernoulli_p = 0.005;
  double snr_db = 20.0;
};

// Exact circulant-embedding sampler for fractional Gaussian noise. The
// covariance c_j = (|j+1|^{2H} - 2|j|^{2H} + |j-1|^{2H})/2 is embedded in a
// power-of-two circulant whose eigenvalues are computed once; each draw
// costs one FFT. Draws are scaled by n^{-H} so their cumulative sum is a
// unit-sigma fBm observed at i/n.
class FgnSampler {
 public:
  FgnSampler(double hurst, int n);
  ~FgnSampler();
  FgnSampler(const FgnSampler&) = delete;
  FgnSampler& operator=(const FgnSampler&) = delete;

  void sample(RngStream& rng, std::span<double> out);
  int size() const { return n_; }

 private:
  int n_ = 0;
  std::size_t m_ = 0;  // embedding size
  double scale_ = 1.0;
  std::vector<double> sqrt_eigs_;
  void* plan_ = nullptr;  // fftw_plan
  std::vector<std::complex<double>> buf_;
};

// One-shot convenience wrapper around FgnSampler.
std::vector<double> synth_fgn_circulant(double hurst, int n, std::uint64_t seed);

// Reusable exact path generator: fBm goes through the circulant sampler for
// any n, exp/log/custom through a dense Cholesky factor (n limited to
// kDenseSynthesisMaxN). One instance per worker thread.
class PathSynthesizer {
 public:
  PathSynthesizer(ProcessModel model, int n);

  SamplePath sample(RngStream& rng, std::uint64_t seed_label);
  const ProcessModel& model() const { return model_; }

 private:
  ProcessModel model_;
  int n_;
  std::unique_ptr<FgnSampler> fgn_;
  Eigen::MatrixXd chol_lower_;
};

// Dense path covariance Cov(X(s), X(t)) = (v(s) + v(t) - v(s-t))/2 on the
// grid {i/n}.
Eigen::MatrixXd path_covariance(const ProcessModel& model, int n);

SamplePath synth_general(const ProcessModel& model, int n, std::uint64_t seed);

// Additive-outlier contamination: X^C(i/n) = X(i/n) + U(i) V(i) with
// U ~ Bernoulli(p) and V(i) ~ N(0, v(i/n) 10^{-snr/10}). V is drawn only
// where U(i) = 1.
void contaminate_inplace(SamplePath& path, const ContaminationSpec& spec,
                         RngStream& rng);
SamplePath contaminate(const SamplePath& path, const ContaminationSpec& spec,
                       std::uint64_t seed);

// Periodogram of d at Fourier frequencies 2 pi j / N, j = 1..floor((N-1)/2).
std::vector<double> periodogram(std::span<const double> d);

}  // namespace hurstq
