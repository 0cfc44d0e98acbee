#include "hurstq/synthesis.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace hurstq {

namespace {

// FFTW plan creation/destruction is not thread safe; execution on private
// buffers is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

// Unit-scale fGn autocovariance (|j+1|^{2H} - 2|j|^{2H} + |j-1|^{2H})/2.
double fgn_autocov(std::size_t j, double hurst) {
  if (j == 0) return 1.0;
  const double two_h = 2.0 * hurst;
  const double jj = static_cast<double>(j);
  return 0.5 * (std::pow(jj + 1.0, two_h) - 2.0 * std::pow(jj, two_h) +
                std::pow(jj - 1.0, two_h));
}

}  // namespace

SamplePath::SamplePath(std::vector<double> values_in, ProcessModel model_in,
                       std::uint64_t seed_in, bool contaminated_in)
    : values(std::move(values_in)),
      model(std::move(model_in)),
      seed(seed_in),
      contaminated(contaminated_in) {}

FgnSampler::FgnSampler(double hurst, int n) : n_(n) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("FgnSampler: hurst must lie in (0,1)");
  }
  if (n < 1) {
    throw std::invalid_argument("FgnSampler: n must be >= 1");
  }
  scale_ = std::pow(static_cast<double>(n), -hurst);
  if (n == 1) return;  // single N(0, 1) draw, no embedding needed

  m_ = next_pow2(2 * static_cast<std::size_t>(n - 1));
  buf_.assign(m_, {0.0, 0.0});
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(m_),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan_ == nullptr) {
    throw std::runtime_error("FgnSampler: fftw plan creation failed");
  }

  // Eigenvalues of the circulant embedding of the Toeplitz covariance.
  for (std::size_t k = 0; k < m_; ++k) {
    const std::size_t j = std::min(k, m_ - k);
    buf_[k] = {fgn_autocov(j, hurst), 0.0};
  }
  fftw_execute(reinterpret_cast<fftw_plan>(plan_));

  double max_eig = 0.0;
  for (const auto& z : buf_) max_eig = std::max(max_eig, z.real());
  sqrt_eigs_.resize(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    const double eig = buf_[k].real();
    if (eig < -1e-10 * max_eig) {
      throw std::runtime_error(
          "FgnSampler: circulant embedding has a negative eigenvalue; "
          "double the embedding size");
    }
    sqrt_eigs_[k] = std::sqrt(std::max(eig, 0.0) / static_cast<double>(m_));
  }
}

FgnSampler::~FgnSampler() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(reinterpret_cast<fftw_plan>(plan_));
  }
}

void FgnSampler::sample(RngStream& rng, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("FgnSampler::sample: output size mismatch");
  }
  if (n_ == 1) {
    out[0] = scale_ * rng.gaussian();
    return;
  }

  const std::size_t half = m_ / 2;
  buf_[0] = {sqrt_eigs_[0] * rng.gaussian(), 0.0};
  buf_[half] = {sqrt_eigs_[half] * rng.gaussian(), 0.0};
  const double inv_sqrt2 = 0.7071067811865475244;
  for (std::size_t k = 1; k < half; ++k) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    const double w = sqrt_eigs_[k] * inv_sqrt2;
    buf_[k] = {w * re, w * im};
    buf_[m_ - k] = {w * re, -w * im};
  }
  fftw_execute(reinterpret_cast<fftw_plan>(plan_));
  for (int i = 0; i < n_; ++i) {
    out[i] = scale_ * buf_[i].real();
  }
}

std::vector<double> synth_fgn_circulant(double hurst, int n, std::uint64_t seed) {
  FgnSampler sampler(hurst, n);
  RngStream rng(seed, 0);
  std::vector<double> out(n);
  sampler.sample(rng, out);
  return out;
}

Eigen::MatrixXd path_covariance(const ProcessModel& model, int n) {
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i + 1) / n;
    for (int j = 0; j <= i; ++j) {
      const double t = static_cast<double>(j + 1) / n;
      cov(i, j) = 0.5 * (model.v(s) + model.v(t) - model.v(s - t));
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

PathSynthesizer::PathSynthesizer(ProcessModel model, int n)
    : model_(std::move(model)), n_(n) {
  if (n < 1) {
    throw std::invalid_argument("PathSynthesizer: n must be >= 1");
  }
  if (model_.family() == VarianceFamily::Fbm) {
    fgn_ = std::make_unique<FgnSampler>(model_.hurst(), n);
    return;
  }
  if (n > kDenseSynthesisMaxN) {
    throw std::invalid_argument(
        "PathSynthesizer: dense synthesis is limited to n <= 2^14 for model '" +
        model_.label() + "'");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(path_covariance(model_, n));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("PathSynthesizer: covariance of model '" +
                             model_.label() + "' is not positive definite");
  }
  chol_lower_ = llt.matrixL();
}

SamplePath PathSynthesizer::sample(RngStream& rng, std::uint64_t seed_label) {
  std::vector<double> values(n_);
  if (fgn_) {
    fgn_->sample(rng, values);
    const double sigma = std::sqrt(model_.sigma2());
    double acc = 0.0;
    for (double& v : values) {
      acc += sigma * v;
      v = acc;
    }
  } else {
    Eigen::VectorXd z(n_);
    for (int i = 0; i < n_; ++i) z[i] = rng.gaussian();
    Eigen::VectorXd x = chol_lower_ * z;
    for (int i = 0; i < n_; ++i) values[i] = x[i];
  }
  return SamplePath(std::move(values), model_, seed_label);
}

SamplePath synth_general(const ProcessModel& model, int n, std::uint64_t seed) {
  PathSynthesizer synth(model, n);
  RngStream rng(seed, 0);
  return synth.sample(rng, seed);
}

void contaminate_inplace(SamplePath& path, const ContaminationSpec& spec,
                         RngStream& rng) {
  if (!(spec.bernoulli_p >= 0.0 && spec.bernoulli_p <= 1.0)) {
    throw std::invalid_argument("contaminate: bernoulli_p must lie in [0,1]");
  }
  if (path.values.empty()) {
    throw std::invalid_argument("contaminate: empty path");
  }
  const double noise_over_signal = std::pow(10.0, -spec.snr_db / 10.0);
  const int n = path.n();
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(spec.bernoulli_p)) {
      const double t = static_cast<double>(i + 1) / n;
      const double sigma_c = std::sqrt(path.model.v(t) * noise_over_signal);
      path.values[i] += sigma_c * rng.gaussian();
    }
  }
  if (spec.bernoulli_p > 0.0) path.contaminated = true;
}

SamplePath contaminate(const SamplePath& path, const ContaminationSpec& spec,
                       std::uint64_t seed) {
  SamplePath out = path;
  RngStream rng(seed, 1);
  contaminate_inplace(out, spec, rng);
  return out;
}

std::vector<double> periodogram(std::span<const double> d) {
  const std::size_t n = d.size();
  if (n < 2) {
    throw std::invalid_argument("periodogram: need at least 2 observations");
  }
  std::vector<double> in(d.begin(), d.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw std::runtime_error("periodogram: fftw plan creation failed");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  const std::size_t count = (n - 1) / 2;
  std::vector<double> pgram(count);
  const double norm = 1.0 / (2.0 * M_PI * static_cast<double>(n));
  for (std::size_t j = 1; j <= count; ++j) {
    pgram[j - 1] = std::norm(out[j]) * norm;
  }
  return pgram;
}

}  // namespace hurstq
