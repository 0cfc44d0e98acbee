#include "hurstq/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace hurstq {

namespace {

// Daubechies wavelet filter with two vanishing moments, in closed form.
std::vector<double> db4_coeffs() {
  const double s3 = std::sqrt(3.0);
  const double den = 4.0 * std::sqrt(2.0);
  return {(1.0 + s3) / den, -(3.0 + s3) / den, (3.0 - s3) / den,
          -(1.0 - s3) / den};
}

}  // namespace

Filter::Filter(std::vector<double> coeffs, std::string name, double order_tol)
    : coeffs_(std::move(coeffs)), name_(std::move(name)) {
  const int len = static_cast<int>(coeffs_.size());
  if (len < 2) {
    throw std::invalid_argument("Filter: need at least 2 coefficients");
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("Filter: coefficients must be finite");
    }
  }

  // Order = first j with a non-vanishing j-th moment. The comparison is
  // relative to sum_q |a_q| q^j (with 0^0 = 1) so it is scale free.
  order_ = -1;
  for (int j = 0; j < len; ++j) {
    double moment = 0.0, scale = 0.0;
    for (int q = 0; q < len; ++q) {
      const double qj = (j == 0) ? 1.0 : std::pow(static_cast<double>(q), j);
      moment += qj * coeffs_[q];
      scale += qj * std::abs(coeffs_[q]);
    }
    if (scale == 0.0) {
      throw std::invalid_argument("Filter: all coefficients are zero");
    }
    if (std::abs(moment) > order_tol * scale) {
      order_ = j;
      break;
    }
  }
  if (order_ == 0) {
    throw std::invalid_argument(
        "Filter: coefficients do not sum to zero (not a valid filter)");
  }
  if (order_ < 0) {
    throw std::invalid_argument(
        "Filter: all moment sums vanish; coefficients are degenerate");
  }
}

Filter Filter::named(std::string_view name) {
  if (name == "inc1") return Filter({1.0, -1.0}, "inc1");
  if (name == "inc2") return Filter({1.0, -2.0, 1.0}, "inc2");
  if (name == "db4") return Filter(db4_coeffs(), "db4");
  throw std::invalid_argument("Filter::named: unknown filter '" +
                              std::string(name) + "'");
}

DilatedFilter::DilatedFilter(Filter base, int m) : base_(std::move(base)), m_(m) {
  if (m < 1) {
    throw std::invalid_argument("DilatedFilter: dilation must be >= 1");
  }
  const int l = base_.length() - 1;
  coeffs_.assign(static_cast<std::size_t>(m) * l + 1, 0.0);
  for (int j = 0; j <= l; ++j) {
    coeffs_[static_cast<std::size_t>(j) * m] = base_.coeffs()[j];
  }
}

DilatedFilter dilate(const Filter& f, int m) { return DilatedFilter(f, m); }

std::vector<double> apply_filter(std::span<const double> coeffs,
                                 std::span<const double> x) {
  const std::size_t len = coeffs.size();
  if (len < 2) {
    throw std::invalid_argument("apply_filter: filter too short");
  }
  if (x.size() < len) {
    throw std::invalid_argument("apply_filter: path shorter than filter");
  }
  const std::size_t l = len - 1;
  std::vector<double> out(x.size() - l);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (std::size_t q = 0; q < len; ++q) {
      s += coeffs[q] * x[k + l - q];
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> apply_filter(const Filter& f, std::span<const double> x) {
  return apply_filter(std::span<const double>(f.coeffs()), x);
}

std::vector<double> apply_filter(const DilatedFilter& f,
                                 std::span<const double> x) {
  // Skip the structural zeros: tap j sits at offset j*m.
  const auto& a = f.base().coeffs();
  const int m = f.dilation();
  const std::size_t l = f.coeffs().size() - 1;
  if (x.size() < f.coeffs().size()) {
    throw std::invalid_argument("apply_filter: path shorter than filter");
  }
  std::vector<double> out(x.size() - l);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      s += a[j] * x[k + l - j * m];
    }
    out[k] = s;
  }
  return out;
}

}  // namespace hurstq
