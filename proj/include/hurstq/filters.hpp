#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hurstq {

// Relative tolerance used when deciding whether a moment sum vanishes.
// Filters printed to 7 significant digits leave residuals around 1e-5 of
// the coefficient scale, so this cannot be much tighter.
inline constexpr double kFilterOrderTol = 1e-4;

// Discrete filter a_0..a_l of order nu: sum_q q^j a_q = 0 for j < nu and
// != 0 for j = nu. The order is inferred at construction. Immutable.
class Filter {
 public:
  explicit Filter(std::vector<double> coeffs, std::string name = {},
                  double order_tol = kFilterOrderTol);

  // Built-ins: "inc1" = (1,-1), "inc2" = (1,-2,1), "db4" = the Daubechies
  // wavelet filter with two vanishing moments.
  static Filter named(std::string_view name);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int order() const { return order_; }
  int length() const { return static_cast<int>(coeffs_.size()); }  // l + 1
  const std::string& name() const { return name_; }

 private:
  std::vector<double> coeffs_;
  int order_ = 0;
  std::string name_;
};

// The filter a dilated m times: coefficient a_j lands at index j*m, zeros
// in between. Length m*l + 1, same order as the base filter.
class DilatedFilter {
 public:
  DilatedFilter(Filter base, int m);

  const std::vector<double>& coeffs() const { return coeffs_; }
  const Filter& base() const { return base_; }
  int dilation() const { return m_; }
  int order() const { return base_.order(); }
  int length() const { return static_cast<int>(coeffs_.size()); }

 private:
  Filter base_;
  int m_ = 1;
  std::vector<double> coeffs_;
};

DilatedFilter dilate(const Filter& f, int m);

// y_k = sum_q a_q x[k + l - q]. Only fully supported outputs are kept, so
// the result has length x.size() - l. Throws if x is shorter than the
// filter.
std::vector<double> apply_filter(std::span<const double> coeffs,
                                 std::span<const double> x);
std::vector<double> apply_filter(const Filter& f, std::span<const double> x);
std::vector<double> apply_filter(const DilatedFilter& f,
                                 std::span<const double> x);

}  // namespace hurstq
