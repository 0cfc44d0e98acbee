#pragma once

namespace hurstq {

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse of the standard normal CDF. Acklam's rational approximation
// polished with one Halley step; absolute error stays below 1e-13 across
// the open unit interval.
double normal_quantile(double p);

// Quantile of |Y| for Y standard normal: Phi^{-1}((1+p)/2).
double abs_normal_quantile(double p);

}  // namespace hurstq
