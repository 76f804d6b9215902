#pragma once

#include <span>
#include <vector>

namespace hdlp {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF. Acklam's rational approximation followed by
/// one Halley step against erfc; absolute error below 1e-12 on (1e-300, 1).
double normal_quantile(double p);

/// Acklam's approximation without refinement (relative error ~1.2e-9).
/// Cheap enough for generating variates.
double normal_quantile_fast(double p);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7, the R default). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double prob);

/// Convenience: copies, sorts and calls quantile_sorted.
double quantile(std::vector<double> values, double prob);

}  // namespace hdlp
