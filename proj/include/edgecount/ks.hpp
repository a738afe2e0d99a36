#pragma once

#include <cmath>
#include <functional>
#include <span>

namespace edgecount {

/// One-sample Kolmogorov-Smirnov distance sup |F_n - F|. The sample need not
/// be sorted. Throws std::invalid_argument on an empty sample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
/// Small lambda uses the equivalent theta-function series, which converges fast there.
double kolmogorov_sf(double lambda);

/// Asymptotic p-value Q(sqrt(n) D).
double ks_pvalue(double d, std::size_t n);

inline double chi2_2_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x / 2.0); }

}  // namespace edgecount
