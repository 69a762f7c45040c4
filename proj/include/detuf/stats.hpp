#pragma once

#include <cstddef>
#include <span>

namespace detuf {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);
double median(std::span<const double> xs);
/// H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0.
double harmonic(std::size_t n) noexcept;

/// y = exp(intercept) * x^exponent, fitted by least squares on (log x, log y).
struct PowerFit {
  double exponent = 0.0;
  double intercept = 0.0;
};

PowerFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

}  // namespace detuf
