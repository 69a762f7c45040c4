#include "detuf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "detuf/errors.hpp"

namespace detuf {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ParameterError("mean of an empty sample");
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  return static_cast<double>(sum / static_cast<long double>(xs.size()));
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  long double ss = 0.0L;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(static_cast<double>(ss / static_cast<long double>(xs.size() - 1)));
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw ParameterError("median of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double harmonic(std::size_t n) noexcept {
  long double h = 0.0L;
  for (std::size_t k = n; k >= 1; --k) h += 1.0L / static_cast<long double>(k);
  return static_cast<double>(h);
}

PowerFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ParameterError("fit needs equally many x and y values");
  if (xs.size() < 2) throw ParameterError("fit needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw ParameterError("power-law fit needs positive values");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const double mx = mean(lx), my = mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw ParameterError("fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace detuf
