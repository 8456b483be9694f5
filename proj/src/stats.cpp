#include "radapt/stats.hpp"

#include <cmath>

#include "radapt/errors.hpp"

namespace radapt {

double wilson_upper(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw ValidationError("wilson_upper: zero trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double u = (center + spread) / denom;
  return u > 1.0 ? 1.0 : u;
}

double wilson_lower(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw ValidationError("wilson_lower: zero trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double l = (center - spread) / denom;
  return l < 0.0 ? 0.0 : l;
}

MeanStd mean_std(const double* values, std::size_t n) {
  MeanStd r;
  if (n == 0) return r;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += values[i];
  r.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - r.mean;
    ss += d * d;
  }
  r.std = std::sqrt(ss / static_cast<double>(n));
  r.std_error = r.std / std::sqrt(static_cast<double>(n));
  return r;
}

}  // namespace radapt
