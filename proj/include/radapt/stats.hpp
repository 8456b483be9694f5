#pragma once

#include <cstddef>

namespace radapt {

// One-sided 99% normal quantile used for the Wilson confidence limits.
inline constexpr double kWilsonZ99 = 2.3263478740408408;

// Wilson score upper confidence limit for a binomial proportion.
double wilson_upper(std::size_t successes, std::size_t trials, double z = kWilsonZ99);

// Wilson score lower confidence limit.
double wilson_lower(std::size_t successes, std::size_t trials, double z = kWilsonZ99);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;        // population-style std over the values
  double std_error = 0.0;  // std / sqrt(n)
};

// Mean, standard deviation and standard error of a value array.
MeanStd mean_std(const double* values, std::size_t n);

}  // namespace radapt
