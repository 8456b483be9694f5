#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radapt/risk.hpp"

namespace radapt {

// Exponent kernel of the Bennett-type tails: gamma(x) = x - (x+1) ln(x+1).
// Zero at x = 0, strictly decreasing and negative for x > 0.
double bennett_gamma(double x);

struct RateExponent {
  double value = 0.0;
  // Set when (c, x) lies outside the intervals the closed-form results are
  // stated for; the defining identity gamma(x) = -c * x^value still holds.
  bool outside_stated_range = false;
};

// The exponent eta solving gamma(x) = -c * x^eta:
//   eta(c; x) = ln(((x+1) ln(x+1) - x) / c) / ln(x).
// x = 1 is a singularity (zero denominator).
RateExponent bennett_rate_exponent(double c, double x);

struct SampleSizes {
  std::size_t target = 0;
  std::vector<std::size_t> sources;

  double source_sum() const;
  double source_product() const;
  double product_excluding(std::size_t k) const;
  double total() const { return static_cast<double>(target) + source_sum(); }
  void validate() const;
};

struct RademacherInputs {
  std::vector<double> source_expected;  // R^(k), one per source
  double target_empirical = 0.0;        // empirical complexity on the target
};

// Numeric inputs shared by the closed-form bound evaluations.
struct BoundInput {
  SampleSizes sizes;
  MixtureWeights weights;
  double range_lo = 0.0;
  double range_hi = 1.0;
  double divergence = 0.0;  // weighted divergence value D
  std::optional<double> ln_cover;       // ln entropy number at cover_radius
  std::optional<double> cover_radius;   // radius the cover was evaluated at
  std::optional<RademacherInputs> rademacher;
  double confidence = 0.05;  // epsilon in (0, 1)
  std::optional<double> eta;    // rate exponent, if imposed by the caller
  std::optional<double> c1;     // Bennett constant for the entropy-based form
  std::optional<double> eta_x;  // the x value eta was derived at
  std::optional<double> c2;     // Bennett constant for the Rademacher form

  double range_width() const { return range_hi - range_lo; }
  // tau^2 / N_T + sum_k (1 - tau)^2 w_k^2 / N_k
  double variance_factor() const;
  void validate_common() const;
  bool weights_are_optimal(double tol = 1e-9) const;
};

struct PreconditionReport {
  bool ok = true;
  std::vector<std::string> notes;

  void fail(std::string note) {
    ok = false;
    notes.push_back(std::move(note));
  }
};

struct BoundResult {
  double value = 0.0;             // discrepancy_term + stochastic_term
  double discrepancy_term = 0.0;  // (1 - tau) * divergence (or its optimal form)
  double stochastic_term = 0.0;
  PreconditionReport preconditions;
  std::optional<double> implied_confidence;  // for the Bennett-derived forms
  // Radius the supplied entropy number was evaluated at, echoed so reports
  // show which cover backs the bound.
  std::optional<double> cover_radius;
};

struct TailProbability {
  double probability = 0.0;  // clamped to [0, 1]
  double log_raw = 0.0;      // un-clamped value in log space
  PreconditionReport preconditions;
};

// Hoeffding-type high-probability bound on sup |E_combined f - E_target f|:
//   (1-tau) D + sqrt((ln_cover - ln(eps/8)) * 32 (b-a)^2 * variance_factor).
// The stated small-deviation condition is checked at the resulting
// stochastic term; violations are reported in the flag, not thrown.
BoundResult hoeffding_bound(const BoundInput& input);

// Bennett-type tail for a threshold xi, valid at the size-proportional
// weights only: 8 * cover * exp(total * gamma(xi' / (b-a))).
TailProbability bennett_tail(const BoundInput& input, double xi);

// Bernstein-style closed form of the Bennett tail.
BoundResult bernstein_bound(const BoundInput& input);

// Bennett form with the gamma kernel replaced by -c1 x^eta, giving the
// (b-a) * (L / total)^(1/eta) stochastic term.
BoundResult alt_bennett_bound(const BoundInput& input);

// Rademacher-complexity bound (Hoeffding-style deviation terms).
BoundResult rademacher_bound_hoeffding(const BoundInput& input);

// Rademacher-complexity bound with eta-th roots in the deviation terms.
BoundResult rademacher_bound_bennett(const BoundInput& input);

// Hoeffding bound specialized to the size-proportional weights:
//   (sum N_k) D / total + sqrt((ln_cover - ln(eps/8)) * 32 (b-a)^2 / total).
BoundResult optimal_rate_bound(const BoundInput& input);

struct AsymptoticReport {
  std::vector<double> ratios;
  double running_max = 0.0;
  // Heuristic finite-limit indicator: the last quartile of the ratio
  // sequence is non-increasing.
  bool bounded_trend = false;
};

// Evaluates ln_cover / (1 / variance_factor) along a growth sequence.
AsymptoticReport asymptotic_condition(const std::vector<SampleSizes>& growth,
                                      const std::vector<double>& ln_cover,
                                      const MixtureWeights& weights);

}  // namespace radapt
