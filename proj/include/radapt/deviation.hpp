#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "radapt/bounds.hpp"
#include "radapt/domain.hpp"
#include "radapt/hypothesis.hpp"
#include "radapt/risk.hpp"

namespace radapt {

// Scaled multi-domain sum used by the deviation inequalities:
//   tau * (prod_k N_k) * sum_n f(z_n^T)
//   + (1-tau) * N_T * sum_k w_k (prod_{i != k} N_i) * sum_n f(z_n^k).
// Sizes are the value-list lengths; the empty product at K = 1 equals 1.
double pooled_statistic(const std::vector<double>& target_values,
                        const std::vector<std::vector<double>>& source_values,
                        const MixtureWeights& weights);

// Exact expectation of the pooled statistic from per-domain atom means
// (valid by linearity).
double pooled_statistic_expectation(
    double target_mean, const std::vector<double>& source_means,
    const SampleSizes& sizes, const MixtureWeights& weights);

// Convenience rescaling of the pooled statistic by 1 / (N_T prod N_k),
// which turns it into the combined weighted empirical mean. The stated
// inequalities bound the unnormalized form; this wrapper exists for
// readability of reports only.
double pooled_statistic_normalized(
    const std::vector<double>& target_values,
    const std::vector<std::vector<double>>& source_values,
    const MixtureWeights& weights);

// Two-sided Hoeffding-type tail bound on the pooled statistic at threshold
// xi, evaluated in log space.
double hoeffding_deviation_bound(const SampleSizes& sizes,
                                 const MixtureWeights& weights,
                                 double range_width, double xi);

// Two-sided Bennett-type tail bound at the size-proportional weights (the
// weights are forced internally): 2 exp(total * gamma(xi / (N_T prod N (b-a)))).
double bennett_deviation_bound(const SampleSizes& sizes, double range_width,
                               double xi);

struct McDiarmidBounds {
  double quadratic = 0.0;            // exp(-2 xi^2 / sum sum c^2)
  std::optional<double> bennett;     // only when all c are equal within 1e-12
};

// One-sided bounded-difference tail bounds; c_table holds one list of
// constants per domain.
McDiarmidBounds mcdiarmid_bound(const std::vector<std::vector<double>>& c_table,
                                double xi);

enum class StatisticKind { PooledSum, SupDeviation, BoundedDifference };

// Monte Carlo tail experiment over discrete domains. The function under test
// is given by its values on each domain's atoms (target first in
// `atom_values`, then one entry per source).
struct TailExperiment {
  StatisticKind statistic = StatisticKind::PooledSum;
  DiscreteDomainSpec target;
  std::vector<DiscreteDomainSpec> sources;
  std::vector<std::vector<double>> atom_values;  // f per atom; target, then sources
  SampleSizes sizes;
  MixtureWeights weights;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::vector<double> thresholds;  // positive, sorted ascending
  std::size_t trials = 10000;      // >= 100
  std::uint64_t seed = 0;

  void validate() const;
};

struct TailReportRow {
  double xi = 0.0;
  double empirical_p = 0.0;
  double wilson99 = 0.0;  // one-sided 99% Wilson upper limit of empirical_p
  double bound = 0.0;
  bool pass = false;
  bool condition_ok = true;  // symmetrization rows: stated condition held
};

struct TailReport {
  std::vector<TailReportRow> rows;
  bool all_pass = true;
};

// Runs the seeded trials, counts deviations of the pooled statistic from its
// exact expectation, and compares the empirical tail frequency per threshold
// against bound_fn(xi). The statistic kind picks the comparison: PooledSum
// counts |F - EF| > xi (two-sided), BoundedDifference counts F - EF >= xi
// (the one-sided form the bounded-difference bounds are stated for).
// Pass policy: Wilson 99% upper limit <= bound, or the raw empirical
// frequency <= bound.
TailReport mc_tail_estimate(const TailExperiment& experiment,
                            const std::function<double(double)>& bound_fn,
                            unsigned threads = 1);

// Tail report for the sup-deviation statistic sup_f |E_T f - E_combined f|
// over a finite class on discrete domains, with exact target expectations.
// Each threshold row is compared against bound_fn(xi).
TailReport sup_deviation_tail(const FiniteHypothesisClass& klass,
                              const DiscreteDomainSpec& target,
                              const std::vector<DiscreteDomainSpec>& sources,
                              const SampleSizes& sizes,
                              const MixtureWeights& weights,
                              const std::vector<double>& thresholds,
                              const std::function<double(double)>& bound_fn,
                              std::size_t trials, std::uint64_t seed,
                              unsigned threads = 1);

// Monte Carlo check of the two-sample symmetrization inequality
//   Pr{ sup_f |E_T f - E_combined f| > xi }
//     <= 2 Pr{ sup_f |E'_combined f - E_combined f| > xi'/2 }
// over a finite class on discrete domains, with exact target expectations on
// the left side. Rows with xi <= discrepancy or a violated size condition
// are reported with condition_ok = false rather than thrown.
TailReport symmetrization_check(const FiniteHypothesisClass& klass,
                                const DiscreteDomainSpec& target,
                                const std::vector<DiscreteDomainSpec>& sources,
                                const SampleSizes& sizes,
                                const MixtureWeights& weights,
                                const std::vector<double>& thresholds,
                                std::size_t trials, std::uint64_t seed,
                                unsigned threads = 1);

}  // namespace radapt
