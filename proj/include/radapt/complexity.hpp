#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "radapt/domain.hpp"
#include "radapt/hypothesis.hpp"
#include "radapt/risk.hpp"

namespace radapt {

// Original and ghost sample lists for one domain; the two have equal sizes.
struct GhostedDomain {
  std::vector<LabeledSample> original;
  std::vector<LabeledSample> ghost;
};

// Target plus K sources, each with its ghost copy (the 2N structure).
struct GhostedBundle {
  GhostedDomain target;
  std::vector<GhostedDomain> sources;

  void validate() const;
};

// Column layout of a function-value matrix evaluated on a ghosted bundle:
// [target original | target ghost | src1 original | src1 ghost | ...].
struct GhostLayout {
  std::size_t n_target = 0;
  std::vector<std::size_t> n_sources;

  std::size_t columns() const;
  static GhostLayout of(const GhostedBundle& bundle);
};

// Flattens a ghosted bundle into the canonical column order with tags.
std::vector<LabeledSample> flatten(const GhostedBundle& bundle,
                                   std::vector<PointTag>* tags = nullptr);

struct ComplexityEstimate {
  enum class Kind { CoveringNumber, EntropyNumber, RademacherEmpirical,
                    RademacherExpected };
  Kind kind = Kind::CoveringNumber;
  double value = 0.0;
  std::optional<double> radius;
  std::size_t trials = 1;
  std::optional<double> std_error;
};

// Weighted empirical l1 norm of a function's values over a ghosted bundle:
//   tau/(2 N_T) * sum of |f| over both target copies
//   + sum_k (1-tau) w_k / (2 N_k) * sum of |f| over both copies of source k.
// `row` follows the GhostLayout column order.
double weighted_l1_norm(const double* row, const GhostLayout& layout,
                        const MixtureWeights& weights);

// Pairwise distance matrix between class members under the weighted l1 norm
// of the value differences.
Eigen::MatrixXd weighted_l1_distances(const FunctionValueMatrix& matrix,
                                      const GhostLayout& layout,
                                      const MixtureWeights& weights);

// Farthest-point greedy internal cover at the given radius. The returned
// size is a certified upper bound on the minimum: cover validity is checked
// before returning. Ties break toward the first index at maximal distance.
ComplexityEstimate covering_number_greedy(const FunctionValueMatrix& matrix,
                                          double radius,
                                          const GhostLayout& layout,
                                          const MixtureWeights& weights);

// Exact minimum internal cover size by subset search (class size <= 20).
ComplexityEstimate covering_number_exact(const FunctionValueMatrix& matrix,
                                         double radius,
                                         const GhostLayout& layout,
                                         const MixtureWeights& weights);

// Estimate of the entropy number sup over sample sets of ln(cover size):
// maximum over `redraws` independently redrawn ghosted bundles of the greedy
// log cover size. A lower estimate of the true supremum; redraw r uses the
// child seed (seed, r), so nested redraw sets are monotone in `redraws`.
ComplexityEstimate uniform_entropy_estimate(
    const FiniteHypothesisClass& klass, const DomainSpec& target_spec,
    const std::vector<DomainSpec>& source_specs, std::size_t target_size,
    const std::vector<std::size_t>& source_sizes, const MixtureWeights& weights,
    double radius, std::size_t redraws, std::uint64_t seed);

// Draws one ghosted bundle (2N per domain) from the specs.
GhostedBundle draw_ghosted_bundle(const DomainSpec& target_spec,
                                  const std::vector<DomainSpec>& source_specs,
                                  std::size_t target_size,
                                  const std::vector<std::size_t>& source_sizes,
                                  std::uint64_t seed);

// Monte Carlo empirical Rademacher complexity of the rows of `values` over
// their fixed points: average over `trials` sign vectors of
// max over rows of (1/N) sum sigma_n f(z_n). No absolute value inside the max.
ComplexityEstimate rademacher_empirical(const Eigen::MatrixXd& values,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads = 1);

// Rademacher complexity with the data expectation estimated by an outer
// Monte Carlo loop over draws of N points from the domain spec.
ComplexityEstimate rademacher_expected(const FiniteHypothesisClass& klass,
                                       const DomainSpec& spec, std::size_t n,
                                       std::size_t data_trials,
                                       std::size_t sigma_trials,
                                       std::uint64_t seed,
                                       unsigned threads = 1);

}  // namespace radapt
