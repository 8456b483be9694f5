#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "radapt/domain.hpp"
#include "radapt/hypothesis.hpp"

namespace radapt {

// The pair (tau, w) governing the convex risk combination. w lives on the
// simplex over the K sources; tau in [0, 1) is the target share.
class MixtureWeights {
 public:
  MixtureWeights(double tau, Eigen::VectorXd w);

  double tau() const { return tau_; }
  const Eigen::VectorXd& w() const { return w_; }
  std::size_t num_sources() const { return static_cast<std::size_t>(w_.size()); }
  double w(std::size_t k) const { return w_[static_cast<Eigen::Index>(k)]; }

 private:
  double tau_;
  Eigen::VectorXd w_;
};

struct RiskReport {
  double target_empirical = 0.0;
  double source_weighted = 0.0;
  double combined = 0.0;  // tau * target + (1 - tau) * sources
};

// Arithmetic mean of loss values on the target sample.
double empirical_risk_target(std::span<const double> values);

// sum_k w_k * mean(values_k).
double empirical_risk_sources(const std::vector<std::vector<double>>& per_source,
                              const MixtureWeights& weights);

// Convex combination of the two empirical risks.
RiskReport combined_risk(std::span<const double> target_values,
                         const std::vector<std::vector<double>>& source_values,
                         const MixtureWeights& weights);

// Closed-form minimizer (normal equations, bias included) of
//   tau/N_T sum (g(x)-y)^2 + sum_k (1-tau) w_k / N_k sum (g(x)-y)^2.
// ridge: nullopt applies a conditioning default of 1e-10 * trace scaling;
// an explicit 0 solves the exact system and raises SingularSystemError if it
// is rank deficient.
LinearHypothesis solve_weighted_least_squares(
    const MultiSourceBundle& bundle, const MixtureWeights& weights,
    std::optional<double> ridge = std::nullopt);

// Value of the weighted squared-loss objective at h.
double weighted_least_squares_objective(const MultiSourceBundle& bundle,
                                        const MixtureWeights& weights,
                                        const LinearHypothesis& h);

// Size-proportional parameters: w_k = N_k / sum N, tau = N_T / (N_T + sum N).
MixtureWeights optimal_parameters(std::size_t target_size,
                                  const std::vector<std::size_t>& source_sizes);

struct ExpectedRisk {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact enumeration
};

// Exact expected risk of h under a discrete domain.
ExpectedRisk expected_risk(const DiscreteDomainSpec& spec, const Hypothesis& h,
                           const LossFunction& loss);

// Monte Carlo expected risk under a Gaussian domain, with standard error.
// Draws are partitioned into fixed-size blocks with per-block child seeds so
// the result does not depend on the worker count.
ExpectedRisk expected_risk(const GaussianDomainSpec& spec, const Hypothesis& h,
                           const LossFunction& loss, std::size_t mc_draws,
                           std::uint64_t seed, unsigned threads = 1);

// Exact argmin by enumeration of the combined empirical risk over a finite
// class; ties break toward the lowest member index.
std::size_t finite_class_argmin_combined(const FiniteHypothesisClass& klass,
                                         const MultiSourceBundle& bundle,
                                         const MixtureWeights& weights);

// Exact argmin of the expected target risk over a finite class.
std::size_t finite_class_argmin_expected(const FiniteHypothesisClass& klass,
                                         const DiscreteDomainSpec& target);

}  // namespace radapt
