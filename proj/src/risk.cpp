#include "radapt/risk.hpp"

#include <cmath>

#include "radapt/errors.hpp"
#include "radapt/parallel.hpp"
#include "radapt/stats.hpp"

namespace radapt {

MixtureWeights::MixtureWeights(double tau, Eigen::VectorXd w)
    : tau_(tau), w_(std::move(w)) {
  if (!(tau >= 0.0 && tau < 1.0))
    throw ValidationError("MixtureWeights: tau must lie in [0, 1)");
  if (w_.size() == 0) throw ValidationError("MixtureWeights: empty w");
  double total = 0.0;
  for (Eigen::Index k = 0; k < w_.size(); ++k) {
    if (!(w_[k] >= 0.0 && w_[k] <= 1.0))
      throw ValidationError("MixtureWeights: each w_k must lie in [0, 1]");
    total += w_[k];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("MixtureWeights: w sums to " + std::to_string(total));
}

double empirical_risk_target(std::span<const double> values) {
  if (values.empty())
    throw ValidationError("empirical_risk_target: empty target sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double empirical_risk_sources(const std::vector<std::vector<double>>& per_source,
                              const MixtureWeights& weights) {
  if (per_source.size() != weights.num_sources())
    throw ValidationError("empirical_risk_sources: weight/source count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < per_source.size(); ++k) {
    if (per_source[k].empty())
      throw ValidationError("empirical_risk_sources: source " +
                            std::to_string(k + 1) + " is empty");
    total += weights.w(k) * empirical_risk_target(per_source[k]);
  }
  return total;
}

RiskReport combined_risk(std::span<const double> target_values,
                         const std::vector<std::vector<double>>& source_values,
                         const MixtureWeights& weights) {
  RiskReport r;
  r.target_empirical = empirical_risk_target(target_values);
  r.source_weighted = empirical_risk_sources(source_values, weights);
  r.combined = weights.tau() * r.target_empirical +
               (1.0 - weights.tau()) * r.source_weighted;
  return r;
}

namespace {

// Accumulates the normal system of the weighted objective with an appended
// bias coordinate. Each domain contributes coeff/N * sum x~ x~^T.
void accumulate_normal_system(const DomainDataset& ds, double coeff,
                              Eigen::MatrixXd& A, Eigen::VectorXd& b) {
  if (coeff == 0.0) return;
  const Eigen::Index d = ds.dim();
  const double c = coeff / static_cast<double>(ds.size());
  Eigen::VectorXd xa(d + 1);
  for (const auto& s : ds.samples()) {
    xa.head(d) = s.x;
    xa[d] = 1.0;
    A.noalias() += c * (xa * xa.transpose());
    b.noalias() += (c * s.y) * xa;
  }
}

}  // namespace

LinearHypothesis solve_weighted_least_squares(const MultiSourceBundle& bundle,
                                              const MixtureWeights& weights,
                                              std::optional<double> ridge) {
  if (weights.num_sources() != bundle.num_sources())
    throw ValidationError("solve_weighted_least_squares: weight/source mismatch");
  if (ridge && *ridge < 0.0)
    throw ValidationError("solve_weighted_least_squares: ridge must be >= 0");
  const Eigen::Index p = bundle.dim() + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  accumulate_normal_system(bundle.target(), weights.tau(), A, b);
  for (std::size_t k = 0; k < bundle.num_sources(); ++k)
    accumulate_normal_system(bundle.source(k),
                             (1.0 - weights.tau()) * weights.w(k), A, b);

  const double eps = ridge ? *ridge : 1e-10 * A.trace() / static_cast<double>(p);
  if (eps > 0.0) {
    A.diagonal().array() += eps;
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < p)
      throw SingularSystemError(
          "solve_weighted_least_squares: singular normal system; pass ridge > 0");
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  Eigen::VectorXd theta = ldlt.solve(b);
  const double residual = (A * theta - b).norm();
  const double scale = b.norm() + A.norm();
  if (ldlt.info() != Eigen::Success ||
      !(residual <= 1e-8 * (1.0 + scale)) || !theta.allFinite())
    throw SingularSystemError(
        "solve_weighted_least_squares: singular normal system; pass ridge > 0");
  LinearHypothesis h;
  h.weights = theta.head(p - 1);
  h.bias = theta[p - 1];
  return h;
}

double weighted_least_squares_objective(const MultiSourceBundle& bundle,
                                        const MixtureWeights& weights,
                                        const LinearHypothesis& h) {
  auto domain_mean = [&](const DomainDataset& ds) {
    double sum = 0.0;
    for (const auto& s : ds.samples()) {
      const double r = predict(h, s.x) - s.y;
      sum += r * r;
    }
    return sum / static_cast<double>(ds.size());
  };
  double obj = weights.tau() * domain_mean(bundle.target());
  for (std::size_t k = 0; k < bundle.num_sources(); ++k)
    obj += (1.0 - weights.tau()) * weights.w(k) * domain_mean(bundle.source(k));
  return obj;
}

MixtureWeights optimal_parameters(std::size_t target_size,
                                  const std::vector<std::size_t>& source_sizes) {
  if (target_size == 0)
    throw ValidationError("optimal_parameters: target size must be >= 1");
  if (source_sizes.empty())
    throw ValidationError("optimal_parameters: needs at least one source size");
  double total = 0.0;
  for (std::size_t n : source_sizes) {
    if (n == 0)
      throw ValidationError("optimal_parameters: source sizes must be >= 1");
    total += static_cast<double>(n);
  }
  Eigen::VectorXd w(source_sizes.size());
  for (std::size_t k = 0; k < source_sizes.size(); ++k)
    w[static_cast<Eigen::Index>(k)] = static_cast<double>(source_sizes[k]) / total;
  const double tau =
      static_cast<double>(target_size) / (static_cast<double>(target_size) + total);
  return MixtureWeights(tau, std::move(w));
}

ExpectedRisk expected_risk(const DiscreteDomainSpec& spec, const Hypothesis& h,
                           const LossFunction& loss) {
  ExpectedRisk r;
  r.value = enumerate_expectation(
      spec, [&](const LabeledSample& z) { return loss(predict(h, z.x), z.y); });
  return r;
}

ExpectedRisk expected_risk(const GaussianDomainSpec& spec, const Hypothesis& h,
                           const LossFunction& loss, std::size_t mc_draws,
                           std::uint64_t seed, unsigned threads) {
  if (mc_draws == 0)
    throw ValidationError("expected_risk: Monte Carlo budget must be >= 1");
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (mc_draws + kBlock - 1) / kBlock;
  std::vector<double> block_sum(blocks, 0.0), block_sq(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::size_t bi) {
    const std::size_t lo = bi * kBlock;
    const std::size_t hi = std::min(mc_draws, lo + kBlock);
    SplitRng rng(SplitRng::derive(seed, bi));
    const double x_sd = std::sqrt(spec.input_var);
    const double b_sd = std::sqrt(spec.beta_var);
    const double r_sd = std::sqrt(spec.noise_var);
    Eigen::VectorXd x(spec.dim), beta(spec.dim);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (Eigen::Index j = 0; j < spec.dim; ++j)
        x[j] = rng.normal(spec.input_mean, x_sd);
      for (Eigen::Index j = 0; j < spec.dim; ++j)
        beta[j] = rng.normal(spec.beta_mean, b_sd);
      const double y = x.dot(beta) + rng.normal(spec.noise_mean, r_sd);
      const double v = loss(predict(h, x), y);
      sum += v;
      sq += v * v;
    }
    block_sum[bi] = sum;
    block_sq[bi] = sq;
  });
  double sum = 0.0, sq = 0.0;
  for (std::size_t bi = 0; bi < blocks; ++bi) {
    sum += block_sum[bi];
    sq += block_sq[bi];
  }
  const double n = static_cast<double>(mc_draws);
  ExpectedRisk r;
  r.value = sum / n;
  const double var = std::max(0.0, sq / n - r.value * r.value);
  r.std_error = std::sqrt(var / n);
  return r;
}

namespace {

std::size_t argmin_index(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

}  // namespace

std::size_t finite_class_argmin_combined(const FiniteHypothesisClass& klass,
                                         const MultiSourceBundle& bundle,
                                         const MixtureWeights& weights) {
  std::vector<double> risks(klass.size());
  for (std::size_t i = 0; i < klass.size(); ++i) {
    double target = 0.0;
    for (const auto& z : bundle.target().samples())
      target += klass.member_loss(i, z);
    target /= static_cast<double>(bundle.target().size());
    double sources = 0.0;
    for (std::size_t k = 0; k < bundle.num_sources(); ++k) {
      double m = 0.0;
      for (const auto& z : bundle.source(k).samples())
        m += klass.member_loss(i, z);
      sources += weights.w(k) * m / static_cast<double>(bundle.source(k).size());
    }
    risks[i] = weights.tau() * target + (1.0 - weights.tau()) * sources;
  }
  return argmin_index(risks);
}

std::size_t finite_class_argmin_expected(const FiniteHypothesisClass& klass,
                                         const DiscreteDomainSpec& target) {
  std::vector<double> risks(klass.size());
  for (std::size_t i = 0; i < klass.size(); ++i)
    risks[i] = enumerate_expectation(target, [&](const LabeledSample& z) {
      return klass.member_loss(i, z);
    });
  return argmin_index(risks);
}

}  // namespace radapt
