#include "radapt/complexity.hpp"

#include <bit>
#include <cmath>

#include "radapt/errors.hpp"
#include "radapt/parallel.hpp"
#include "radapt/stats.hpp"

namespace radapt {

void GhostedBundle::validate() const {
  if (target.original.empty() || target.original.size() != target.ghost.size())
    throw ValidationError("GhostedBundle: target original/ghost sizes differ");
  for (const auto& s : sources)
    if (s.original.empty() || s.original.size() != s.ghost.size())
      throw ValidationError("GhostedBundle: source original/ghost sizes differ");
}

std::size_t GhostLayout::columns() const {
  std::size_t total = 2 * n_target;
  for (std::size_t n : n_sources) total += 2 * n;
  return total;
}

GhostLayout GhostLayout::of(const GhostedBundle& bundle) {
  bundle.validate();
  GhostLayout layout;
  layout.n_target = bundle.target.original.size();
  for (const auto& s : bundle.sources) layout.n_sources.push_back(s.original.size());
  return layout;
}

std::vector<LabeledSample> flatten(const GhostedBundle& bundle,
                                   std::vector<PointTag>* tags) {
  bundle.validate();
  std::vector<LabeledSample> points;
  if (tags) tags->clear();
  auto push = [&](const std::vector<LabeledSample>& list, DomainId id, bool ghost) {
    for (const auto& z : list) {
      points.push_back(z);
      if (tags) tags->push_back({id, ghost});
    }
  };
  push(bundle.target.original, DomainId::target(), false);
  push(bundle.target.ghost, DomainId::target(), true);
  for (std::size_t k = 0; k < bundle.sources.size(); ++k) {
    push(bundle.sources[k].original, DomainId::source(static_cast<int>(k) + 1), false);
    push(bundle.sources[k].ghost, DomainId::source(static_cast<int>(k) + 1), true);
  }
  return points;
}

double weighted_l1_norm(const double* row, const GhostLayout& layout,
                        const MixtureWeights& weights) {
  if (layout.n_sources.size() != weights.num_sources())
    throw ValidationError("weighted_l1_norm: weight/source count mismatch");
  if (layout.n_target == 0)
    throw ValidationError("weighted_l1_norm: empty target block");
  std::size_t col = 0;
  double acc = 0.0;
  double block = 0.0;
  for (std::size_t j = 0; j < 2 * layout.n_target; ++j) block += std::abs(row[col++]);
  acc += weights.tau() / (2.0 * static_cast<double>(layout.n_target)) * block;
  for (std::size_t k = 0; k < layout.n_sources.size(); ++k) {
    block = 0.0;
    for (std::size_t j = 0; j < 2 * layout.n_sources[k]; ++j)
      block += std::abs(row[col++]);
    acc += (1.0 - weights.tau()) * weights.w(k) /
           (2.0 * static_cast<double>(layout.n_sources[k])) * block;
  }
  return acc;
}

Eigen::MatrixXd weighted_l1_distances(const FunctionValueMatrix& matrix,
                                      const GhostLayout& layout,
                                      const MixtureWeights& weights) {
  if (layout.columns() != matrix.num_points())
    throw ValidationError("weighted_l1_distances: layout/matrix column mismatch");
  const std::size_t n = matrix.num_functions();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
  Eigen::VectorXd diff(matrix.values.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      diff = matrix.values.row(static_cast<Eigen::Index>(i)) -
             matrix.values.row(static_cast<Eigen::Index>(j));
      const double d = weighted_l1_norm(diff.data(), layout, weights);
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    }
  }
  return dist;
}

namespace {

// Every member within `radius` of some center?
bool cover_is_valid(const Eigen::MatrixXd& dist,
                    const std::vector<std::size_t>& centers, double radius) {
  const std::size_t n = static_cast<std::size_t>(dist.rows());
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (std::size_t c : centers) {
      if (dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) <=
          radius) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace

ComplexityEstimate covering_number_greedy(const FunctionValueMatrix& matrix,
                                          double radius,
                                          const GhostLayout& layout,
                                          const MixtureWeights& weights) {
  if (!(radius > 0.0))
    throw ValidationError("covering_number_greedy: radius must be > 0");
  const Eigen::MatrixXd dist = weighted_l1_distances(matrix, layout, weights);
  const std::size_t n = static_cast<std::size_t>(dist.rows());
  std::vector<std::size_t> centers{0};
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i)
    nearest[i] = dist(static_cast<Eigen::Index>(i), 0);
  while (true) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] <= radius) break;
    centers.push_back(far);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], dist(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(far)));
  }
  if (!cover_is_valid(dist, centers, radius))
    throw Error("covering_number_greedy: produced an invalid cover");
  ComplexityEstimate e;
  e.kind = ComplexityEstimate::Kind::CoveringNumber;
  e.value = static_cast<double>(centers.size());
  e.radius = radius;
  return e;
}

ComplexityEstimate covering_number_exact(const FunctionValueMatrix& matrix,
                                         double radius,
                                         const GhostLayout& layout,
                                         const MixtureWeights& weights) {
  if (!(radius > 0.0))
    throw ValidationError("covering_number_exact: radius must be > 0");
  const std::size_t n = matrix.num_functions();
  if (n > 20)
    throw CapacityError("covering_number_exact: class size " +
                        std::to_string(n) + " exceeds the exact-search cap of 20");
  const Eigen::MatrixXd dist = weighted_l1_distances(matrix, layout, weights);
  // cover[c] = bitmask of members within radius of center c.
  std::vector<std::uint32_t> cover(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) <=
          radius)
        cover[c] |= (1u << i);
  const std::uint32_t full = (1u << n) - 1u;
  // Minimum set cover by DP over covered-member masks.
  std::vector<std::uint16_t> dp(full + 1u, 0xffff);
  dp[0] = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (dp[mask] == 0xffff) continue;
    const std::uint32_t uncovered = full & ~mask;
    const int pick = std::countr_zero(uncovered);
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cover[c] & (1u << pick))) continue;
      const std::uint32_t next = mask | cover[c];
      if (dp[next] > dp[mask] + 1) dp[next] = dp[mask] + 1;
    }
  }
  ComplexityEstimate e;
  e.kind = ComplexityEstimate::Kind::CoveringNumber;
  e.value = static_cast<double>(dp[full]);
  e.radius = radius;
  return e;
}

GhostedBundle draw_ghosted_bundle(const DomainSpec& target_spec,
                                  const std::vector<DomainSpec>& source_specs,
                                  std::size_t target_size,
                                  const std::vector<std::size_t>& source_sizes,
                                  std::uint64_t seed) {
  if (source_specs.size() != source_sizes.size())
    throw ValidationError("draw_ghosted_bundle: spec/size count mismatch");
  GhostedBundle bundle;
  auto take = [](DomainDataset ds) { return ds.samples(); };
  bundle.target.original = take(
      draw_domain(target_spec, target_size, SplitRng::derive(seed, "T"),
                  DomainId::target()));
  bundle.target.ghost = take(
      draw_domain(target_spec, target_size, SplitRng::derive(seed, "T'"),
                  DomainId::target()));
  for (std::size_t k = 0; k < source_specs.size(); ++k) {
    GhostedDomain g;
    const auto id = DomainId::source(static_cast<int>(k) + 1);
    g.original = take(draw_domain(source_specs[k], source_sizes[k],
                                  SplitRng::derive(seed, 2 * k + 2), id));
    g.ghost = take(draw_domain(source_specs[k], source_sizes[k],
                               SplitRng::derive(seed, 2 * k + 3), id));
    bundle.sources.push_back(std::move(g));
  }
  return bundle;
}

ComplexityEstimate uniform_entropy_estimate(
    const FiniteHypothesisClass& klass, const DomainSpec& target_spec,
    const std::vector<DomainSpec>& source_specs, std::size_t target_size,
    const std::vector<std::size_t>& source_sizes, const MixtureWeights& weights,
    double radius, std::size_t redraws, std::uint64_t seed) {
  if (redraws == 0)
    throw ValidationError("uniform_entropy_estimate: redraws must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < redraws; ++r) {
    GhostedBundle bundle =
        draw_ghosted_bundle(target_spec, source_specs, target_size,
                            source_sizes, SplitRng::derive(seed, r));
    std::vector<PointTag> tags;
    const auto points = flatten(bundle, &tags);
    const auto matrix = evaluate_class(klass, points, &tags);
    const auto layout = GhostLayout::of(bundle);
    const auto cover = covering_number_greedy(matrix, radius, layout, weights);
    best = std::max(best, std::log(cover.value));
  }
  ComplexityEstimate e;
  e.kind = ComplexityEstimate::Kind::EntropyNumber;
  e.value = best;
  e.radius = radius;
  e.trials = redraws;
  return e;
}

ComplexityEstimate rademacher_empirical(const Eigen::MatrixXd& values,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads) {
  if (trials == 0)
    throw ValidationError("rademacher_empirical: trials must be >= 1");
  if (values.rows() == 0 || values.cols() == 0)
    throw ValidationError("rademacher_empirical: empty value matrix");
  const Eigen::Index n = values.cols();
  std::vector<double> sups(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    SplitRng rng(SplitRng::derive(seed, t));
    Eigen::VectorXd sigma(n);
    for (Eigen::Index j = 0; j < n; ++j) sigma[j] = rng.sign();
    sups[t] = (values * sigma).maxCoeff() / static_cast<double>(n);
  });
  const MeanStd ms = mean_std(sups.data(), trials);
  ComplexityEstimate e;
  e.kind = ComplexityEstimate::Kind::RademacherEmpirical;
  e.value = ms.mean;
  e.trials = trials;
  if (trials > 1) e.std_error = ms.std_error;
  return e;
}

ComplexityEstimate rademacher_expected(const FiniteHypothesisClass& klass,
                                       const DomainSpec& spec, std::size_t n,
                                       std::size_t data_trials,
                                       std::size_t sigma_trials,
                                       std::uint64_t seed, unsigned threads) {
  if (data_trials == 0 || sigma_trials == 0)
    throw ValidationError("rademacher_expected: trial budgets must be >= 1");
  std::vector<double> means(data_trials);
  std::vector<double> ses(data_trials, 0.0);
  parallel_for(data_trials, threads, [&](std::size_t d) {
    const std::uint64_t child = SplitRng::derive(seed, d);
    const auto data = draw_domain(spec, n, SplitRng::derive(child, "data"));
    const auto matrix = evaluate_class(klass, data.samples());
    const auto inner = rademacher_empirical(matrix.values, sigma_trials,
                                            SplitRng::derive(child, "sigma"));
    means[d] = inner.value;
    if (inner.std_error) ses[d] = *inner.std_error;
  });
  const MeanStd ms = mean_std(means.data(), data_trials);
  double se2 = 0.0;
  for (double s : ses) se2 += s * s;
  se2 /= static_cast<double>(data_trials) * static_cast<double>(data_trials);
  if (data_trials > 1) se2 += ms.std_error * ms.std_error;
  ComplexityEstimate e;
  e.kind = ComplexityEstimate::Kind::RademacherExpected;
  e.value = ms.mean;
  e.trials = data_trials * sigma_trials;
  e.std_error = std::sqrt(se2);
  return e;
}

}  // namespace radapt
