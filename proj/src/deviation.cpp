#include "radapt/deviation.hpp"

#include <algorithm>
#include <cmath>

#include "radapt/errors.hpp"
#include "radapt/parallel.hpp"
#include "radapt/stats.hpp"

namespace radapt {

double pooled_statistic(const std::vector<double>& target_values,
                        const std::vector<std::vector<double>>& source_values,
                        const MixtureWeights& weights) {
  if (source_values.size() != weights.num_sources())
    throw ValidationError("pooled_statistic: weight/source count mismatch");
  if (target_values.empty())
    throw ValidationError("pooled_statistic: empty target values");
  SampleSizes sizes;
  sizes.target = target_values.size();
  for (const auto& v : source_values) {
    if (v.empty()) throw ValidationError("pooled_statistic: empty source values");
    sizes.sources.push_back(v.size());
  }
  const double tau = weights.tau();
  double target_sum = 0.0;
  for (double v : target_values) target_sum += v;
  double acc = tau * sizes.source_product() * target_sum;
  for (std::size_t k = 0; k < source_values.size(); ++k) {
    double s = 0.0;
    for (double v : source_values[k]) s += v;
    acc += (1.0 - tau) * static_cast<double>(sizes.target) * weights.w(k) *
           sizes.product_excluding(k) * s;
  }
  return acc;
}

double pooled_statistic_normalized(
    const std::vector<double>& target_values,
    const std::vector<std::vector<double>>& source_values,
    const MixtureWeights& weights) {
  double scale = static_cast<double>(target_values.size());
  for (const auto& v : source_values) scale *= static_cast<double>(v.size());
  return pooled_statistic(target_values, source_values, weights) / scale;
}

double pooled_statistic_expectation(double target_mean,
                                    const std::vector<double>& source_means,
                                    const SampleSizes& sizes,
                                    const MixtureWeights& weights) {
  if (source_means.size() != weights.num_sources())
    throw ValidationError("pooled_statistic_expectation: count mismatch");
  const double tau = weights.tau();
  double acc = tau * sizes.source_product() *
               static_cast<double>(sizes.target) * target_mean;
  for (std::size_t k = 0; k < source_means.size(); ++k)
    acc += (1.0 - tau) * static_cast<double>(sizes.target) * weights.w(k) *
           sizes.product_excluding(k) *
           static_cast<double>(sizes.sources[k]) * source_means[k];
  return acc;
}

double hoeffding_deviation_bound(const SampleSizes& sizes,
                                 const MixtureWeights& weights,
                                 double range_width, double xi) {
  sizes.validate();
  if (!(xi > 0.0))
    throw ValidationError("hoeffding_deviation_bound: xi must be > 0");
  if (!(range_width > 0.0))
    throw ValidationError("hoeffding_deviation_bound: range width must be > 0");
  const double tau = weights.tau();
  const double nt = static_cast<double>(sizes.target);
  const double prod = sizes.source_product();
  double inner = tau * tau * prod;
  for (std::size_t k = 0; k < weights.num_sources(); ++k)
    inner += (1.0 - tau) * (1.0 - tau) * nt * weights.w(k) * weights.w(k) *
             sizes.product_excluding(k);
  const double log_bound = std::log(2.0) - 2.0 * xi * xi /
      (nt * range_width * range_width * prod * inner);
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double bennett_deviation_bound(const SampleSizes& sizes, double range_width,
                               double xi) {
  sizes.validate();
  if (!(xi > 0.0))
    throw ValidationError("bennett_deviation_bound: xi must be > 0");
  if (!(range_width > 0.0))
    throw ValidationError("bennett_deviation_bound: range width must be > 0");
  const double nt = static_cast<double>(sizes.target);
  const double scale = nt * sizes.source_product() * range_width;
  const double log_bound =
      std::log(2.0) + sizes.total() * bennett_gamma(xi / scale);
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

McDiarmidBounds mcdiarmid_bound(const std::vector<std::vector<double>>& c_table,
                                double xi) {
  if (c_table.empty())
    throw ValidationError("mcdiarmid_bound: empty constant table");
  if (!(xi >= 0.0)) throw ValidationError("mcdiarmid_bound: xi must be >= 0");
  double sum_sq = 0.0;
  double first = 0.0;
  bool have_first = false;
  bool all_equal = true;
  std::size_t count = 0;
  for (const auto& domain : c_table) {
    if (domain.empty())
      throw ValidationError("mcdiarmid_bound: empty domain constant list");
    for (double c : domain) {
      if (!(c > 0.0))
        throw ValidationError("mcdiarmid_bound: constants must be > 0");
      if (!have_first) {
        first = c;
        have_first = true;
      } else if (std::abs(c - first) > 1e-12) {
        all_equal = false;
      }
      sum_sq += c * c;
      ++count;
    }
  }
  McDiarmidBounds b;
  const double log_quadratic = -2.0 * xi * xi / sum_sq;
  b.quadratic = log_quadratic >= 0.0 ? 1.0 : std::exp(log_quadratic);
  if (all_equal) {
    const double n = static_cast<double>(count);
    const double log_bennett = n * bennett_gamma(xi / (first * n));
    b.bennett = log_bennett >= 0.0 ? 1.0 : std::exp(log_bennett);
  }
  return b;
}

void TailExperiment::validate() const {
  if (trials < 100)
    throw ValidationError("TailExperiment: needs at least 100 trials");
  if (thresholds.empty())
    throw ValidationError("TailExperiment: empty threshold grid");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0))
      throw ValidationError("TailExperiment: thresholds must be positive");
    if (i > 0 && thresholds[i] < thresholds[i - 1])
      throw ValidationError("TailExperiment: thresholds must be sorted");
  }
  sizes.validate();
  if (sources.size() != sizes.sources.size() ||
      sources.size() != weights.num_sources())
    throw ValidationError("TailExperiment: source count mismatch");
  if (atom_values.size() != sources.size() + 1)
    throw ValidationError("TailExperiment: atom_values needs target + sources");
  if (atom_values[0].size() != target.num_atoms())
    throw ValidationError("TailExperiment: target atom value count mismatch");
  for (std::size_t k = 0; k < sources.size(); ++k)
    if (atom_values[k + 1].size() != sources[k].num_atoms())
      throw ValidationError("TailExperiment: source atom value count mismatch");
  for (const auto& dom : atom_values)
    for (double v : dom)
      if (!(v >= range_lo - 1e-12 && v <= range_hi + 1e-12))
        throw ValidationError("TailExperiment: atom value outside [a, b]");
  // The pooled statistic carries N_T * prod N_k scale factors; exact
  // expectations stay representable only on small instances.
  if (sizes.sources.size() > 3 || sizes.target > 8)
    throw CapacityError("TailExperiment: capped at K <= 3, N_T <= 8");
  for (std::size_t n : sizes.sources)
    if (n > 8) throw CapacityError("TailExperiment: capped at N_k <= 8");
}

namespace {

std::vector<double> cumulative_probabilities(const DiscreteDomainSpec& spec) {
  std::vector<double> cum;
  cum.reserve(spec.num_atoms());
  double acc = 0.0;
  for (const auto& a : spec.atoms()) {
    acc += a.probability;
    cum.push_back(acc);
  }
  cum.back() = 1.0;
  return cum;
}

std::size_t pick_atom(const std::vector<double>& cum, SplitRng& rng) {
  const double u = rng.uniform01();
  for (std::size_t a = 0; a < cum.size(); ++a)
    if (u < cum[a]) return a;
  return cum.size() - 1;
}

double atom_mean(const DiscreteDomainSpec& spec, const std::vector<double>& vals) {
  double m = 0.0;
  for (std::size_t a = 0; a < spec.num_atoms(); ++a)
    m += spec.atoms()[a].probability * vals[a];
  return m;
}

}  // namespace

TailReport mc_tail_estimate(const TailExperiment& experiment,
                            const std::function<double(double)>& bound_fn,
                            unsigned threads) {
  experiment.validate();
  if (experiment.statistic == StatisticKind::SupDeviation)
    throw ValidationError(
        "mc_tail_estimate: the sup-deviation statistic needs a hypothesis "
        "class; use sup_deviation_tail");
  const bool two_sided = experiment.statistic == StatisticKind::PooledSum;
  const auto& sizes = experiment.sizes;
  const std::size_t K = experiment.sources.size();

  std::vector<double> source_means(K);
  for (std::size_t k = 0; k < K; ++k)
    source_means[k] = atom_mean(experiment.sources[k], experiment.atom_values[k + 1]);
  const double expectation = pooled_statistic_expectation(
      atom_mean(experiment.target, experiment.atom_values[0]), source_means,
      sizes, experiment.weights);

  std::vector<std::vector<double>> cums;
  cums.push_back(cumulative_probabilities(experiment.target));
  for (const auto& s : experiment.sources)
    cums.push_back(cumulative_probabilities(s));

  // Per-trial deviations, reduced into counts afterwards; trial t is a pure
  // function of the child seed (seed, t).
  std::vector<double> deviation(experiment.trials);
  parallel_for(experiment.trials, threads, [&](std::size_t t) {
    SplitRng rng(SplitRng::derive(experiment.seed, t));
    std::vector<double> target_vals(sizes.target);
    for (std::size_t n = 0; n < sizes.target; ++n)
      target_vals[n] = experiment.atom_values[0][pick_atom(cums[0], rng)];
    std::vector<std::vector<double>> source_vals(K);
    for (std::size_t k = 0; k < K; ++k) {
      source_vals[k].resize(sizes.sources[k]);
      for (std::size_t n = 0; n < sizes.sources[k]; ++n)
        source_vals[k][n] = experiment.atom_values[k + 1][pick_atom(cums[k + 1], rng)];
    }
    deviation[t] =
        pooled_statistic(target_vals, source_vals, experiment.weights) -
        expectation;
  });

  TailReport report;
  for (double xi : experiment.thresholds) {
    std::size_t exceed = 0;
    for (double d : deviation) {
      const bool hit = two_sided ? std::abs(d) > xi : d >= xi;
      exceed += hit ? 1 : 0;
    }
    TailReportRow row;
    row.xi = xi;
    row.empirical_p = static_cast<double>(exceed) /
                      static_cast<double>(experiment.trials);
    row.wilson99 = wilson_upper(exceed, experiment.trials);
    row.bound = bound_fn(xi);
    row.pass = row.wilson99 <= row.bound || row.empirical_p <= row.bound;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

TailReport sup_deviation_tail(const FiniteHypothesisClass& klass,
                              const DiscreteDomainSpec& target,
                              const std::vector<DiscreteDomainSpec>& sources,
                              const SampleSizes& sizes,
                              const MixtureWeights& weights,
                              const std::vector<double>& thresholds,
                              const std::function<double(double)>& bound_fn,
                              std::size_t trials, std::uint64_t seed,
                              unsigned threads) {
  sizes.validate();
  if (sources.size() != sizes.sources.size() ||
      sources.size() != weights.num_sources())
    throw ValidationError("sup_deviation_tail: source count mismatch");
  if (trials < 100)
    throw ValidationError("sup_deviation_tail: needs at least 100 trials");
  const std::size_t K = sources.size();
  const std::size_t M = klass.size();
  const double tau = weights.tau();

  std::vector<const DiscreteDomainSpec*> domains{&target};
  for (const auto& s : sources) domains.push_back(&s);
  std::vector<std::vector<std::vector<double>>> vals(K + 1);
  for (std::size_t d = 0; d <= K; ++d) {
    vals[d].resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      vals[d][m].resize(domains[d]->num_atoms());
      for (std::size_t a = 0; a < domains[d]->num_atoms(); ++a)
        vals[d][m][a] = klass.member_loss(m, domains[d]->atoms()[a].z);
    }
  }
  std::vector<double> exact_target(M);
  for (std::size_t m = 0; m < M; ++m)
    exact_target[m] = atom_mean(target, vals[0][m]);

  std::vector<std::vector<double>> cums;
  for (std::size_t d = 0; d <= K; ++d)
    cums.push_back(cumulative_probabilities(*domains[d]));

  std::vector<double> sup_stat(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    SplitRng rng(SplitRng::derive(seed, t));
    std::vector<std::vector<double>> emp(K + 1);
    for (std::size_t d = 0; d <= K; ++d) {
      const std::size_t n = d == 0 ? sizes.target : sizes.sources[d - 1];
      std::vector<std::size_t> count(domains[d]->num_atoms(), 0);
      for (std::size_t i = 0; i < n; ++i) ++count[pick_atom(cums[d], rng)];
      emp[d].resize(M);
      for (std::size_t m = 0; m < M; ++m) {
        double e = 0.0;
        for (std::size_t a = 0; a < count.size(); ++a)
          e += static_cast<double>(count[a]) * vals[d][m][a];
        emp[d][m] = e / static_cast<double>(n);
      }
    }
    double sup = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      double combined = tau * emp[0][m];
      for (std::size_t k = 0; k < K; ++k)
        combined += (1.0 - tau) * weights.w(k) * emp[k + 1][m];
      sup = std::max(sup, std::abs(exact_target[m] - combined));
    }
    sup_stat[t] = sup;
  });

  TailReport report;
  for (double xi : thresholds) {
    std::size_t exceed = 0;
    for (double s : sup_stat) exceed += s > xi ? 1 : 0;
    TailReportRow row;
    row.xi = xi;
    row.empirical_p = static_cast<double>(exceed) / static_cast<double>(trials);
    row.wilson99 = wilson_upper(exceed, trials);
    row.bound = bound_fn(xi);
    row.pass = row.wilson99 <= row.bound || row.empirical_p <= row.bound;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

TailReport symmetrization_check(const FiniteHypothesisClass& klass,
                                const DiscreteDomainSpec& target,
                                const std::vector<DiscreteDomainSpec>& sources,
                                const SampleSizes& sizes,
                                const MixtureWeights& weights,
                                const std::vector<double>& thresholds,
                                std::size_t trials, std::uint64_t seed,
                                unsigned threads) {
  sizes.validate();
  if (sources.size() != sizes.sources.size() ||
      sources.size() != weights.num_sources())
    throw ValidationError("symmetrization_check: source count mismatch");
  if (trials < 100)
    throw ValidationError("symmetrization_check: needs at least 100 trials");
  const std::size_t K = sources.size();
  const std::size_t M = klass.size();
  const double tau = weights.tau();
  const double ba = klass.loss().range_width();
  if (!std::isfinite(ba))
    throw ValidationError("symmetrization_check: needs a clamped loss range");

  // Per-member values on every atom of every domain (target slot 0).
  std::vector<std::vector<std::vector<double>>> vals(K + 1);
  std::vector<const DiscreteDomainSpec*> domains{&target};
  for (const auto& s : sources) domains.push_back(&s);
  for (std::size_t d = 0; d <= K; ++d) {
    vals[d].resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      vals[d][m].resize(domains[d]->num_atoms());
      for (std::size_t a = 0; a < domains[d]->num_atoms(); ++a)
        vals[d][m][a] = klass.member_loss(m, domains[d]->atoms()[a].z);
    }
  }

  // Exact expectations per member per domain.
  std::vector<std::vector<double>> exact(K + 1, std::vector<double>(M));
  for (std::size_t d = 0; d <= K; ++d)
    for (std::size_t m = 0; m < M; ++m)
      exact[d][m] = atom_mean(*domains[d], vals[d][m]);

  // Weighted divergence between each source and the target, exact.
  double divergence = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double dk = 0.0;
    for (std::size_t m = 0; m < M; ++m)
      dk = std::max(dk, std::abs(exact[k + 1][m] - exact[0][m]));
    divergence += weights.w(k) * dk;
  }
  const double disc_term = (1.0 - tau) * divergence;

  std::vector<std::vector<double>> cums;
  for (std::size_t d = 0; d <= K; ++d)
    cums.push_back(cumulative_probabilities(*domains[d]));

  std::vector<double> lhs_stat(trials), rhs_stat(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    SplitRng rng(SplitRng::derive(seed, t));
    // Empirical means per member for the original and ghost draws. Atom
    // counts are drawn once per domain and shared across members.
    std::vector<std::vector<double>> emp(K + 1), ghost(K + 1);
    for (std::size_t d = 0; d <= K; ++d) {
      const std::size_t n = d == 0 ? sizes.target : sizes.sources[d - 1];
      std::vector<std::size_t> count(domains[d]->num_atoms(), 0),
          gcount(domains[d]->num_atoms(), 0);
      for (std::size_t i = 0; i < n; ++i) ++count[pick_atom(cums[d], rng)];
      for (std::size_t i = 0; i < n; ++i) ++gcount[pick_atom(cums[d], rng)];
      emp[d].resize(M);
      ghost[d].resize(M);
      for (std::size_t m = 0; m < M; ++m) {
        double e = 0.0, g = 0.0;
        for (std::size_t a = 0; a < count.size(); ++a) {
          e += static_cast<double>(count[a]) * vals[d][m][a];
          g += static_cast<double>(gcount[a]) * vals[d][m][a];
        }
        emp[d][m] = e / static_cast<double>(n);
        ghost[d][m] = g / static_cast<double>(n);
      }
    }
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      double combined = tau * emp[0][m];
      double combined_ghost = tau * ghost[0][m];
      for (std::size_t k = 0; k < K; ++k) {
        combined += (1.0 - tau) * weights.w(k) * emp[k + 1][m];
        combined_ghost += (1.0 - tau) * weights.w(k) * ghost[k + 1][m];
      }
      lhs = std::max(lhs, std::abs(exact[0][m] - combined));
      rhs = std::max(rhs, std::abs(combined_ghost - combined));
    }
    lhs_stat[t] = lhs;
    rhs_stat[t] = rhs;
  });

  // Variance factor of the stated size condition.
  double vfac = tau * tau / static_cast<double>(sizes.target);
  for (std::size_t k = 0; k < K; ++k)
    vfac += (1.0 - tau) * (1.0 - tau) * weights.w(k) * weights.w(k) /
            static_cast<double>(sizes.sources[k]);

  TailReport report;
  for (double xi : thresholds) {
    TailReportRow row;
    row.xi = xi;
    const double xi_prime = xi - disc_term;
    row.condition_ok =
        xi_prime > 0.0 && ba * ba * vfac / (xi_prime * xi_prime) <= 0.125;
    std::size_t lhs_count = 0, rhs_count = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      lhs_count += lhs_stat[t] > xi ? 1 : 0;
      rhs_count += rhs_stat[t] > xi_prime / 2.0 ? 1 : 0;
    }
    row.empirical_p = static_cast<double>(lhs_count) / static_cast<double>(trials);
    row.wilson99 = wilson_upper(lhs_count, trials);
    row.bound = std::min(1.0, 2.0 * wilson_upper(rhs_count, trials));
    if (row.condition_ok) {
      row.pass = wilson_lower(lhs_count, trials) <= row.bound;
      report.all_pass = report.all_pass && row.pass;
    } else {
      row.pass = false;  // not evaluated; condition column flags why
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace radapt
