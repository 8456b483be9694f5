#include "radapt/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "radapt/errors.hpp"

namespace radapt {

double bennett_gamma(double x) {
  if (!(x >= 0.0)) throw ValidationError("bennett_gamma: x must be >= 0");
  return x - (x + 1.0) * std::log1p(x);
}

RateExponent bennett_rate_exponent(double c, double x) {
  if (!(c > 0.0)) throw ValidationError("bennett_rate_exponent: c must be > 0");
  if (!(x > 0.0)) throw ValidationError("bennett_rate_exponent: x must be > 0");
  if (x == 1.0)
    throw ValidationError("bennett_rate_exponent: x = 1 is a singularity");
  RateExponent r;
  r.value = std::log(-bennett_gamma(x) / c) / std::log(x);
  r.outside_stated_range = !(x < 1.0) || !(c > 0.0075 && c < 0.4804);
  return r;
}

double SampleSizes::source_sum() const {
  double s = 0.0;
  for (std::size_t n : sources) s += static_cast<double>(n);
  return s;
}

double SampleSizes::source_product() const {
  double p = 1.0;
  for (std::size_t n : sources) p *= static_cast<double>(n);
  return p;
}

double SampleSizes::product_excluding(std::size_t k) const {
  double p = 1.0;
  for (std::size_t i = 0; i < sources.size(); ++i)
    if (i != k) p *= static_cast<double>(sources[i]);
  return p;
}

void SampleSizes::validate() const {
  if (target == 0) throw ValidationError("SampleSizes: target size must be >= 1");
  if (sources.empty())
    throw ValidationError("SampleSizes: needs at least one source size");
  for (std::size_t n : sources)
    if (n == 0) throw ValidationError("SampleSizes: source sizes must be >= 1");
}

double BoundInput::variance_factor() const {
  const double tau = weights.tau();
  double v = tau * tau / static_cast<double>(sizes.target);
  for (std::size_t k = 0; k < sizes.sources.size(); ++k) {
    const double wk = weights.w(k);
    v += (1.0 - tau) * (1.0 - tau) * wk * wk /
         static_cast<double>(sizes.sources[k]);
  }
  return v;
}

void BoundInput::validate_common() const {
  sizes.validate();
  if (weights.num_sources() != sizes.sources.size())
    throw ValidationError("BoundInput: weight/source count mismatch");
  if (!(range_lo < range_hi))
    throw ValidationError("BoundInput: range requires a < b");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ValidationError("BoundInput: confidence must lie in (0, 1)");
  if (!(divergence >= 0.0))
    throw ValidationError("BoundInput: divergence must be >= 0");
}

bool BoundInput::weights_are_optimal(double tol) const {
  const MixtureWeights opt = optimal_parameters(sizes.target, sizes.sources);
  if (std::abs(weights.tau() - opt.tau()) > tol) return false;
  for (std::size_t k = 0; k < weights.num_sources(); ++k)
    if (std::abs(weights.w(k) - opt.w(k)) > tol) return false;
  return true;
}

namespace {

double require_ln_cover(const BoundInput& input, const char* who) {
  if (!input.ln_cover)
    throw ValidationError(std::string(who) + ": ln_cover is required");
  return *input.ln_cover;
}

// ln_cover - ln(confidence / 8)
double log_term(const BoundInput& input, const char* who) {
  return require_ln_cover(input, who) - std::log(input.confidence / 8.0);
}

void require_optimal_weights(const BoundInput& input, const char* who) {
  if (!input.weights_are_optimal())
    throw ContractError(std::string(who) +
                        ": stated only for w_k = N_k / sum N and "
                        "tau = N_T / (N_T + sum N)");
}

BoundResult make_result(double discrepancy, double stochastic,
                        PreconditionReport preconditions) {
  BoundResult r;
  r.discrepancy_term = discrepancy;
  r.stochastic_term = stochastic;
  r.value = discrepancy + stochastic;
  r.preconditions = std::move(preconditions);
  return r;
}

// Small-deviation condition shared by the Hoeffding bound and the
// symmetrization step: (b-a)^2 * variance_factor / xi'^2 <= 1/8.
void check_small_deviation(const BoundInput& input, double xi_prime,
                           PreconditionReport& pre) {
  const double ba = input.range_width();
  if (!(xi_prime > 0.0)) {
    pre.fail("stochastic term is zero; small-deviation condition undefined");
    return;
  }
  const double lhs = ba * ba * input.variance_factor() / (xi_prime * xi_prime);
  if (lhs > 0.125)
    pre.fail("small-deviation condition violated: " + std::to_string(lhs) +
             " > 1/8");
}

}  // namespace

BoundResult hoeffding_bound(const BoundInput& input) {
  input.validate_common();
  const double L = log_term(input, "hoeffding_bound");
  const double ba = input.range_width();
  const double tau = input.weights.tau();
  const double stoch =
      std::sqrt(std::max(0.0, L) * 32.0 * ba * ba * input.variance_factor());
  PreconditionReport pre;
  if (L < 0.0)
    pre.fail("ln_cover - ln(eps/8) is negative; stochastic term clamped to 0");
  check_small_deviation(input, stoch, pre);
  BoundResult r =
      make_result((1.0 - tau) * input.divergence, stoch, std::move(pre));
  r.cover_radius = input.cover_radius;
  return r;
}

TailProbability bennett_tail(const BoundInput& input, double xi) {
  input.validate_common();
  require_optimal_weights(input, "bennett_tail");
  const double ln_cover = require_ln_cover(input, "bennett_tail");
  const double tau = input.weights.tau();
  const double disc = (1.0 - tau) * input.divergence;
  if (!(xi > disc))
    throw ValidationError("bennett_tail: xi must exceed the discrepancy term");
  const double xi_prime = xi - disc;
  const double ba = input.range_width();
  TailProbability t;
  const double total = input.sizes.total();
  if (total < ba * ba / (8.0 * xi_prime * xi_prime))
    t.preconditions.fail("sample-size condition violated: total < (b-a)^2/(8 xi'^2)");
  t.log_raw = std::log(8.0) + ln_cover + total * bennett_gamma(xi_prime / ba);
  t.probability = t.log_raw >= 0.0 ? 1.0 : std::exp(t.log_raw);
  return t;
}

BoundResult bernstein_bound(const BoundInput& input) {
  input.validate_common();
  require_optimal_weights(input, "bernstein_bound");
  const double L = std::max(0.0, log_term(input, "bernstein_bound"));
  const double ba = input.range_width();
  const double total = input.sizes.total();
  const double tau = input.weights.tau();
  const double stoch =
      4.0 * ba * L / (3.0 * total) + ba * std::sqrt(2.0 * L) / std::sqrt(total);
  BoundResult r = make_result((1.0 - tau) * input.divergence, stoch, {});
  r.cover_radius = input.cover_radius;
  return r;
}

BoundResult alt_bennett_bound(const BoundInput& input) {
  input.validate_common();
  require_optimal_weights(input, "alt_bennett_bound");
  if (!input.c1 || !input.eta_x)
    throw ValidationError(
        "alt_bennett_bound: eta provenance (c1, eta_x) is required");
  PreconditionReport pre;
  const RateExponent derived = bennett_rate_exponent(*input.c1, *input.eta_x);
  double eta = derived.value;
  if (input.eta) {
    if (*input.eta + 1e-12 < derived.value)
      throw ValidationError("alt_bennett_bound: supplied eta is below the "
                            "derived exponent");
    eta = *input.eta;
  }
  if (!(eta > 0.0) || eta > 2.0)
    throw ValidationError("alt_bennett_bound: eta out of range (0, 2]");
  if (eta == 2.0) pre.fail("eta = 2 is the comparison boundary, not certified");
  if (!(*input.eta_x <= 0.125))
    pre.fail("x outside (0, 1/8], the stated range of this form");
  if (derived.outside_stated_range)
    pre.fail("(c1, x) outside the stated constant range");
  const double L = std::max(0.0, log_term(input, "alt_bennett_bound"));
  const double total = input.sizes.total();
  const double ba = input.range_width();
  const double stoch = ba * std::pow(L / total, 1.0 / eta);
  BoundResult r = make_result((1.0 - input.weights.tau()) * input.divergence,
                              stoch, std::move(pre));
  // Confidence implied by the tail this form is derived from.
  r.implied_confidence = std::exp(std::log(8.0) + *input.ln_cover +
                                  total * bennett_gamma(*input.eta_x));
  r.cover_radius = input.cover_radius;
  return r;
}

BoundResult rademacher_bound_hoeffding(const BoundInput& input) {
  input.validate_common();
  if (!input.rademacher)
    throw ValidationError("rademacher_bound_hoeffding: complexity values missing");
  const auto& rad = *input.rademacher;
  if (rad.source_expected.size() != input.sizes.sources.size())
    throw ValidationError("rademacher_bound_hoeffding: per-source complexity "
                          "count mismatch");
  const double tau = input.weights.tau();
  const double ba = input.range_width();
  const double eps = input.confidence;
  double complexity = 2.0 * tau * rad.target_empirical;
  for (std::size_t k = 0; k < rad.source_expected.size(); ++k)
    complexity += 2.0 * (1.0 - tau) * input.weights.w(k) * rad.source_expected[k];
  const double target_dev =
      2.0 * tau *
      std::sqrt(ba * ba * std::log(4.0 / eps) /
                (2.0 * static_cast<double>(input.sizes.target)));
  const double joint_dev = std::sqrt(ba * ba * std::log(2.0 / eps) / 2.0 *
                                     input.variance_factor());
  return make_result((1.0 - tau) * input.divergence,
                     complexity + target_dev + joint_dev, {});
}

BoundResult rademacher_bound_bennett(const BoundInput& input) {
  input.validate_common();
  if (!input.rademacher)
    throw ValidationError("rademacher_bound_bennett: complexity values missing");
  if (!input.c2)
    throw ValidationError("rademacher_bound_bennett: c2 is required");
  const auto& rad = *input.rademacher;
  if (rad.source_expected.size() != input.sizes.sources.size())
    throw ValidationError("rademacher_bound_bennett: per-source complexity "
                          "count mismatch");
  PreconditionReport pre;
  const double c2 = *input.c2;
  if (!(c2 > 0.0075 && c2 < 0.3863))
    pre.fail("c2 outside the stated interval (0.0075, 0.3863)");
  double eta;
  if (input.eta_x) {
    const RateExponent derived = bennett_rate_exponent(c2, *input.eta_x);
    eta = input.eta ? *input.eta : derived.value;
    if (eta + 1e-12 < derived.value)
      throw ValidationError("rademacher_bound_bennett: supplied eta is below "
                            "the derived exponent");
    if (!(*input.eta_x <= 1.0))
      pre.fail("x outside (0, 1], the stated range of this form");
  } else if (input.eta) {
    eta = *input.eta;
    pre.fail("eta supplied without (c2, x) provenance");
  } else {
    throw ValidationError("rademacher_bound_bennett: eta or (c2, eta_x) required");
  }
  if (!(eta > 0.0) || eta > 2.0)
    throw ValidationError("rademacher_bound_bennett: eta out of range (0, 2]");
  if (eta == 2.0) pre.fail("eta = 2 is the comparison boundary, not certified");
  const double tau = input.weights.tau();
  const double ba = input.range_width();
  const double eps = input.confidence;
  double complexity = 2.0 * tau * rad.target_empirical;
  for (std::size_t k = 0; k < rad.source_expected.size(); ++k)
    complexity += 2.0 * (1.0 - tau) * input.weights.w(k) * rad.source_expected[k];
  const double target_dev =
      2.0 * tau *
      std::pow(std::log(4.0 / eps) /
                   (c2 * static_cast<double>(input.sizes.target)),
               1.0 / eta);
  const double joint_dev = std::pow(
      std::log(2.0 / eps) / c2 * input.variance_factor(), 1.0 / eta);
  return make_result((1.0 - tau) * input.divergence,
                     complexity + ba * (target_dev + joint_dev),
                     std::move(pre));
}

BoundResult optimal_rate_bound(const BoundInput& input) {
  input.validate_common();
  require_optimal_weights(input, "optimal_rate_bound");
  const double L = std::max(0.0, log_term(input, "optimal_rate_bound"));
  const double ba = input.range_width();
  const double total = input.sizes.total();
  const double disc = input.sizes.source_sum() * input.divergence / total;
  const double stoch = std::sqrt(L * 32.0 * ba * ba / total);
  BoundResult r = make_result(disc, stoch, {});
  r.cover_radius = input.cover_radius;
  return r;
}

AsymptoticReport asymptotic_condition(const std::vector<SampleSizes>& growth,
                                      const std::vector<double>& ln_cover,
                                      const MixtureWeights& weights) {
  if (growth.size() != ln_cover.size())
    throw ValidationError("asymptotic_condition: sequence length mismatch");
  if (growth.size() < 2)
    throw ValidationError("asymptotic_condition: need at least 2 steps");
  AsymptoticReport rep;
  const double tau = weights.tau();
  for (std::size_t i = 0; i < growth.size(); ++i) {
    growth[i].validate();
    if (growth[i].sources.size() != weights.num_sources())
      throw ValidationError("asymptotic_condition: weight/source count mismatch");
    double vfac = tau * tau / static_cast<double>(growth[i].target);
    for (std::size_t k = 0; k < weights.num_sources(); ++k)
      vfac += (1.0 - tau) * (1.0 - tau) * weights.w(k) * weights.w(k) /
              static_cast<double>(growth[i].sources[k]);
    rep.ratios.push_back(ln_cover[i] * vfac);
  }
  rep.running_max = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const std::size_t quartile = std::max<std::size_t>(2, rep.ratios.size() / 4);
  const std::size_t start = rep.ratios.size() - quartile;
  rep.bounded_trend = true;
  for (std::size_t i = start + 1; i < rep.ratios.size(); ++i) {
    const double prev = rep.ratios[i - 1];
    const double tol = 1e-9 * (1.0 + std::abs(prev));
    if (rep.ratios[i] > prev + tol) rep.bounded_trend = false;
  }
  return rep;
}

}  // namespace radapt
