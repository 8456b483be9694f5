#include "radapt/divergence.hpp"

#include <cmath>

#include "radapt/errors.hpp"

namespace radapt {

double Distribution::expect(
    const std::function<double(const LabeledSample&)>& f) const {
  if (std::holds_alternative<DiscreteDomainSpec>(rep_))
    return enumerate_expectation(std::get<DiscreteDomainSpec>(rep_), f);
  const auto& data = std::get<DomainDataset>(rep_);
  double sum = 0.0;
  for (const auto& z : data.samples()) {
    const double v = f(z);
    if (!std::isfinite(v))
      throw ValidationError("Distribution::expect: non-finite function value");
    sum += v;
  }
  return sum / static_cast<double>(data.size());
}

DivergenceValue ipm(const FiniteHypothesisClass& klass, const Distribution& s,
                    const Distribution& t) {
  DivergenceValue r{DivergenceValue::Kind::Ipm, 0.0, klass.size(), {}};
  for (std::size_t i = 0; i < klass.size(); ++i) {
    auto f = [&](const LabeledSample& z) { return klass.member_loss(i, z); };
    r.value = std::max(r.value, std::abs(s.expect(f) - t.expect(f)));
  }
  return r;
}

DivergenceValue weighted_ipm(const FiniteHypothesisClass& klass,
                             const std::vector<Distribution>& sources,
                             const Distribution& target,
                             const MixtureWeights& weights) {
  if (sources.size() != weights.num_sources())
    throw ValidationError("weighted_ipm: weight/source count mismatch");
  DivergenceValue r{DivergenceValue::Kind::WeightedIpm, 0.0, klass.size(), {}};
  for (std::size_t k = 0; k < sources.size(); ++k)
    r.value += weights.w(k) * ipm(klass, sources[k], target).value;
  return r;
}

DivergenceValue discrepancy_distance(const FiniteHypothesisClass& klass,
                                     const Distribution& s,
                                     const Distribution& t) {
  DivergenceValue r{DivergenceValue::Kind::Discrepancy, 0.0, klass.size(), {}};
  for (std::size_t i = 0; i < klass.size(); ++i) {
    for (std::size_t j = 0; j < klass.size(); ++j) {
      auto f = [&](const LabeledSample& z) { return klass.pair_loss(i, j, z.x); };
      r.value = std::max(r.value, std::abs(s.expect(f) - t.expect(f)));
    }
  }
  return r;
}

DivergenceValue q_label_metric(const FiniteHypothesisClass& klass,
                               const Distribution& target,
                               const Hypothesis& labeling_s,
                               const Hypothesis& labeling_t) {
  const auto& loss = klass.loss();
  DivergenceValue r{DivergenceValue::Kind::QMetric, 0.0, klass.size(), {}};
  for (std::size_t i = 0; i < klass.size(); ++i) {
    auto f_t = [&](const LabeledSample& z) {
      return loss(predict(klass.member(i), z.x), predict(labeling_t, z.x));
    };
    auto f_s = [&](const LabeledSample& z) {
      return loss(predict(klass.member(i), z.x), predict(labeling_s, z.x));
    };
    r.value = std::max(r.value, std::abs(target.expect(f_t) - target.expect(f_s)));
  }
  return r;
}

DivergenceValue h_delta_h(const FiniteHypothesisClass& klass,
                          const Distribution& s, const Distribution& t,
                          const Hypothesis* labeling_s,
                          const Hypothesis* labeling_t) {
  if (klass.loss().kind() != LossFunction::Kind::Absolute)
    throw ValidationError("h_delta_h: requires the absolute-value loss");
  DivergenceValue r = discrepancy_distance(klass, s, t);
  r.kind = DivergenceValue::Kind::HDeltaH;
  if (labeling_s && labeling_t) {
    const auto& loss = klass.loss();
    double lambda = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < klass.size(); ++i) {
      auto vs = s.expect([&](const LabeledSample& z) {
        return loss(predict(klass.member(i), z.x), predict(*labeling_s, z.x));
      });
      auto vt = t.expect([&](const LabeledSample& z) {
        return loss(predict(klass.member(i), z.x), predict(*labeling_t, z.x));
      });
      lambda = std::min(lambda, vs + vt);
    }
    r.lambda = lambda;
  }
  return r;
}

}  // namespace radapt
