#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "radapt/domain.hpp"
#include "radapt/hypothesis.hpp"
#include "radapt/risk.hpp"

namespace radapt {

// Distribution over labeled samples, accepted in two forms: empirical
// (uniform over a sample list) or discrete (explicit atom table).
class Distribution {
 public:
  static Distribution empirical(DomainDataset data) {
    return Distribution(std::move(data));
  }
  static Distribution discrete(DiscreteDomainSpec spec) {
    return Distribution(std::move(spec));
  }

  double expect(const std::function<double(const LabeledSample&)>& f) const;

 private:
  explicit Distribution(DomainDataset d) : rep_(std::move(d)) {}
  explicit Distribution(DiscreteDomainSpec s) : rep_(std::move(s)) {}
  std::variant<DomainDataset, DiscreteDomainSpec> rep_;
};

struct DivergenceValue {
  enum class Kind { Ipm, WeightedIpm, Discrepancy, QMetric, HDeltaH };
  Kind kind = Kind::Ipm;
  double value = 0.0;
  std::size_t class_size = 0;
  std::optional<double> lambda;  // HDeltaH only
};

// Integral probability metric over the induced loss class:
// max over members of |E_S f - E_T f|.
DivergenceValue ipm(const FiniteHypothesisClass& klass, const Distribution& s,
                    const Distribution& t);

// sum_k w_k * ipm(klass, source_k, target).
DivergenceValue weighted_ipm(const FiniteHypothesisClass& klass,
                             const std::vector<Distribution>& sources,
                             const Distribution& target,
                             const MixtureWeights& weights);

// Discrepancy distance: max over ordered member pairs (g1, g2) of
// |E_S loss(g1(x), g2(x)) - E_T loss(g1(x), g2(x))|.
DivergenceValue discrepancy_distance(const FiniteHypothesisClass& klass,
                                     const Distribution& s,
                                     const Distribution& t);

// Labeling-function metric: max over members g1 of
// |E_T loss(g1(x), g_t(x)) - E_T loss(g1(x), g_s(x))|.
DivergenceValue q_label_metric(const FiniteHypothesisClass& klass,
                               const Distribution& target,
                               const Hypothesis& labeling_s,
                               const Hypothesis& labeling_t);

// Discrepancy scan restricted to absolute loss; optionally also computes
// lambda = min over members of the summed expected losses against the two
// labeling functions.
DivergenceValue h_delta_h(const FiniteHypothesisClass& klass,
                          const Distribution& s, const Distribution& t,
                          const Hypothesis* labeling_s = nullptr,
                          const Hypothesis* labeling_t = nullptr);

}  // namespace radapt
