#include "radapt/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "radapt/errors.hpp"

namespace radapt {

double predict(const LinearHypothesis& h, const Eigen::VectorXd& x) {
  if (h.weights.size() != x.size())
    throw ValidationError("predict: weight/input dimension mismatch");
  return h.weights.dot(x) + h.bias;
}

static double predict_tabulated(const TabulatedHypothesis& h,
                                const Eigen::VectorXd& x) {
  for (std::size_t i = 0; i < h.points.size(); ++i) {
    if (h.points[i].size() == x.size() && h.points[i] == x) return h.values[i];
  }
  throw ValidationError("predict: point not in tabulated hypothesis support");
}

double predict(const Hypothesis& h, const Eigen::VectorXd& x) {
  if (std::holds_alternative<LinearHypothesis>(h))
    return predict(std::get<LinearHypothesis>(h), x);
  return predict_tabulated(std::get<TabulatedHypothesis>(h), x);
}

LossFunction::LossFunction(Kind kind, double a, double b)
    : kind_(kind), lo_(a), hi_(b) {
  if (!(a < b)) throw ValidationError("LossFunction: requires a < b");
}

bool LossFunction::clamped() const {
  return std::isfinite(lo_) || std::isfinite(hi_);
}

double LossFunction::operator()(double prediction, double label) const {
  if (!std::isfinite(prediction) || !std::isfinite(label))
    throw ValidationError("LossFunction: non-finite input");
  const double d = prediction - label;
  const double raw = kind_ == Kind::Squared ? d * d : std::abs(d);
  return std::clamp(raw, lo_, hi_);
}

namespace {

bool same_hypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<LinearHypothesis>(a)) {
    const auto& la = std::get<LinearHypothesis>(a);
    const auto& lb = std::get<LinearHypothesis>(b);
    return la.bias == lb.bias && la.weights.size() == lb.weights.size() &&
           la.weights == lb.weights;
  }
  const auto& ta = std::get<TabulatedHypothesis>(a);
  const auto& tb = std::get<TabulatedHypothesis>(b);
  if (ta.points.size() != tb.points.size()) return false;
  for (std::size_t i = 0; i < ta.points.size(); ++i) {
    if (ta.points[i].size() != tb.points[i].size() ||
        ta.points[i] != tb.points[i] || ta.values[i] != tb.values[i])
      return false;
  }
  return true;
}

}  // namespace

FiniteHypothesisClass::FiniteHypothesisClass(std::vector<Hypothesis> members,
                                             LossFunction loss)
    : members_(std::move(members)), loss_(loss) {
  if (members_.empty())
    throw ValidationError("FiniteHypothesisClass: no members");
  for (const auto& m : members_) {
    if (std::holds_alternative<TabulatedHypothesis>(m)) {
      const auto& t = std::get<TabulatedHypothesis>(m);
      if (t.points.size() != t.values.size() || t.points.empty())
        throw ValidationError("FiniteHypothesisClass: malformed table");
    } else {
      if (!std::get<LinearHypothesis>(m).weights.allFinite() ||
          !std::isfinite(std::get<LinearHypothesis>(m).bias))
        throw ValidationError("FiniteHypothesisClass: non-finite hypothesis");
    }
  }
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = i + 1; j < members_.size(); ++j)
      if (same_hypothesis(members_[i], members_[j]))
        throw ValidationError(
            "FiniteHypothesisClass: duplicate members at indices " +
            std::to_string(i) + " and " + std::to_string(j));
}

double FiniteHypothesisClass::member_loss(std::size_t i,
                                          const LabeledSample& z) const {
  return loss_(predict(members_[i], z.x), z.y);
}

double FiniteHypothesisClass::pair_loss(std::size_t i, std::size_t j,
                                        const Eigen::VectorXd& x) const {
  return loss_(predict(members_[i], x), predict(members_[j], x));
}

FunctionValueMatrix evaluate_class(const FiniteHypothesisClass& klass,
                                   const std::vector<LabeledSample>& points,
                                   const std::vector<PointTag>* tags) {
  if (points.empty()) throw ValidationError("evaluate_class: no points");
  if (tags && tags->size() != points.size())
    throw ValidationError("evaluate_class: tag/point count mismatch");
  FunctionValueMatrix m;
  m.lo = klass.loss().lo();
  m.hi = klass.loss().hi();
  m.values.resize(static_cast<Eigen::Index>(klass.size()),
                  static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < klass.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          klass.member_loss(i, points[j]);
  m.point_tags = tags ? *tags : std::vector<PointTag>(points.size());
  return m;
}

}  // namespace radapt
