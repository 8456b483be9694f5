#pragma once

#include <Eigen/Dense>
#include <limits>
#include <variant>
#include <vector>

#include "radapt/domain.hpp"

namespace radapt {

// Linear predictor g(x) = <weights, x> + bias.
struct LinearHypothesis {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

// Predictor given by an explicit value table over a finite support. Used for
// labeling functions on discrete domains; lookup is by exact coordinate match.
struct TabulatedHypothesis {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> values;
};

using Hypothesis = std::variant<LinearHypothesis, TabulatedHypothesis>;

double predict(const LinearHypothesis& h, const Eigen::VectorXd& x);
double predict(const Hypothesis& h, const Eigen::VectorXd& x);

// Loss with a clamp range [a, b] applied after evaluation. An infinite range
// (squared_unclamped) disables clamping; the convergence experiment uses that
// mode, the inequality checks use a finite range.
class LossFunction {
 public:
  enum class Kind { Squared, Absolute };

  static LossFunction squared(double a, double b) { return {Kind::Squared, a, b}; }
  static LossFunction absolute(double a, double b) { return {Kind::Absolute, a, b}; }
  static LossFunction squared_unclamped() {
    return {Kind::Squared, -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool clamped() const;
  double range_width() const { return hi_ - lo_; }

  // clamp(raw(prediction, label), a, b)
  double operator()(double prediction, double label) const;

 private:
  LossFunction(Kind kind, double a, double b);
  Kind kind_;
  double lo_;
  double hi_;
};

// Labels for the columns of a FunctionValueMatrix: which domain the point
// came from and whether it sits in the ghost copy.
struct PointTag {
  DomainId domain = DomainId::target();
  bool ghost = false;
};

// Evaluations of every class member on every point, clamped into the loss
// range. Rows index class members, columns index points.
struct FunctionValueMatrix {
  Eigen::MatrixXd values;
  std::vector<PointTag> point_tags;
  double lo = 0.0;
  double hi = 1.0;

  std::size_t num_functions() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t num_points() const { return static_cast<std::size_t>(values.cols()); }
};

// Explicit finite set of hypotheses together with a loss, inducing the
// function class { z -> loss(g(x), y) : g in members }.
class FiniteHypothesisClass {
 public:
  FiniteHypothesisClass(std::vector<Hypothesis> members, LossFunction loss);

  std::size_t size() const { return members_.size(); }
  const std::vector<Hypothesis>& members() const { return members_; }
  const Hypothesis& member(std::size_t i) const { return members_[i]; }
  const LossFunction& loss() const { return loss_; }

  // Clamped loss of member i on sample z.
  double member_loss(std::size_t i, const LabeledSample& z) const;
  // Clamped loss between two members' predictions at x (label-free scan).
  double pair_loss(std::size_t i, std::size_t j, const Eigen::VectorXd& x) const;

 private:
  std::vector<Hypothesis> members_;
  LossFunction loss_;
};

// Entry (i, j) = clamped loss of member i on point j.
FunctionValueMatrix evaluate_class(const FiniteHypothesisClass& klass,
                                   const std::vector<LabeledSample>& points,
                                   const std::vector<PointTag>* tags = nullptr);

}  // namespace radapt
