#include "radapt/divergence.hpp"

#include <cmath>

#include "doctest.h"
#include "radapt/errors.hpp"
#include "radapt/rng.hpp"

using namespace radapt;

namespace {

MixtureWeights make_weights(double tau, std::vector<double> w) {
  return MixtureWeights(tau, Eigen::Map<const Eigen::VectorXd>(
                                 w.data(), static_cast<Eigen::Index>(w.size())));
}

Eigen::VectorXd point(double v) { return Eigen::VectorXd::Constant(1, v); }

DiscreteDomainSpec atom_at(double x, double y) {
  std::vector<DiscreteDomainSpec::Atom> atoms(1);
  atoms[0].z.x = point(x);
  atoms[0].z.y = y;
  atoms[0].probability = 1.0;
  return DiscreteDomainSpec(atoms);
}

// Tabulated member with prescribed values at the two support points 0 and 1.
Hypothesis table01(double at0, double at1) {
  TabulatedHypothesis t;
  t.points = {point(0.0), point(1.0)};
  t.values = {at0, at1};
  return t;
}

DiscreteDomainSpec random_labeled(SplitRng& rng, int atoms) {
  std::vector<DiscreteDomainSpec::Atom> list(atoms);
  std::vector<double> raw(atoms);
  double total = 0.0;
  for (auto& p : raw) total += (p = rng.uniform01() + 0.1);
  double acc = 0.0;
  for (int a = 0; a < atoms; ++a) {
    list[a].z.x = point(rng.normal(0.0, 1.0));
    list[a].z.y = rng.uniform01();
    list[a].probability = raw[a] / total;
    if (a + 1 < atoms) acc += list[a].probability;
  }
  list[atoms - 1].probability = 1.0 - acc;
  return DiscreteDomainSpec(list);
}

FiniteHypothesisClass random_linear_class(SplitRng& rng, int members,
                                          LossFunction loss) {
  std::vector<Hypothesis> list;
  for (int m = 0; m < members; ++m)
    list.push_back(LinearHypothesis{point(rng.normal(0.0, 1.5)),
                                    rng.normal(0.0, 0.5)});
  return FiniteHypothesisClass(list, loss);
}

}  // namespace

TEST_CASE("ipm vanishes on identical distributions") {
  SplitRng rng(1);
  const auto spec = random_labeled(rng, 3);
  const auto klass = random_linear_class(rng, 4, LossFunction::squared(0.0, 1.0));
  const auto v = ipm(klass, Distribution::discrete(spec), Distribution::discrete(spec));
  CHECK(v.value == 0.0);
  CHECK(v.class_size == 4);
}

TEST_CASE("ipm on a two-member class with known expectations") {
  // Single-atom domains with label 0; the absolute loss of a tabulated
  // member equals its value, so the expectations are the table entries.
  const auto s = atom_at(0.0, 0.0);
  const auto t = atom_at(1.0, 0.0);
  std::vector<Hypothesis> members{table01(0.3, 0.1), table01(0.5, 0.45)};
  FiniteHypothesisClass klass(members, LossFunction::absolute(0.0, 1.0));
  const auto v = ipm(klass, Distribution::discrete(s), Distribution::discrete(t));
  CHECK(v.value == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("ipm equals a brute-force member scan") {
  SplitRng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_labeled(rng, 4);
    const auto t = random_labeled(rng, 3);
    const auto klass =
        random_linear_class(rng, 50, LossFunction::squared(0.0, 1.0));
    const auto v =
        ipm(klass, Distribution::discrete(s), Distribution::discrete(t));
    double brute = 0.0;
    for (std::size_t m = 0; m < klass.size(); ++m) {
      double es = 0.0, et = 0.0;
      for (const auto& a : s.atoms())
        es += a.probability * klass.member_loss(m, a.z);
      for (const auto& a : t.atoms())
        et += a.probability * klass.member_loss(m, a.z);
      brute = std::max(brute, std::abs(es - et));
    }
    CHECK(std::abs(v.value - brute) <= 1e-12);
  }
}

TEST_CASE("ipm is symmetric and satisfies the triangle inequality") {
  SplitRng rng(5);
  const auto klass = random_linear_class(rng, 6, LossFunction::squared(0.0, 1.0));
  const auto a = Distribution::discrete(random_labeled(rng, 3));
  const auto b = Distribution::discrete(random_labeled(rng, 3));
  const auto c = Distribution::discrete(random_labeled(rng, 3));
  CHECK(std::abs(ipm(klass, a, b).value - ipm(klass, b, a).value) <= 1e-15);
  CHECK(ipm(klass, a, c).value <=
        ipm(klass, a, b).value + ipm(klass, b, c).value + 1e-12);
}

TEST_CASE("weighted ipm") {
  SplitRng rng(7);
  const auto klass = random_linear_class(rng, 5, LossFunction::squared(0.0, 1.0));
  const auto t = random_labeled(rng, 3);
  const auto s = random_labeled(rng, 3);

  const auto plain = ipm(klass, Distribution::discrete(s), Distribution::discrete(t));
  const auto weighted = weighted_ipm(klass, {Distribution::discrete(s)},
                                     Distribution::discrete(t),
                                     make_weights(0.0, {1.0}));
  CHECK(weighted.value == doctest::Approx(plain.value).epsilon(1e-15));

  const auto zero = weighted_ipm(
      klass, {Distribution::discrete(t), Distribution::discrete(t)},
      Distribution::discrete(t), make_weights(0.0, {0.5, 0.5}));
  CHECK(zero.value == 0.0);

  // Identical sources: the weighted value reduces to the common per-source
  // ipm, here max(0.2, 0.6) over the two members.
  const auto sa = atom_at(0.0, 0.0);
  const auto ta = atom_at(1.0, 0.0);
  std::vector<Hypothesis> both{table01(0.2, 0.0), table01(0.6, 0.0)};
  FiniteHypothesisClass klass2(both, LossFunction::absolute(0.0, 1.0));
  const auto v = weighted_ipm(
      klass2, {Distribution::discrete(sa), Distribution::discrete(sa)},
      Distribution::discrete(ta), make_weights(0.0, {0.25, 0.75}));
  CHECK(v.value == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("weighted ipm combines distinct per-source values") {
  // Build sources whose member expectations differ so the per-source ipm
  // values are 0.2 and 0.6; the 0.25/0.75 mixture gives 0.5.
  const auto target = atom_at(1.0, 0.0);
  const auto s1 = atom_at(0.0, 0.0);
  std::vector<DiscreteDomainSpec::Atom> a2(1);
  a2[0].z.x = point(2.0);
  a2[0].z.y = 0.0;
  a2[0].probability = 1.0;
  const DiscreteDomainSpec s2(a2);
  TabulatedHypothesis t;
  t.points = {point(0.0), point(1.0), point(2.0)};
  t.values = {0.2, 0.0, 0.6};
  FiniteHypothesisClass klass({Hypothesis(t)}, LossFunction::absolute(0.0, 1.0));
  const auto v = weighted_ipm(
      klass, {Distribution::discrete(s1), Distribution::discrete(s2)},
      Distribution::discrete(target), make_weights(0.0, {0.25, 0.75}));
  CHECK(v.value == doctest::Approx(0.25 * 0.2 + 0.75 * 0.6).epsilon(1e-12));
}

TEST_CASE("discrepancy distance basics") {
  SplitRng rng(9);
  const auto spec = random_labeled(rng, 4);
  const auto klass = random_linear_class(rng, 4, LossFunction::absolute(0.0, 2.0));
  CHECK(discrepancy_distance(klass, Distribution::discrete(spec),
                             Distribution::discrete(spec))
            .value == 0.0);
  // Diagonal pairs vanish under the absolute loss.
  for (std::size_t i = 0; i < klass.size(); ++i)
    CHECK(klass.pair_loss(i, i, point(rng.normal(0.0, 1.0))) == 0.0);
}

TEST_CASE("discrepancy distance equals the exhaustive pair scan") {
  SplitRng rng(11);
  const auto s = random_labeled(rng, 3);
  const auto t = random_labeled(rng, 4);
  const auto klass = random_linear_class(rng, 10, LossFunction::absolute(0.0, 2.0));
  const auto v = discrepancy_distance(klass, Distribution::discrete(s),
                                      Distribution::discrete(t));
  double brute = 0.0;
  for (std::size_t i = 0; i < klass.size(); ++i) {
    for (std::size_t j = 0; j < klass.size(); ++j) {
      double es = 0.0, et = 0.0;
      for (const auto& a : s.atoms())
        es += a.probability * klass.pair_loss(i, j, a.z.x);
      for (const auto& a : t.atoms())
        et += a.probability * klass.pair_loss(i, j, a.z.x);
      brute = std::max(brute, std::abs(es - et));
    }
  }
  CHECK(std::abs(v.value - brute) <= 1e-12);
}

TEST_CASE("label metric vanishes when the labeling functions coincide") {
  SplitRng rng(13);
  const auto t = random_labeled(rng, 3);
  const auto klass = random_linear_class(rng, 5, LossFunction::squared(0.0, 1.0));
  const Hypothesis g{LinearHypothesis{point(0.7), 0.1}};
  CHECK(q_label_metric(klass, Distribution::discrete(t), g, g).value == 0.0);
}

TEST_CASE("label metric triangle property") {
  SplitRng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_labeled(rng, 3);
    const auto klass =
        random_linear_class(rng, 4, LossFunction::absolute(0.0, 2.0));
    const Hypothesis ga{LinearHypothesis{point(rng.normal(0.0, 1.0)), 0.0}};
    const Hypothesis gb{LinearHypothesis{point(rng.normal(0.0, 1.0)), 0.0}};
    const Hypothesis gc{LinearHypothesis{point(rng.normal(0.0, 1.0)), 0.0}};
    const auto dist = Distribution::discrete(t);
    const double ac = q_label_metric(klass, dist, ga, gc).value;
    const double ab = q_label_metric(klass, dist, ga, gb).value;
    const double bc = q_label_metric(klass, dist, gb, gc).value;
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("label metric matches hand enumeration on a two-atom target") {
  std::vector<DiscreteDomainSpec::Atom> atoms(2);
  atoms[0].z.x = point(0.0);
  atoms[0].probability = 0.4;
  atoms[1].z.x = point(1.0);
  atoms[1].probability = 0.6;
  DiscreteDomainSpec target(atoms);
  std::vector<Hypothesis> members{table01(0.2, 0.8), table01(0.9, 0.1)};
  FiniteHypothesisClass klass(members, LossFunction::absolute(0.0, 1.0));
  const Hypothesis gs = table01(0.0, 0.0);
  const Hypothesis gt = table01(1.0, 1.0);
  // member 1: |E loss(g1, gt) - E loss(g1, gs)|
  //   = |(0.4*0.8 + 0.6*0.2) - (0.4*0.2 + 0.6*0.8)| = |0.44 - 0.56| = 0.12
  // member 2: |(0.4*0.1 + 0.6*0.9) - (0.4*0.9 + 0.6*0.1)| = |0.58 - 0.42| = 0.16
  const auto v =
      q_label_metric(klass, Distribution::discrete(target), gs, gt);
  CHECK(v.value == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("h-delta-h matches discrepancy for the absolute loss") {
  SplitRng rng(17);
  const auto s = random_labeled(rng, 3);
  const auto t = random_labeled(rng, 3);
  const auto klass = random_linear_class(rng, 6, LossFunction::absolute(0.0, 2.0));
  const auto hd = h_delta_h(klass, Distribution::discrete(s), Distribution::discrete(t));
  const auto disc = discrepancy_distance(klass, Distribution::discrete(s),
                                         Distribution::discrete(t));
  CHECK(hd.value == disc.value);
  CHECK_FALSE(hd.lambda.has_value());

  const auto squared = random_linear_class(rng, 3, LossFunction::squared(0.0, 1.0));
  CHECK_THROWS_AS(h_delta_h(squared, Distribution::discrete(s),
                            Distribution::discrete(t)),
                  ValidationError);
}

TEST_CASE("lambda is zero when both labeling functions sit in the class") {
  SplitRng rng(19);
  const auto s = random_labeled(rng, 3);
  const auto t = random_labeled(rng, 3);
  const Hypothesis shared{LinearHypothesis{point(0.5), 0.0}};
  std::vector<Hypothesis> members{shared,
                                  LinearHypothesis{point(-0.5), 0.2}};
  FiniteHypothesisClass klass(members, LossFunction::absolute(0.0, 2.0));
  const auto v = h_delta_h(klass, Distribution::discrete(s),
                           Distribution::discrete(t), &shared, &shared);
  REQUIRE(v.lambda.has_value());
  CHECK(*v.lambda == 0.0);
}

TEST_CASE("lambda equals the brute-force scan") {
  SplitRng rng(21);
  const auto s = random_labeled(rng, 3);
  const auto t = random_labeled(rng, 3);
  const auto klass = random_linear_class(rng, 3, LossFunction::absolute(0.0, 2.0));
  const Hypothesis gs{LinearHypothesis{point(0.4), 0.0}};
  const Hypothesis gt{LinearHypothesis{point(-0.3), 0.1}};
  const auto v = h_delta_h(klass, Distribution::discrete(s),
                           Distribution::discrete(t), &gs, &gt);
  double brute = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < klass.size(); ++m) {
    double vs = 0.0, vt = 0.0;
    for (const auto& a : s.atoms())
      vs += a.probability *
            klass.loss()(predict(klass.member(m), a.z.x), predict(gs, a.z.x));
    for (const auto& a : t.atoms())
      vt += a.probability *
            klass.loss()(predict(klass.member(m), a.z.x), predict(gt, a.z.x));
    brute = std::min(brute, vs + vt);
  }
  REQUIRE(v.lambda.has_value());
  CHECK(std::abs(*v.lambda - brute) <= 1e-12);
}

TEST_CASE("ipm is bounded by discrepancy plus label metric") {
  SplitRng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    // Labeling functions generate the labels of the joint distributions.
    const LinearHypothesis gs{point(rng.normal(0.0, 1.0)), rng.normal(0.0, 0.3)};
    const LinearHypothesis gt{point(rng.normal(0.0, 1.0)), rng.normal(0.0, 0.3)};
    auto labeled_by = [&](const DiscreteDomainSpec& inputs,
                          const LinearHypothesis& g) {
      std::vector<DiscreteDomainSpec::Atom> atoms = inputs.atoms();
      for (auto& a : atoms) a.z.y = predict(g, a.z.x);
      return DiscreteDomainSpec(atoms);
    };
    const auto s_inputs = random_labeled(rng, 3);
    const auto t_inputs = random_labeled(rng, 3);
    const auto s_joint = labeled_by(s_inputs, gs);
    const auto t_joint = labeled_by(t_inputs, gt);
    // The pair scan must be able to reach the source labeling function, so
    // the class contains it alongside random members.
    std::vector<Hypothesis> members{Hypothesis(gs), Hypothesis(gt)};
    for (int m = 0; m < 3; ++m)
      members.push_back(LinearHypothesis{point(rng.normal(0.0, 1.5)),
                                         rng.normal(0.0, 0.5)});
    const FiniteHypothesisClass klass(members, LossFunction::absolute(0.0, 3.0));

    const double d = ipm(klass, Distribution::discrete(s_joint),
                         Distribution::discrete(t_joint))
                         .value;
    const double disc = discrepancy_distance(klass, Distribution::discrete(s_joint),
                                             Distribution::discrete(t_joint))
                            .value;
    const double q = q_label_metric(klass, Distribution::discrete(t_joint),
                                    Hypothesis(gs), Hypothesis(gt))
                         .value;
    CHECK(d <= disc + q + 1e-10);
  }
}
