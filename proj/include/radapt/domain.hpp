#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "radapt/rng.hpp"

namespace radapt {

// One labeled example z = (x, y).
struct LabeledSample {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Identifies which domain a dataset or sample column belongs to.
struct DomainId {
  enum class Kind { Source, Target };
  Kind kind = Kind::Target;
  int index = 0;  // 1-based source index; 0 for the target

  static DomainId source(int k) { return {Kind::Source, k}; }
  static DomainId target() { return {Kind::Target, 0}; }
  std::string label() const;
  bool operator==(const DomainId&) const = default;
};

// Immutable bundle of labeled samples from one domain.
class DomainDataset {
 public:
  DomainDataset(DomainId id, std::vector<LabeledSample> samples);

  const DomainId& id() const { return id_; }
  std::size_t size() const { return samples_.size(); }
  Eigen::Index dim() const { return samples_.front().x.size(); }
  const std::vector<LabeledSample>& samples() const { return samples_; }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

 private:
  DomainId id_;
  std::vector<LabeledSample> samples_;
};

// K source datasets plus one target dataset, all sharing the input dimension.
class MultiSourceBundle {
 public:
  MultiSourceBundle(std::vector<DomainDataset> sources, DomainDataset target);

  std::size_t num_sources() const { return sources_.size(); }
  const std::vector<DomainDataset>& sources() const { return sources_; }
  const DomainDataset& source(std::size_t k) const { return sources_[k]; }
  const DomainDataset& target() const { return target_; }
  Eigen::Index dim() const { return target_.dim(); }

 private:
  std::vector<DomainDataset> sources_;
  DomainDataset target_;
};

// Finite-support domain given by an explicit atom table. Enables exact
// expectations by enumeration.
class DiscreteDomainSpec {
 public:
  struct Atom {
    LabeledSample z;
    double probability = 0.0;
  };

  explicit DiscreteDomainSpec(std::vector<Atom> atoms);

  std::size_t num_atoms() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  Eigen::Index dim() const { return atoms_.front().z.x.size(); }

 private:
  std::vector<Atom> atoms_;
};

// Synthetic domain: inputs have i.i.d. Gaussian coordinates, labels follow
// y = <x, beta> + r with beta redrawn per sample (per coordinate) and a
// scalar noise term r. The second parameter of every Gaussian is a VARIANCE.
struct GaussianDomainSpec {
  double input_mean = 0.0;
  double input_var = 1.0;  // per-coordinate variance
  Eigen::Index dim = 1;
  double beta_mean = 1.0;
  double beta_var = 5.0;  // per-coordinate variance
  double noise_mean = 0.0;
  double noise_var = 0.5;  // variance of the scalar noise term

  void validate() const;
};

using DomainSpec = std::variant<DiscreteDomainSpec, GaussianDomainSpec>;

// Draws n samples from a Gaussian domain spec. Deterministic under the seed:
// per sample, the x coordinates are drawn first, then the beta coordinates,
// then the scalar noise.
DomainDataset synthesize_domain(const GaussianDomainSpec& spec, std::size_t n,
                                std::uint64_t seed,
                                DomainId id = DomainId::target());

// Draws n samples from a discrete spec (atom picked by probability).
DomainDataset draw_discrete(const DiscreteDomainSpec& spec, std::size_t n,
                            std::uint64_t seed,
                            DomainId id = DomainId::target());

// Draws from either kind of spec.
DomainDataset draw_domain(const DomainSpec& spec, std::size_t n,
                          std::uint64_t seed, DomainId id = DomainId::target());

// Exact expectation sum_atoms p * f(z). Errors if f is non-finite anywhere.
double enumerate_expectation(const DiscreteDomainSpec& spec,
                             const std::function<double(const LabeledSample&)>& f);

}  // namespace radapt
