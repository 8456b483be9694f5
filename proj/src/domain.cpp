#include "radapt/domain.hpp"

#include <cmath>

#include "radapt/errors.hpp"

namespace radapt {

std::string DomainId::label() const {
  if (kind == Kind::Target) return "T";
  return "S" + std::to_string(index);
}

DomainDataset::DomainDataset(DomainId id, std::vector<LabeledSample> samples)
    : id_(id), samples_(std::move(samples)) {
  if (samples_.empty())
    throw ValidationError("DomainDataset: dataset " + id_.label() + " is empty");
  const Eigen::Index d = samples_.front().x.size();
  for (const auto& s : samples_) {
    if (s.x.size() != d)
      throw ValidationError("DomainDataset: inconsistent input dimension");
    if (!s.x.allFinite() || !std::isfinite(s.y))
      throw ValidationError("DomainDataset: non-finite sample coordinate");
  }
}

MultiSourceBundle::MultiSourceBundle(std::vector<DomainDataset> sources,
                                     DomainDataset target)
    : sources_(std::move(sources)), target_(std::move(target)) {
  if (sources_.empty())
    throw ValidationError("MultiSourceBundle: needs at least one source");
  for (const auto& s : sources_) {
    if (s.dim() != target_.dim())
      throw ValidationError("MultiSourceBundle: input dimensions differ");
  }
}

DiscreteDomainSpec::DiscreteDomainSpec(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("DiscreteDomainSpec: no atoms");
  const Eigen::Index d = atoms_.front().z.x.size();
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.z.x.size() != d)
      throw ValidationError("DiscreteDomainSpec: inconsistent atom dimension");
    if (!a.z.x.allFinite() || !std::isfinite(a.z.y))
      throw ValidationError("DiscreteDomainSpec: non-finite atom");
    if (!(a.probability >= 0.0))
      throw ValidationError("DiscreteDomainSpec: negative atom probability");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("DiscreteDomainSpec: probabilities sum to " +
                          std::to_string(total) + ", expected 1");
}

void GaussianDomainSpec::validate() const {
  const double fields[] = {input_mean, input_var, beta_mean,
                           beta_var,   noise_mean, noise_var};
  for (double v : fields)
    if (!std::isfinite(v))
      throw ValidationError("GaussianDomainSpec: non-finite field");
  if (!(input_var > 0.0))
    throw ValidationError("GaussianDomainSpec: input_var must be > 0");
  if (!(beta_var > 0.0))
    throw ValidationError("GaussianDomainSpec: beta_var must be > 0");
  if (!(noise_var >= 0.0))
    throw ValidationError("GaussianDomainSpec: noise_var must be >= 0");
  if (dim < 1) throw ValidationError("GaussianDomainSpec: dim must be >= 1");
}

DomainDataset synthesize_domain(const GaussianDomainSpec& spec, std::size_t n,
                                std::uint64_t seed, DomainId id) {
  spec.validate();
  if (n == 0) throw ValidationError("synthesize_domain: n must be >= 1");
  SplitRng rng(seed);
  const double x_sd = std::sqrt(spec.input_var);
  const double b_sd = std::sqrt(spec.beta_var);
  const double r_sd = std::sqrt(spec.noise_var);
  std::vector<LabeledSample> samples(n);
  Eigen::VectorXd beta(spec.dim);
  for (std::size_t i = 0; i < n; ++i) {
    LabeledSample& s = samples[i];
    s.x.resize(spec.dim);
    for (Eigen::Index j = 0; j < spec.dim; ++j)
      s.x[j] = rng.normal(spec.input_mean, x_sd);
    for (Eigen::Index j = 0; j < spec.dim; ++j)
      beta[j] = rng.normal(spec.beta_mean, b_sd);
    const double r = rng.normal(spec.noise_mean, r_sd);
    s.y = s.x.dot(beta) + r;
  }
  return DomainDataset(id, std::move(samples));
}

DomainDataset draw_discrete(const DiscreteDomainSpec& spec, std::size_t n,
                            std::uint64_t seed, DomainId id) {
  if (n == 0) throw ValidationError("draw_discrete: n must be >= 1");
  SplitRng rng(seed);
  std::vector<LabeledSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform01();
    double acc = 0.0;
    const auto& atoms = spec.atoms();
    std::size_t pick = atoms.size() - 1;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      acc += atoms[a].probability;
      if (u < acc) {
        pick = a;
        break;
      }
    }
    samples.push_back(atoms[pick].z);
  }
  return DomainDataset(id, std::move(samples));
}

DomainDataset draw_domain(const DomainSpec& spec, std::size_t n,
                          std::uint64_t seed, DomainId id) {
  if (std::holds_alternative<GaussianDomainSpec>(spec))
    return synthesize_domain(std::get<GaussianDomainSpec>(spec), n, seed, id);
  return draw_discrete(std::get<DiscreteDomainSpec>(spec), n, seed, id);
}

double enumerate_expectation(
    const DiscreteDomainSpec& spec,
    const std::function<double(const LabeledSample&)>& f) {
  double total = 0.0;
  for (const auto& a : spec.atoms()) {
    const double v = f(a.z);
    if (!std::isfinite(v))
      throw ValidationError("enumerate_expectation: f is non-finite at an atom");
    total += a.probability * v;
  }
  return total;
}

}  // namespace radapt
