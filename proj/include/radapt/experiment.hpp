#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"
#include "radapt/domain.hpp"
#include "radapt/risk.hpp"

namespace radapt {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Configuration of the convergence experiment: fit a weighted least-squares
// model on a small target subset plus two growing sources, and track
// |combined training risk - held-out target risk| across source sizes.
struct ExperimentConfig {
  Eigen::Index dims = 100;
  std::size_t fit_target_size = 100;       // target samples used for fitting
  std::size_t holdout_target_size = 3900;  // disjoint evaluation samples
  GaussianDomainSpec target;
  std::vector<GaussianDomainSpec> sources;  // exactly two
  std::size_t initial_source_size = 200;    // per source
  std::size_t max_source_size = 2000;       // per source
  std::size_t source_increment = 200;
  std::size_t repeats = 100;
  std::vector<double> w_grid{0.1, 0.25, 0.5, 0.8};    // weight on source 1
  std::vector<double> tau_grid{0.025, 0.3, 0.5, 0.8};
  std::uint64_t seed = 0;
  // true: every repeat draws fresh data at the current size; false: each
  // repeat draws one max-size pool and steps take prefixes of it.
  bool redraw_per_repeat = true;
  unsigned threads = 1;

  std::size_t target_size() const { return fit_target_size + holdout_target_size; }
  std::vector<std::size_t> step_sizes() const;
  void validate() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct CurveRow {
  std::size_t n_total = 0;  // N1 + N2 at this step
  double w = 0.0;
  double tau = 0.0;
  double mean_discrepancy = 0.0;
  double std_discrepancy = 0.0;
  std::size_t repeats = 0;
};

struct ConvergenceCurve {
  std::vector<CurveRow> rows;  // step-major, then w, then tau
  std::vector<double> w_grid;
  std::vector<double> tau_grid;
  std::vector<std::size_t> steps;  // n_total per step
  std::size_t fit_target_size = 0;
};

// Runs the full protocol. Deterministic under (config, seed); repeats
// parallelize across threads with per-repeat child seeds and fixed-order
// aggregation. Within a repeat the same datasets are shared across the
// whole (w, tau) grid, so grid comparisons are paired.
ConvergenceCurve run_convergence_experiment(const ExperimentConfig& config);

struct ComboFinding {
  double w = 0.0;
  double tau = 0.0;
  double first = 0.0;
  double last = 0.0;
  double relative_decrease = 0.0;  // (first - last) / first
};

struct CurveFindings {
  std::vector<ComboFinding> combos;
  // Per (w, tau): did the discrepancy decrease from the first to the last step?
  std::vector<bool> decreased;
  // For every w, the largest grid tau has a larger final discrepancy than the
  // smallest grid tau.
  bool large_tau_fails = false;
  // For every w, the grid tau nearest fit_target_size / (n_total_final +
  // fit_target_size) attains the smallest final discrepancy.
  bool proportional_tau_fastest = false;
  // For the two smallest grid taus, the grid w nearest balanced_w attains the
  // smallest final discrepancy.
  bool balanced_w_fastest = false;
  double proportional_tau = 0.0;  // the ratio the tau flag tests against
  double balanced_w = 0.5;
};

// Summarizes a completed curve. balanced_w is the size-proportional source
// weight (0.5 when N1 = N2).
CurveFindings analyze_curve(const ConvergenceCurve& curve,
                            double balanced_w = 0.5);

nlohmann::json findings_to_json(const CurveFindings& findings);

// Convergence CSV: "n_total,w,tau,mean_discrepancy,std_discrepancy,repeats".
std::string curve_to_csv(const ConvergenceCurve& curve);
ConvergenceCurve curve_from_csv(const std::string& text);

// Writes curve.csv, one SVG per tau (curves across w), one SVG per w (curves
// across tau), and summary.json with the config echo, seed and version.
// Returns the list of files written. An empty curve yields a header-only CSV
// and no SVGs.
std::vector<std::filesystem::path> emit_convergence_report(
    const ConvergenceCurve& curve, const nlohmann::json& config_echo,
    std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace radapt
