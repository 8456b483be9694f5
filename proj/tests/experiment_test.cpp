#include "radapt/experiment.hpp"

#include <filesystem>

#include "doctest.h"
#include "radapt/errors.hpp"
#include "radapt/io.hpp"

using namespace radapt;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.dims = 4;
  c.fit_target_size = 20;
  c.holdout_target_size = 40;
  c.target = GaussianDomainSpec{0.0, 1.0, 4, 1.0, 5.0, 0.0, 0.5};
  c.sources = {GaussianDomainSpec{0.2, 0.96, 4, 1.0, 5.0, 0.0, 0.5},
               GaussianDomainSpec{-0.2, 0.96, 4, 1.0, 5.0, 0.0, 0.5}};
  c.initial_source_size = 30;
  c.max_source_size = 60;
  c.source_increment = 30;
  c.repeats = 3;
  c.w_grid = {0.25, 0.5};
  c.tau_grid = {0.1, 0.5};
  c.seed = 404;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = tiny_config();
  CHECK_NOTHROW(c.validate());
  auto bad_inc = c;
  bad_inc.source_increment = 7;  // does not divide max - initial
  CHECK_THROWS_AS(bad_inc.validate(), ValidationError);
  auto bad_sources = c;
  bad_sources.sources.pop_back();
  CHECK_THROWS_AS(bad_sources.validate(), ValidationError);
  auto bad_tau = c;
  bad_tau.tau_grid = {1.0};
  CHECK_THROWS_AS(bad_tau.validate(), ValidationError);
}

TEST_CASE("experiment runs are deterministic under the seed") {
  auto c = tiny_config();
  c.repeats = 1;
  const auto a = run_convergence_experiment(c);
  const auto b = run_convergence_experiment(c);
  CHECK(curve_to_csv(a) == curve_to_csv(b));
  CHECK(a.rows.size() == c.w_grid.size() * c.tau_grid.size() * 2);

  auto c2 = c;
  c2.seed = 405;
  CHECK(curve_to_csv(run_convergence_experiment(c2)) != curve_to_csv(a));
}

TEST_CASE("experiment is independent of the worker count") {
  auto c = tiny_config();
  c.threads = 1;
  const auto one = run_convergence_experiment(c);
  c.threads = 4;
  const auto four = run_convergence_experiment(c);
  CHECK(curve_to_csv(one) == curve_to_csv(four));
}

TEST_CASE("matched domains with near-deterministic labels show no gap") {
  auto c = tiny_config();
  // Identical input distributions and an almost surely fixed coefficient
  // vector: the fit recovers the labels and both risks collapse.
  c.target = GaussianDomainSpec{0.0, 1.0, 4, 1.0, 1e-12, 0.0, 0.0};
  c.sources = {c.target, c.target};
  const auto curve = run_convergence_experiment(c);
  for (const auto& row : curve.rows) CHECK(row.mean_discrepancy <= 1e-6);
}

TEST_CASE("analysis of synthetic curves") {
  ConvergenceCurve curve;
  curve.w_grid = {0.25, 0.5};
  curve.tau_grid = {0.1, 0.5};
  curve.steps = {100, 200};
  curve.fit_target_size = 50;
  // Strictly decreasing rows, with w = 0.5 and tau = 0.1 best at the end.
  auto push = [&](std::size_t n, double w, double tau, double mean) {
    CurveRow r;
    r.n_total = n;
    r.w = w;
    r.tau = tau;
    r.mean_discrepancy = mean;
    r.repeats = 5;
    curve.rows.push_back(r);
  };
  // step 1 (w-major inner tau)
  push(100, 0.25, 0.1, 1.00);
  push(100, 0.25, 0.5, 1.40);
  push(100, 0.5, 0.1, 0.90);
  push(100, 0.5, 0.5, 1.30);
  // step 2
  push(200, 0.25, 0.1, 0.50);
  push(200, 0.25, 0.5, 0.80);
  push(200, 0.5, 0.1, 0.40);
  push(200, 0.5, 0.5, 0.70);

  const auto f = analyze_curve(curve);
  for (bool d : f.decreased) CHECK(d);
  CHECK(f.large_tau_fails);
  CHECK(f.proportional_tau_fastest);  // nearest grid tau to 50/250 is 0.1
  CHECK(f.balanced_w_fastest);
  CHECK(f.combos.size() == 4);
  CHECK(f.combos[0].relative_decrease == doctest::Approx(0.5).epsilon(1e-12));

  // A constant curve has no decrease and fails the trend flags.
  ConvergenceCurve flat = curve;
  for (auto& r : flat.rows) r.mean_discrepancy = 1.0;
  const auto ff = analyze_curve(flat);
  for (bool d : ff.decreased) CHECK_FALSE(d);
  CHECK_FALSE(ff.large_tau_fails);
  CHECK_FALSE(ff.proportional_tau_fastest);
  CHECK_FALSE(ff.balanced_w_fastest);
  for (const auto& combo : ff.combos) CHECK(combo.relative_decrease == 0.0);

  ConvergenceCurve broken = curve;
  broken.rows.pop_back();
  CHECK_THROWS_AS(analyze_curve(broken), ValidationError);
}

TEST_CASE("report emission") {
  const auto dir = std::filesystem::temp_directory_path() / "radapt_report_test";
  std::filesystem::remove_all(dir);

  auto c = tiny_config();
  c.repeats = 2;
  const auto curve = run_convergence_experiment(c);
  const auto written = emit_convergence_report(curve, c.to_json(), c.seed, dir);
  // One CSV + one SVG per tau + one per w + summary.
  CHECK(written.size() == 1 + c.tau_grid.size() + c.w_grid.size() + 1);
  for (const auto& p : written) CHECK(std::filesystem::exists(p));

  // Re-emission is byte identical.
  const auto csv_before = read_text_file(dir / "curve.csv");
  emit_convergence_report(curve, c.to_json(), c.seed, dir);
  CHECK(read_text_file(dir / "curve.csv") == csv_before);

  // Round trip through the CSV matches the analysis inputs.
  auto parsed = curve_from_csv(csv_before);
  parsed.fit_target_size = curve.fit_target_size;
  CHECK(parsed.rows.size() == curve.rows.size());
  CHECK(parsed.steps == curve.steps);

  // Empty curve: header-only CSV, no SVGs.
  const auto empty_dir = dir / "empty";
  ConvergenceCurve empty;
  const auto files = emit_convergence_report(empty, c.to_json(), 0, empty_dir);
  CHECK(files.size() == 2);  // curve.csv + summary.json
  CHECK(read_text_file(empty_dir / "curve.csv") ==
        "n_total,w,tau,mean_discrepancy,std_discrepancy,repeats\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("fixed-pool mode reuses the repeat pool across steps") {
  auto c = tiny_config();
  c.redraw_per_repeat = false;
  const auto a = run_convergence_experiment(c);
  const auto b = run_convergence_experiment(c);
  CHECK(curve_to_csv(a) == curve_to_csv(b));
}
