#include "radapt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "radapt/errors.hpp"
#include "radapt/io.hpp"
#include "radapt/parallel.hpp"
#include "radapt/stats.hpp"
#include "radapt/svg.hpp"

namespace radapt {

std::vector<std::size_t> ExperimentConfig::step_sizes() const {
  std::vector<std::size_t> steps;
  for (std::size_t s = initial_source_size; s <= max_source_size;
       s += source_increment)
    steps.push_back(s);
  return steps;
}

void ExperimentConfig::validate() const {
  if (dims < 1) throw ValidationError("ExperimentConfig: dims must be >= 1");
  if (fit_target_size == 0 || holdout_target_size == 0)
    throw ValidationError("ExperimentConfig: target split sizes must be >= 1");
  if (sources.size() != 2)
    throw ValidationError("ExperimentConfig: the protocol uses exactly 2 sources");
  if (initial_source_size == 0 || max_source_size < initial_source_size)
    throw ValidationError("ExperimentConfig: bad source size range");
  if (source_increment == 0 ||
      (max_source_size - initial_source_size) % source_increment != 0)
    throw ValidationError(
        "ExperimentConfig: increment must divide max - initial");
  if (repeats == 0) throw ValidationError("ExperimentConfig: repeats must be >= 1");
  if (w_grid.empty() || tau_grid.empty())
    throw ValidationError("ExperimentConfig: empty parameter grid");
  for (double w : w_grid)
    if (!(w >= 0.0 && w <= 1.0))
      throw ValidationError("ExperimentConfig: w values must lie in [0, 1]");
  for (double t : tau_grid)
    if (!(t >= 0.0 && t < 1.0))
      throw ValidationError("ExperimentConfig: tau values must lie in [0, 1)");
  GaussianDomainSpec t = target;
  t.dim = dims;
  t.validate();
  for (GaussianDomainSpec s : sources) {
    s.dim = dims;
    s.validate();
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["dims"] = dims;
  j["fit_target_size"] = fit_target_size;
  j["holdout_target_size"] = holdout_target_size;
  j["target"] = domain_spec_to_json(target);
  j["sources"] = nlohmann::json::array();
  for (const auto& s : sources) j["sources"].push_back(domain_spec_to_json(s));
  j["initial_source_size"] = initial_source_size;
  j["max_source_size"] = max_source_size;
  j["source_increment"] = source_increment;
  j["repeats"] = repeats;
  j["w_grid"] = w_grid;
  j["tau_grid"] = tau_grid;
  j["seed"] = seed;
  j["redraw_per_repeat"] = redraw_per_repeat;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.dims = j.value("dims", c.dims);
    c.fit_target_size = j.value("fit_target_size", c.fit_target_size);
    c.holdout_target_size = j.value("holdout_target_size", c.holdout_target_size);
    if (j.contains("target"))
      c.target = std::get<GaussianDomainSpec>(domain_spec_from_json(j.at("target")));
    if (j.contains("sources")) {
      c.sources.clear();
      for (const auto& sj : j.at("sources"))
        c.sources.push_back(std::get<GaussianDomainSpec>(domain_spec_from_json(sj)));
    }
    c.initial_source_size = j.value("initial_source_size", c.initial_source_size);
    c.max_source_size = j.value("max_source_size", c.max_source_size);
    c.source_increment = j.value("source_increment", c.source_increment);
    c.repeats = j.value("repeats", c.repeats);
    if (j.contains("w_grid")) c.w_grid = j.at("w_grid").get<std::vector<double>>();
    if (j.contains("tau_grid"))
      c.tau_grid = j.at("tau_grid").get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    c.redraw_per_repeat = j.value("redraw_per_repeat", c.redraw_per_repeat);
    c.target.dim = c.dims;
    for (auto& s : c.sources) s.dim = c.dims;
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("experiment config JSON: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw IoError("experiment config JSON: domain specs must be gaussian");
  }
}

namespace {

// Sufficient statistics of one domain sample for squared-loss algebra with a
// bias column: risk(theta) = theta^T A theta - 2 b^T theta + c.
struct DomainGram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;

  static DomainGram of(const std::vector<LabeledSample>& samples,
                       Eigen::Index dim, std::size_t count) {
    DomainGram g;
    const Eigen::Index p = dim + 1;
    g.A = Eigen::MatrixXd::Zero(p, p);
    g.b = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd xa(p);
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      xa.head(dim) = samples[i].x;
      xa[dim] = 1.0;
      g.A.noalias() += inv * (xa * xa.transpose());
      g.b.noalias() += (inv * samples[i].y) * xa;
      g.c += inv * samples[i].y * samples[i].y;
    }
    return g;
  }

  double risk(const Eigen::VectorXd& theta) const {
    return theta.dot(A * theta) - 2.0 * b.dot(theta) + c;
  }
};

}  // namespace

ConvergenceCurve run_convergence_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto steps = config.step_sizes();
  const std::size_t n_w = config.w_grid.size();
  const std::size_t n_tau = config.tau_grid.size();
  const std::size_t combos = n_w * n_tau;
  const Eigen::Index dim = config.dims;
  const Eigen::Index p = dim + 1;

  GaussianDomainSpec target_spec = config.target;
  target_spec.dim = dim;
  std::vector<GaussianDomainSpec> source_specs = config.sources;
  for (auto& s : source_specs) s.dim = dim;

  ConvergenceCurve curve;
  curve.w_grid = config.w_grid;
  curve.tau_grid = config.tau_grid;
  curve.fit_target_size = config.fit_target_size;

  for (std::size_t si = 0; si < steps.size(); ++si) {
    const std::size_t s = steps[si];
    // discrepancies[rep * combos + combo]
    std::vector<double> discrepancies(config.repeats * combos, 0.0);
    parallel_for(config.repeats, config.threads, [&](std::size_t rep) {
      // Fixed-pool mode keys the data on the repeat only and slices a
      // prefix, so steps reuse the same pool.
      const std::uint64_t data_seed =
          config.redraw_per_repeat
              ? SplitRng::derive(SplitRng::derive(config.seed, si), rep)
              : SplitRng::derive(config.seed, rep);
      const std::size_t draw_size =
          config.redraw_per_repeat ? s : config.max_source_size;

      const auto target = synthesize_domain(
          target_spec, config.target_size(),
          SplitRng::derive(data_seed, "T"), DomainId::target());
      const auto src1 = synthesize_domain(source_specs[0], draw_size,
                                          SplitRng::derive(data_seed, "S1"),
                                          DomainId::source(1));
      const auto src2 = synthesize_domain(source_specs[1], draw_size,
                                          SplitRng::derive(data_seed, "S2"),
                                          DomainId::source(2));

      const auto& ts = target.samples();
      const std::vector<LabeledSample> fit_part(ts.begin(),
                                                ts.begin() + config.fit_target_size);
      const std::vector<LabeledSample> holdout_part(
          ts.begin() + config.fit_target_size, ts.end());

      const DomainGram g_fit = DomainGram::of(fit_part, dim, fit_part.size());
      const DomainGram g_holdout =
          DomainGram::of(holdout_part, dim, holdout_part.size());
      const DomainGram g_s1 = DomainGram::of(src1.samples(), dim, s);
      const DomainGram g_s2 = DomainGram::of(src2.samples(), dim, s);

      Eigen::MatrixXd A(p, p);
      Eigen::VectorXd b(p);
      for (std::size_t wi = 0; wi < n_w; ++wi) {
        const double w = config.w_grid[wi];
        for (std::size_t ti = 0; ti < n_tau; ++ti) {
          const double tau = config.tau_grid[ti];
          A = tau * g_fit.A + (1.0 - tau) * (w * g_s1.A + (1.0 - w) * g_s2.A);
          b = tau * g_fit.b + (1.0 - tau) * (w * g_s1.b + (1.0 - w) * g_s2.b);
          A.diagonal().array() += 1e-10 * A.trace() / static_cast<double>(p);
          const Eigen::VectorXd theta = A.ldlt().solve(b);
          const double combined = tau * g_fit.risk(theta) +
                                  (1.0 - tau) * (w * g_s1.risk(theta) +
                                                 (1.0 - w) * g_s2.risk(theta));
          const double holdout = g_holdout.risk(theta);
          discrepancies[rep * combos + wi * n_tau + ti] =
              std::abs(combined - holdout);
        }
      }
    });

    for (std::size_t wi = 0; wi < n_w; ++wi) {
      for (std::size_t ti = 0; ti < n_tau; ++ti) {
        std::vector<double> per_repeat(config.repeats);
        for (std::size_t rep = 0; rep < config.repeats; ++rep)
          per_repeat[rep] = discrepancies[rep * combos + wi * n_tau + ti];
        const MeanStd ms = mean_std(per_repeat.data(), per_repeat.size());
        CurveRow row;
        row.n_total = 2 * s;
        row.w = config.w_grid[wi];
        row.tau = config.tau_grid[ti];
        row.mean_discrepancy = ms.mean;
        row.std_discrepancy = ms.std;
        row.repeats = config.repeats;
        curve.rows.push_back(row);
      }
    }
    curve.steps.push_back(2 * s);
  }
  return curve;
}

namespace {

std::size_t nearest_index(const std::vector<double>& grid, double value) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - value) < std::abs(grid[best] - value)) best = i;
  return best;
}

}  // namespace

CurveFindings analyze_curve(const ConvergenceCurve& curve, double balanced_w) {
  const std::size_t n_w = curve.w_grid.size();
  const std::size_t n_tau = curve.tau_grid.size();
  const std::size_t combos = n_w * n_tau;
  if (curve.steps.empty() || curve.rows.size() != combos * curve.steps.size())
    throw ValidationError("analyze_curve: incomplete curve");

  auto mean_at = [&](std::size_t step, std::size_t wi, std::size_t ti) {
    return curve.rows[step * combos + wi * n_tau + ti].mean_discrepancy;
  };
  const std::size_t last = curve.steps.size() - 1;

  CurveFindings f;
  f.balanced_w = balanced_w;
  f.proportional_tau =
      static_cast<double>(curve.fit_target_size) /
      (static_cast<double>(curve.steps.back()) +
       static_cast<double>(curve.fit_target_size));
  for (std::size_t wi = 0; wi < n_w; ++wi) {
    for (std::size_t ti = 0; ti < n_tau; ++ti) {
      ComboFinding c;
      c.w = curve.w_grid[wi];
      c.tau = curve.tau_grid[ti];
      c.first = mean_at(0, wi, ti);
      c.last = mean_at(last, wi, ti);
      c.relative_decrease = c.first > 0.0 ? (c.first - c.last) / c.first : 0.0;
      f.combos.push_back(c);
      f.decreased.push_back(c.last < c.first);
    }
  }

  const std::size_t tau_lo =
      static_cast<std::size_t>(std::min_element(curve.tau_grid.begin(),
                                                curve.tau_grid.end()) -
                               curve.tau_grid.begin());
  const std::size_t tau_hi =
      static_cast<std::size_t>(std::max_element(curve.tau_grid.begin(),
                                                curve.tau_grid.end()) -
                               curve.tau_grid.begin());
  const std::size_t tau_near = nearest_index(curve.tau_grid, f.proportional_tau);

  f.large_tau_fails = true;
  f.proportional_tau_fastest = true;
  for (std::size_t wi = 0; wi < n_w; ++wi) {
    if (!(mean_at(last, wi, tau_hi) > mean_at(last, wi, tau_lo)))
      f.large_tau_fails = false;
    for (std::size_t ti = 0; ti < n_tau; ++ti)
      if (ti != tau_near && !(mean_at(last, wi, tau_near) < mean_at(last, wi, ti)))
        f.proportional_tau_fastest = false;
  }

  // The two smallest taus.
  std::vector<std::size_t> tau_order(n_tau);
  for (std::size_t i = 0; i < n_tau; ++i) tau_order[i] = i;
  std::sort(tau_order.begin(), tau_order.end(), [&](std::size_t a, std::size_t b) {
    return curve.tau_grid[a] < curve.tau_grid[b];
  });
  const std::size_t w_near = nearest_index(curve.w_grid, balanced_w);
  f.balanced_w_fastest = true;
  for (std::size_t r = 0; r < std::min<std::size_t>(2, n_tau); ++r) {
    const std::size_t ti = tau_order[r];
    for (std::size_t wi = 0; wi < n_w; ++wi)
      if (wi != w_near && !(mean_at(last, w_near, ti) < mean_at(last, wi, ti)))
        f.balanced_w_fastest = false;
  }
  return f;
}

nlohmann::json findings_to_json(const CurveFindings& f) {
  nlohmann::json j;
  j["combos"] = nlohmann::json::array();
  for (std::size_t i = 0; i < f.combos.size(); ++i) {
    nlohmann::json c;
    c["w"] = f.combos[i].w;
    c["tau"] = f.combos[i].tau;
    c["first"] = f.combos[i].first;
    c["last"] = f.combos[i].last;
    c["relative_decrease"] = f.combos[i].relative_decrease;
    c["decreased"] = static_cast<bool>(f.decreased[i]);
    j["combos"].push_back(c);
  }
  j["large_tau_fails"] = f.large_tau_fails;
  j["proportional_tau_fastest"] = f.proportional_tau_fastest;
  j["balanced_w_fastest"] = f.balanced_w_fastest;
  j["proportional_tau"] = f.proportional_tau;
  j["balanced_w"] = f.balanced_w;
  return j;
}

std::string curve_to_csv(const ConvergenceCurve& curve) {
  std::ostringstream out;
  out << "n_total,w,tau,mean_discrepancy,std_discrepancy,repeats\n";
  for (const auto& r : curve.rows) {
    out << r.n_total << "," << format_double(r.w) << "," << format_double(r.tau)
        << "," << format_double(r.mean_discrepancy) << ","
        << format_double(r.std_discrepancy) << "," << r.repeats << "\n";
  }
  return out.str();
}

ConvergenceCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "n_total,w,tau,mean_discrepancy,std_discrepancy,repeats")
    throw IoError("curve CSV: malformed header");
  ConvergenceCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    CurveRow r;
    std::getline(row, field, ',');
    r.n_total = static_cast<std::size_t>(std::stoull(field));
    std::getline(row, field, ',');
    r.w = std::stod(field);
    std::getline(row, field, ',');
    r.tau = std::stod(field);
    std::getline(row, field, ',');
    r.mean_discrepancy = std::stod(field);
    std::getline(row, field, ',');
    r.std_discrepancy = std::stod(field);
    std::getline(row, field, ',');
    r.repeats = static_cast<std::size_t>(std::stoull(field));
    curve.rows.push_back(r);
  }
  // Reconstruct the grids from row order: step-major, then w, then tau.
  for (const auto& r : curve.rows) {
    if (std::find(curve.w_grid.begin(), curve.w_grid.end(), r.w) ==
        curve.w_grid.end())
      curve.w_grid.push_back(r.w);
    if (std::find(curve.tau_grid.begin(), curve.tau_grid.end(), r.tau) ==
        curve.tau_grid.end())
      curve.tau_grid.push_back(r.tau);
    if (std::find(curve.steps.begin(), curve.steps.end(), r.n_total) ==
        curve.steps.end())
      curve.steps.push_back(r.n_total);
  }
  return curve;
}

std::vector<std::filesystem::path> emit_convergence_report(
    const ConvergenceCurve& curve, const nlohmann::json& config_echo,
    std::uint64_t seed, const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  const auto csv_path = out_dir / "curve.csv";
  write_text_file(csv_path, curve_to_csv(curve));
  written.push_back(csv_path);

  const std::size_t n_w = curve.w_grid.size();
  const std::size_t n_tau = curve.tau_grid.size();
  const std::size_t combos = n_w * n_tau;
  const bool complete = !curve.rows.empty() && !curve.steps.empty() &&
                        curve.rows.size() == combos * curve.steps.size();
  if (complete) {
    auto mean_at = [&](std::size_t step, std::size_t wi, std::size_t ti) {
      return curve.rows[step * combos + wi * n_tau + ti].mean_discrepancy;
    };
    std::vector<double> xs(curve.steps.begin(), curve.steps.end());
    for (std::size_t ti = 0; ti < n_tau; ++ti) {
      std::vector<PlotSeries> series;
      for (std::size_t wi = 0; wi < n_w; ++wi) {
        PlotSeries ps;
        ps.label = "w = " + format_double(curve.w_grid[wi]);
        ps.x = xs;
        for (std::size_t si = 0; si < curve.steps.size(); ++si)
          ps.y.push_back(mean_at(si, wi, ti));
        series.push_back(std::move(ps));
      }
      const auto path = out_dir / ("curves_tau_" +
                                   format_double(curve.tau_grid[ti]) + ".svg");
      write_text_file(path,
                      render_line_plot("tau = " + format_double(curve.tau_grid[ti]),
                                       "N1 + N2", "mean discrepancy", series));
      written.push_back(path);
    }
    for (std::size_t wi = 0; wi < n_w; ++wi) {
      std::vector<PlotSeries> series;
      for (std::size_t ti = 0; ti < n_tau; ++ti) {
        PlotSeries ps;
        ps.label = "tau = " + format_double(curve.tau_grid[ti]);
        ps.x = xs;
        for (std::size_t si = 0; si < curve.steps.size(); ++si)
          ps.y.push_back(mean_at(si, wi, ti));
        series.push_back(std::move(ps));
      }
      const auto path = out_dir / ("curves_w_" +
                                   format_double(curve.w_grid[wi]) + ".svg");
      write_text_file(path,
                      render_line_plot("w = " + format_double(curve.w_grid[wi]),
                                       "N1 + N2", "mean discrepancy", series));
      written.push_back(path);
    }
  }

  nlohmann::json summary;
  summary["config"] = config_echo;
  summary["seed"] = seed;
  summary["version"] = kLibraryVersion;
  summary["rows"] = curve.rows.size();
  const auto summary_path = out_dir / "summary.json";
  write_text_file(summary_path, summary.dump(2) + "\n");
  written.push_back(summary_path);
  return written;
}

}  // namespace radapt
