// Command-line surface over the library: data synthesis, weighted ERM,
// divergence and complexity estimation, bound evaluation, Monte Carlo tail
// validation, and the convergence experiment.
//
// Exit codes: 0 success, 2 configuration/precondition error, 3 a validation
// suite produced failing rows.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "radapt/bounds.hpp"
#include "radapt/complexity.hpp"
#include "radapt/deviation.hpp"
#include "radapt/divergence.hpp"
#include "radapt/errors.hpp"
#include "radapt/experiment.hpp"
#include "radapt/io.hpp"
#include "radapt/risk.hpp"

namespace {

using nlohmann::json;
using namespace radapt;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  unsigned threads = 1;
  std::string format = "csv";
};

json load_config(const GlobalOptions& opts) {
  if (opts.config_path.empty())
    throw ValidationError("--config <path> is required for this subcommand");
  json j = json::parse(read_text_file(opts.config_path));
  if (opts.seed) j["seed"] = *opts.seed;
  return j;
}

std::uint64_t config_seed(const json& cfg) { return cfg.value("seed", 0ULL); }

void emit_or_print(const GlobalOptions& opts, const std::string& name,
                   const std::string& text) {
  if (opts.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  const auto path = std::filesystem::path(opts.out_dir) / name;
  write_text_file(path, text);
  std::cout << path.string() << "\n";
}

DomainDataset load_dataset(const json& j, DomainId id) {
  if (j.is_string()) return dataset_from_csv(read_text_file(j.get<std::string>()), id);
  if (j.contains("csv"))
    return dataset_from_csv(read_text_file(j.at("csv").get<std::string>()), id);
  throw ValidationError("expected a dataset CSV path");
}

Distribution load_distribution(const json& j, DomainId id) {
  if (j.is_string() || j.contains("csv"))
    return Distribution::empirical(load_dataset(j, id));
  const DomainSpec spec = domain_spec_from_json(j);
  if (!std::holds_alternative<DiscreteDomainSpec>(spec))
    throw ValidationError(
        "distributions must be empirical (csv) or discrete (atom table)");
  return Distribution::discrete(std::get<DiscreteDomainSpec>(spec));
}

Hypothesis load_hypothesis(const json& j) {
  if (j.contains("table")) {
    TabulatedHypothesis t;
    for (const auto& e : j.at("table")) {
      const auto xs = e.at("x").get<std::vector<double>>();
      t.points.push_back(Eigen::Map<const Eigen::VectorXd>(
          xs.data(), static_cast<Eigen::Index>(xs.size())));
      t.values.push_back(e.at("value").get<double>());
    }
    return t;
  }
  return linear_hypothesis_from_json(j);
}

MixtureWeights load_weights(const json& cfg) {
  const double tau = cfg.at("tau").get<double>();
  const auto wv = cfg.at("w").get<std::vector<double>>();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(
      wv.data(), static_cast<Eigen::Index>(wv.size()));
  return MixtureWeights(tau, std::move(w));
}

SampleSizes load_sizes(const json& cfg) {
  SampleSizes s;
  s.target = cfg.at("target_size").get<std::size_t>();
  s.sources = cfg.at("source_sizes").get<std::vector<std::size_t>>();
  return s;
}

json bound_result_json(const BoundResult& r) {
  json j;
  j["value"] = r.value;
  j["discrepancy_term"] = r.discrepancy_term;
  j["stochastic_term"] = r.stochastic_term;
  j["preconditions_ok"] = r.preconditions.ok;
  j["precondition_notes"] = r.preconditions.notes;
  if (r.implied_confidence) j["implied_confidence"] = *r.implied_confidence;
  if (r.cover_radius) j["cover_radius"] = *r.cover_radius;
  return j;
}

json tail_report_json(const TailReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["xi"] = r.xi;
    row["empirical_p"] = r.empirical_p;
    row["wilson99"] = r.wilson99;
    row["bound"] = r.bound;
    row["pass"] = r.pass;
    row["condition_ok"] = r.condition_ok;
    rows.push_back(row);
  }
  json j;
  j["rows"] = rows;
  j["all_pass"] = report.all_pass;
  return j;
}

int cmd_synthesize(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  const DomainSpec spec = domain_spec_from_json(cfg.at("spec"));
  const std::size_t n = cfg.at("n").get<std::size_t>();
  const auto data = draw_domain(spec, n, config_seed(cfg));
  emit_or_print(opts, cfg.value("output_name", std::string("dataset.csv")),
                dataset_to_csv(data));
  return 0;
}

int cmd_erm(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  std::vector<DomainDataset> sources;
  std::size_t k = 1;
  for (const auto& sj : cfg.at("sources"))
    sources.push_back(load_dataset(sj, DomainId::source(static_cast<int>(k++))));
  MultiSourceBundle bundle(std::move(sources),
                           load_dataset(cfg.at("target"), DomainId::target()));
  MixtureWeights weights = [&] {
    if (cfg.contains("w") && cfg.at("w").is_string() &&
        cfg.at("w").get<std::string>() == "optimal") {
      std::vector<std::size_t> sizes;
      for (std::size_t i = 0; i < bundle.num_sources(); ++i)
        sizes.push_back(bundle.source(i).size());
      return optimal_parameters(bundle.target().size(), sizes);
    }
    return load_weights(cfg);
  }();
  std::optional<double> ridge;
  if (cfg.contains("ridge")) ridge = cfg.at("ridge").get<double>();
  const LinearHypothesis h = solve_weighted_least_squares(bundle, weights, ridge);

  const LossFunction loss = LossFunction::squared_unclamped();
  std::vector<double> target_vals;
  for (const auto& z : bundle.target().samples())
    target_vals.push_back(loss(predict(h, z.x), z.y));
  std::vector<std::vector<double>> source_vals(bundle.num_sources());
  for (std::size_t i = 0; i < bundle.num_sources(); ++i)
    for (const auto& z : bundle.source(i).samples())
      source_vals[i].push_back(loss(predict(h, z.x), z.y));
  const RiskReport risks = combined_risk(target_vals, source_vals, weights);

  json out;
  out["hypothesis"] = linear_hypothesis_to_json(h);
  out["risks"] = {{"target_empirical", risks.target_empirical},
                  {"source_weighted", risks.source_weighted},
                  {"combined", risks.combined}};
  out["tau"] = weights.tau();
  out["w"] = std::vector<double>(weights.w().data(),
                                 weights.w().data() + weights.w().size());
  emit_or_print(opts, "erm.json", out.dump(2) + "\n");
  return 0;
}

int cmd_divergence(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
  const std::string kind = cfg.at("kind").get<std::string>();
  DivergenceValue v;
  if (kind == "weighted_ipm") {
    std::vector<Distribution> sources;
    std::size_t k = 1;
    for (const auto& sj : cfg.at("sources"))
      sources.push_back(load_distribution(sj, DomainId::source(static_cast<int>(k++))));
    v = weighted_ipm(klass, sources,
                     load_distribution(cfg.at("target"), DomainId::target()),
                     load_weights(cfg));
  } else if (kind == "q_metric") {
    v = q_label_metric(klass,
                       load_distribution(cfg.at("target"), DomainId::target()),
                       load_hypothesis(cfg.at("labeling_source")),
                       load_hypothesis(cfg.at("labeling_target")));
  } else {
    const Distribution s = load_distribution(cfg.at("source"), DomainId::source(1));
    const Distribution t = load_distribution(cfg.at("target"), DomainId::target());
    if (kind == "ipm") {
      v = ipm(klass, s, t);
    } else if (kind == "discrepancy") {
      v = discrepancy_distance(klass, s, t);
    } else if (kind == "h_delta_h") {
      std::optional<Hypothesis> ls, lt;
      if (cfg.contains("labeling_source"))
        ls = load_hypothesis(cfg.at("labeling_source"));
      if (cfg.contains("labeling_target"))
        lt = load_hypothesis(cfg.at("labeling_target"));
      v = h_delta_h(klass, s, t, ls ? &*ls : nullptr, lt ? &*lt : nullptr);
    } else {
      throw ValidationError("divergence: unknown kind '" + kind + "'");
    }
  }
  json out;
  out["kind"] = kind;
  out["value"] = v.value;
  out["class_size"] = v.class_size;
  if (v.lambda) out["lambda"] = *v.lambda;
  emit_or_print(opts, "divergence.json", out.dump(2) + "\n");
  return 0;
}

int cmd_complexity(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  const std::string kind = cfg.at("kind").get<std::string>();
  json out;
  out["kind"] = kind;
  if (kind == "uen") {
    const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
    std::vector<DomainSpec> source_specs;
    for (const auto& sj : cfg.at("sources"))
      source_specs.push_back(domain_spec_from_json(sj));
    const auto est = uniform_entropy_estimate(
        klass, domain_spec_from_json(cfg.at("target")), source_specs,
        cfg.at("target_size").get<std::size_t>(),
        cfg.at("source_sizes").get<std::vector<std::size_t>>(),
        load_weights(cfg), cfg.at("radius").get<double>(),
        cfg.value("redraws", std::size_t{16}), config_seed(cfg));
    out["value"] = est.value;
    out["radius"] = *est.radius;
    out["redraws"] = est.trials;
    out["note"] = "lower estimate: max over redraws, not the exact supremum";
  } else if (kind == "covering_greedy" || kind == "covering_exact") {
    const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
    GhostedBundle bundle = draw_ghosted_bundle(
        domain_spec_from_json(cfg.at("target")),
        [&] {
          std::vector<DomainSpec> s;
          for (const auto& sj : cfg.at("sources"))
            s.push_back(domain_spec_from_json(sj));
          return s;
        }(),
        cfg.at("target_size").get<std::size_t>(),
        cfg.at("source_sizes").get<std::vector<std::size_t>>(), config_seed(cfg));
    std::vector<PointTag> tags;
    const auto points = flatten(bundle, &tags);
    const auto matrix = evaluate_class(klass, points, &tags);
    const auto layout = GhostLayout::of(bundle);
    const auto est = kind == "covering_greedy"
                         ? covering_number_greedy(matrix, cfg.at("radius").get<double>(),
                                                  layout, load_weights(cfg))
                         : covering_number_exact(matrix, cfg.at("radius").get<double>(),
                                                 layout, load_weights(cfg));
    out["value"] = est.value;
    out["radius"] = *est.radius;
  } else if (kind == "rademacher_empirical") {
    const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
    const auto data = load_dataset(cfg.at("data"), DomainId::target());
    const auto matrix = evaluate_class(klass, data.samples());
    const auto est = rademacher_empirical(matrix.values,
                                          cfg.value("trials", std::size_t{1024}),
                                          config_seed(cfg), opts.threads);
    out["value"] = est.value;
    out["trials"] = est.trials;
    if (est.std_error) out["std_error"] = *est.std_error;
  } else if (kind == "rademacher_expected") {
    const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
    const auto est = rademacher_expected(
        klass, domain_spec_from_json(cfg.at("domain")),
        cfg.at("n").get<std::size_t>(), cfg.value("data_trials", std::size_t{64}),
        cfg.value("sigma_trials", std::size_t{256}), config_seed(cfg),
        opts.threads);
    out["value"] = est.value;
    out["trials"] = est.trials;
    if (est.std_error) out["std_error"] = *est.std_error;
  } else {
    throw ValidationError("complexity: unknown kind '" + kind + "'");
  }
  emit_or_print(opts, "complexity.json", out.dump(2) + "\n");
  return 0;
}

int cmd_bound(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  const std::string which = cfg.at("which").get<std::string>();
  BoundInput input{load_sizes(cfg), load_weights(cfg)};
  input.range_lo = cfg.value("range_lo", 0.0);
  input.range_hi = cfg.value("range_hi", 1.0);
  input.divergence = cfg.value("divergence", 0.0);
  if (cfg.contains("ln_cover")) input.ln_cover = cfg.at("ln_cover").get<double>();
  if (cfg.contains("cover_radius"))
    input.cover_radius = cfg.at("cover_radius").get<double>();
  input.confidence = cfg.value("confidence", 0.05);
  if (cfg.contains("eta")) input.eta = cfg.at("eta").get<double>();
  if (cfg.contains("c1")) input.c1 = cfg.at("c1").get<double>();
  if (cfg.contains("eta_x")) input.eta_x = cfg.at("eta_x").get<double>();
  if (cfg.contains("c2")) input.c2 = cfg.at("c2").get<double>();
  if (cfg.contains("rademacher")) {
    RademacherInputs rad;
    rad.source_expected =
        cfg.at("rademacher").at("sources").get<std::vector<double>>();
    rad.target_empirical = cfg.at("rademacher").at("target").get<double>();
    input.rademacher = rad;
  }

  json out;
  out["which"] = which;
  if (which == "hoeffding") {
    out["result"] = bound_result_json(hoeffding_bound(input));
  } else if (which == "bennett_tail") {
    const auto t = bennett_tail(input, cfg.at("xi").get<double>());
    out["result"] = {{"probability", t.probability},
                     {"log_raw", t.log_raw},
                     {"preconditions_ok", t.preconditions.ok},
                     {"precondition_notes", t.preconditions.notes}};
  } else if (which == "bernstein") {
    out["result"] = bound_result_json(bernstein_bound(input));
  } else if (which == "alt_bennett") {
    out["result"] = bound_result_json(alt_bennett_bound(input));
  } else if (which == "rademacher_hoeffding") {
    out["result"] = bound_result_json(rademacher_bound_hoeffding(input));
  } else if (which == "rademacher_bennett") {
    out["result"] = bound_result_json(rademacher_bound_bennett(input));
  } else if (which == "optimal_rate") {
    out["result"] = bound_result_json(optimal_rate_bound(input));
  } else if (which == "asymptotic") {
    std::vector<SampleSizes> growth;
    for (const auto& gj : cfg.at("growth")) {
      SampleSizes s;
      s.target = gj.at("target_size").get<std::size_t>();
      s.sources = gj.at("source_sizes").get<std::vector<std::size_t>>();
      growth.push_back(std::move(s));
    }
    const auto rep = asymptotic_condition(
        growth, cfg.at("ln_cover_sequence").get<std::vector<double>>(),
        input.weights);
    out["result"] = {{"ratios", rep.ratios},
                     {"running_max", rep.running_max},
                     {"bounded_trend", rep.bounded_trend}};
  } else {
    throw ValidationError("bound: unknown kind '" + which + "'");
  }
  emit_or_print(opts, "bound.json", out.dump(2) + "\n");
  return 0;
}

TailExperiment load_tail_experiment(const json& cfg) {
  DiscreteDomainSpec target =
      std::get<DiscreteDomainSpec>(domain_spec_from_json(cfg.at("target")));
  std::vector<DiscreteDomainSpec> sources;
  for (const auto& sj : cfg.at("sources"))
    sources.push_back(std::get<DiscreteDomainSpec>(domain_spec_from_json(sj)));
  const SampleSizes sizes = load_sizes(cfg);
  MixtureWeights weights =
      cfg.contains("w") && cfg.at("w").is_string() &&
              cfg.at("w").get<std::string>() == "optimal"
          ? optimal_parameters(sizes.target, sizes.sources)
          : load_weights(cfg);
  return TailExperiment{
      StatisticKind::PooledSum,
      std::move(target),
      std::move(sources),
      cfg.at("atom_values").get<std::vector<std::vector<double>>>(),
      sizes,
      std::move(weights),
      cfg.value("range_lo", 0.0),
      cfg.value("range_hi", 1.0),
      cfg.at("thresholds").get<std::vector<double>>(),
      cfg.value("trials", std::size_t{10000}),
      config_seed(cfg)};
}

int cmd_deviate(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  TailExperiment exp = load_tail_experiment(cfg);
  const std::string bound = cfg.at("bound").get<std::string>();
  const double ba = exp.range_hi - exp.range_lo;
  std::function<double(double)> bound_fn;
  if (bound == "hoeffding") {
    bound_fn = [&](double xi) {
      return hoeffding_deviation_bound(exp.sizes, exp.weights, ba, xi);
    };
  } else if (bound == "bennett") {
    bound_fn = [&](double xi) {
      return bennett_deviation_bound(exp.sizes, ba, xi);
    };
  } else if (bound == "mcdiarmid_quadratic" || bound == "mcdiarmid_bennett") {
    exp.statistic = StatisticKind::BoundedDifference;
    // Bounded-difference constants of the pooled statistic.
    std::vector<std::vector<double>> c_table;
    c_table.emplace_back(exp.sizes.target,
                         exp.weights.tau() * exp.sizes.source_product() * ba);
    for (std::size_t k = 0; k < exp.sizes.sources.size(); ++k)
      c_table.emplace_back(
          exp.sizes.sources[k],
          (1.0 - exp.weights.tau()) * static_cast<double>(exp.sizes.target) *
              exp.weights.w(k) * exp.sizes.product_excluding(k) * ba);
    const bool quadratic = bound == "mcdiarmid_quadratic";
    bound_fn = [&, c_table, quadratic](double xi) {
      const auto b = mcdiarmid_bound(c_table, xi);
      if (quadratic) return b.quadratic;
      if (!b.bennett)
        throw ContractError("deviate: equal-constant form unavailable for "
                            "these weights");
      return *b.bennett;
    };
  } else {
    throw ValidationError("deviate: unknown bound '" + bound + "'");
  }
  const TailReport report = mc_tail_estimate(exp, bound_fn, opts.threads);
  if (opts.format == "json")
    emit_or_print(opts, "tail.json", tail_report_json(report).dump(2) + "\n");
  else
    emit_or_print(opts, "tail.csv", tail_report_to_csv(report));
  return report.all_pass ? 0 : 3;
}

int cmd_symmetrize(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  const FiniteHypothesisClass klass = finite_class_from_json(cfg.at("class"));
  const DomainSpec target = domain_spec_from_json(cfg.at("target"));
  std::vector<DiscreteDomainSpec> sources;
  for (const auto& sj : cfg.at("sources"))
    sources.push_back(std::get<DiscreteDomainSpec>(domain_spec_from_json(sj)));
  const SampleSizes sizes = load_sizes(cfg);
  MixtureWeights weights =
      cfg.contains("w") && cfg.at("w").is_string()
          ? optimal_parameters(sizes.target, sizes.sources)
          : load_weights(cfg);
  const TailReport report = symmetrization_check(
      klass, std::get<DiscreteDomainSpec>(target), sources, sizes, weights,
      cfg.at("thresholds").get<std::vector<double>>(),
      cfg.value("trials", std::size_t{10000}), config_seed(cfg), opts.threads);
  if (opts.format == "json")
    emit_or_print(opts, "symmetrize.json", tail_report_json(report).dump(2) + "\n");
  else
    emit_or_print(opts, "symmetrize.csv", tail_report_to_csv(report));
  bool any_evaluated_fail = false;
  for (const auto& r : report.rows)
    if (r.condition_ok && !r.pass) any_evaluated_fail = true;
  return any_evaluated_fail ? 3 : 0;
}

int cmd_experiment(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  ExperimentConfig config = ExperimentConfig::from_json(cfg);
  config.threads = opts.threads;
  const ConvergenceCurve curve = run_convergence_experiment(config);
  const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
  const auto written = emit_convergence_report(curve, config.to_json(),
                                               config.seed, out_dir);
  for (const auto& p : written) std::cout << p.string() << "\n";
  return 0;
}

int cmd_analyze(const GlobalOptions& opts) {
  const json cfg = load_config(opts);
  ConvergenceCurve curve =
      curve_from_csv(read_text_file(cfg.at("curve").get<std::string>()));
  if (cfg.contains("fit_target_size"))
    curve.fit_target_size = cfg.at("fit_target_size").get<std::size_t>();
  const CurveFindings findings =
      analyze_curve(curve, cfg.value("balanced_w", 0.5));
  emit_or_print(opts, "findings.json", findings_to_json(findings).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted multi-source risk minimization toolkit"};
  app.require_subcommand(1);
  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "JSON configuration file");
  app.add_option("--seed", opts.seed, "override the config seed");
  app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--threads", opts.threads, "worker thread count");
  app.add_option("--format", opts.format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* synthesize = app.add_subcommand("synthesize", "draw a dataset from a domain spec");
  auto* erm = app.add_subcommand("erm", "fit the weighted least-squares model");
  auto* divergence = app.add_subcommand("divergence", "between-domain divergences");
  auto* complexity = app.add_subcommand("complexity", "covers, entropy and Rademacher estimates");
  auto* bound = app.add_subcommand("bound", "evaluate a generalization bound");
  auto* deviate = app.add_subcommand("deviate", "Monte Carlo deviation-inequality check");
  auto* symmetrize = app.add_subcommand("symmetrize", "Monte Carlo symmetrization check");
  auto* experiment = app.add_subcommand("experiment", "run the convergence experiment");
  auto* analyze = app.add_subcommand("analyze", "summarize a convergence curve");
  // Global flags are accepted before or after the subcommand name.
  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (synthesize->parsed()) return cmd_synthesize(opts);
    if (erm->parsed()) return cmd_erm(opts);
    if (divergence->parsed()) return cmd_divergence(opts);
    if (complexity->parsed()) return cmd_complexity(opts);
    if (bound->parsed()) return cmd_bound(opts);
    if (deviate->parsed()) return cmd_deviate(opts);
    if (symmetrize->parsed()) return cmd_symmetrize(opts);
    if (experiment->parsed()) return cmd_experiment(opts);
    if (analyze->parsed()) return cmd_analyze(opts);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_variant_access&) {
    std::cerr << "config error: wrong domain spec kind for this subcommand\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}
