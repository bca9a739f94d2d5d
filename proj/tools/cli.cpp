// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "varitune/analysis/impact.hpp"
#include "varitune/analysis/pareto.hpp"
#include "varitune/analysis/report.hpp"
#include "varitune/error.hpp"
#include "varitune/fm/dsl.hpp"
#include "varitune/learn/evaluate.hpp"
#include "varitune/learn/forest.hpp"
#include "varitune/logic/reasoner.hpp"
#include "varitune/measure/dataset.hpp"
#include "varitune/measure/measure.hpp"
#include "varitune/measure/synthetic.hpp"
#include "varitune/random.hpp"
#include "varitune/sampler/sample_io.hpp"
#include "varitune/sampler/sampler.hpp"

namespace varitune::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using measure::Metric;

struct Options {
  std::string model;
  std::string sample;
  std::string measurements;
  std::string effects;
  std::string forest;
  std::string manifest;
  std::optional<std::string> out;
  std::vector<std::string> strategies;
  std::vector<std::string> metrics;
  std::vector<std::string> select;
  std::vector<std::string> deselect;
  std::optional<std::string> anchor;
  std::optional<std::size_t> n;
  std::optional<std::string> label;
  std::uint64_t seed = 1;
  std::size_t t = 2;
  int reps = 1;
  double max_energy = 70.0;
  bool drop_zero_accuracy = true;
  bool feature_wise = false;
  bool pair_wise = false;
  std::size_t folds = 5;
  double split = 0.8;
  unsigned jobs = 1;
  std::string bands = "30,45";
  std::string grid = "default";
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

std::string content_hash(const fs::path& path) {
  return fmt::format("{:016x}", stable_hash(read_text(path)));
}

std::uint64_t counting_budget() {
  const char* env = std::getenv("VARITUNE_BUDGET_DECISIONS");
  if (!env || !*env) return logic::CountOptions{}.decision_budget;
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(env, &used);
    if (used != std::string_view(env).size()) throw std::invalid_argument(env);
    return value;
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("VARITUNE_BUDGET_DECISIONS='{}' is not an integer", env));
  }
}

// Records the inputs, parameters and tool version of a run. The output
// directory and wall-clock time are left out so equal inputs give equal
// bytes wherever the run writes.
class RunRecord {
 public:
  explicit RunRecord(const std::string& command) {
    json_["tool"] = "varitune";
    json_["version"] = VARITUNE_VERSION;
    json_["command"] = command;
    json_["inputs"] = ordered_json::object();
    json_["parameters"] = ordered_json::object();
  }

  void input(const std::string& key, const std::string& path) {
    json_["inputs"][key] = {{"path", path}, {"hash", content_hash(path)}};
  }
  ordered_json& parameters() { return json_["parameters"]; }
  ordered_json& root() { return json_; }

  void write(const fs::path& dir) const { write_text(dir / "manifest.json", json_.dump(2) + "\n"); }

 private:
  ordered_json json_;
};

std::vector<double> parse_bands(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("band threshold '{}' is not a number", item));
    }
  }
  return out;
}

learn::Grid grid_named(const std::string& name) {
  if (name == "default") return {};
  if (name == "quick") {
    learn::Grid g;
    g.n_trees = {50};
    g.max_depth = {8, std::nullopt};
    g.min_leaf = {1};
    g.features_per_split = {1.0};
    return g;
  }
  throw ValidationError(fmt::format("unknown grid '{}' (expected default or quick)", name));
}

std::vector<Metric> metrics_of(const std::vector<std::string>& names) {
  if (names.empty()) return {measure::kMetrics.begin(), measure::kMetrics.end()};
  std::vector<Metric> out;
  for (const auto& n : names) out.push_back(measure::parse_metric(n));
  return out;
}

Metric single_metric(const Options& o) {
  if (o.metrics.size() > 1) throw ValidationError("give a single --metric");
  return o.metrics.empty() ? Metric::kEnergy : measure::parse_metric(o.metrics[0]);
}

void emit_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(err, "warning: {}\n", w);
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(fmt::format("{} is required", flag));
  return value;
}

logic::PartialAssignment partial_of(const Options& o) {
  logic::PartialAssignment p;
  for (const auto& s : o.select) p[s] = true;
  for (const auto& s : o.deselect) {
    if (p.count(s)) throw ValidationError(fmt::format("'{}' is both selected and deselected", s));
    p[s] = false;
  }
  return p;
}

// Everything derived from (model, sample, measurements).
struct Loaded {
  fm::FeatureModel model;
  sampler::Sample sample;
  std::vector<measure::AggregatedPoint> points;
  measure::Dataset dataset;
};

Loaded derive(fm::FeatureModel model, sampler::Sample sample,
              const std::vector<measure::MeasurementRecord>& records, std::ostream& err) {
  std::vector<std::string> warnings;
  auto points = measure::aggregate(records, &warnings);
  auto dataset = measure::build_dataset(model, sample, points, &warnings);
  emit_warnings(err, warnings);
  return {std::move(model), std::move(sample), std::move(points), std::move(dataset)};
}

Loaded load_measured(const Options& o, RunRecord& record, std::ostream& err) {
  auto model = fm::load_model(require(o.model, "--model"));
  auto sample = sampler::load_sample(model, require(o.sample, "--sample"), o.t);
  const auto records = measure::ingest_csv(require(o.measurements, "--measurements"), sample);
  record.input("model", o.model);
  record.input("sample", o.sample);
  record.input("measurements", o.measurements);
  return derive(std::move(model), std::move(sample), records, err);
}

sampler::Sample draw_sample(const fm::FeatureModel& model, const std::vector<std::string>& names,
                            std::uint64_t seed, std::size_t t, std::optional<std::size_t> n) {
  if (names.empty()) throw ValidationError("at least one --strategy is required");
  std::vector<sampler::Sample> parts;
  for (const auto& name : names) {
    switch (sampler::parse_strategy(name)) {
      case sampler::Strategy::kRandom:
        parts.push_back(sampler::sample_random(model, n, seed, t));
        break;
      case sampler::Strategy::kGreedy2Wise:
        parts.push_back(sampler::sample_twise_greedy(model, t, seed));
        break;
      case sampler::Strategy::kIncremental2Wise:
        parts.push_back(sampler::sample_twise_incremental(model, t, seed));
        break;
      case sampler::Strategy::kCombined:
        throw ValidationError("'combined' is not a sampling strategy; list several instead");
    }
  }
  if (parts.size() == 1) return std::move(parts[0]);
  return sampler::merge_samples(model, parts, t);
}

analysis::ParetoResult front_of(const Loaded& l, const analysis::ParetoFilters& filters) {
  return analysis::pareto_front(analysis::pareto_points(l.points), filters);
}

std::string model_summary(const fm::FeatureModel& model) {
  return fmt::format("{} features ({} concrete, {} abstract), {} constraints", model.size(),
                     model.concrete_indices().size(),
                     model.size() - model.concrete_indices().size(), model.constraints().size());
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  fmt::print(out, "model: {}\n", model_summary(model));
  logic::Reasoner reasoner(model);
  const bool sat = reasoner.satisfiable();
  fmt::print(out, "satisfiable: {}\n", sat ? "yes" : "no");
  if (!sat) return 2;
  if (o.select.empty() && o.deselect.empty()) return 0;
  const bool valid = logic::is_valid(model, partial_of(o));
  fmt::print(out, "assignment: {}\n", valid ? "valid" : "invalid");
  return valid ? 0 : 2;
}

int cmd_count(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  logic::CountOptions options;
  options.decision_budget = counting_budget();
  fmt::print(out, "{}\n", logic::count_models(model, options).str());
  return 0;
}

int cmd_dead(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  for (const auto& name : logic::dead_features(model)) fmt::print(out, "{}\n", name);
  return 0;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  const auto sample = draw_sample(model, o.strategies, o.seed, o.t, o.n);
  const fs::path dir = o.out.value_or(".");
  sampler::write_sample(model, sample, dir);
  RunRecord record("sample");
  record.input("model", o.model);
  record.parameters() = {{"strategies", o.strategies}, {"seed", o.seed}, {"t", o.t}};
  if (o.n) record.parameters()["n"] = *o.n;
  record.write(dir);
  fmt::print(out, "{} configurations, coverage {} ({}/{} {}-wise interactions){}\n",
             sample.size(), sample.coverage, sample.covered_interactions,
             sample.valid_interactions, sample.t, sample.exhausted ? ", exhausted" : "");
  return 0;
}

int cmd_coverage(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  const auto sample = sampler::load_sample(model, require(o.sample, "--sample"), o.t);
  fmt::print(out, "coverage: {} ({}/{} {}-wise interactions)\n", sample.coverage,
             sample.covered_interactions, sample.valid_interactions, o.t);
  return 0;
}

int cmd_measure_synth(const Options& o, std::ostream& out) {
  const auto model = fm::load_model(require(o.model, "--model"));
  const auto sample = sampler::load_sample(model, require(o.sample, "--sample"), o.t);
  const measure::SynthOracle oracle(
      measure::load_effect_table(model, require(o.effects, "--effects")), o.seed);
  const auto records = measure::synthesize(oracle, sample, o.reps);
  const fs::path dir = o.out.value_or(".");
  write_text(dir / "measurements.csv", measure::format_csv(records));
  RunRecord record("measure-synth");
  record.input("model", o.model);
  record.input("sample", o.sample);
  record.input("effects", o.effects);
  record.parameters() = {{"seed", o.seed}, {"repetitions", o.reps}};
  record.write(dir);
  fmt::print(out, "{} measurement rows\n", records.size());
  return 0;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  RunRecord record("analyze");
  const auto l = load_measured(o, record, err);
  const Metric metric = single_metric(o);
  const bool pairs = o.pair_wise || o.anchor.has_value();
  const bool features = o.feature_wise || !pairs;
  const fs::path dir = o.out.value_or(".");
  std::string md;
  if (features) {
    const auto entries = analysis::feature_wise(l.dataset, metric);
    write_text(dir / "impacts.csv", analysis::impacts_csv(entries));
    md += analysis::impacts_markdown(
        entries, fmt::format("Feature-wise impact on {}", measure::metric_name(metric)));
  }
  if (pairs) {
    const auto entries = analysis::pair_wise(l.dataset, metric, o.anchor);
    write_text(dir / "pair-impacts.csv", analysis::impacts_csv(entries));
    md += analysis::impacts_markdown(
        entries, o.anchor ? fmt::format("Pairwise impact on {} with {}",
                                        measure::metric_name(metric), *o.anchor)
                          : fmt::format("Pairwise impact on {}", measure::metric_name(metric)));
  }
  write_text(dir / "impacts.md", md);
  record.parameters() = {{"metric", measure::metric_name(metric)},
                         {"feature_wise", features},
                         {"pair_wise", pairs}};
  if (o.anchor) record.parameters()["anchor"] = *o.anchor;
  record.write(dir);
  out << md;
  return 0;
}

analysis::ParetoFilters filters_of(const Options& o) {
  analysis::ParetoFilters f;
  f.drop_zero_accuracy = o.drop_zero_accuracy;
  f.max_energy_kj = o.max_energy;
  return f;
}

int cmd_pareto(const Options& o, std::ostream& out, std::ostream& err) {
  RunRecord record("pareto");
  const auto l = load_measured(o, record, err);
  const auto result = front_of(l, filters_of(o));
  const auto bands = analysis::objective_profiles(result.front(), l.sample, parse_bands(o.bands));
  const fs::path dir = o.out.value_or(".");
  write_text(dir / "pareto.csv", analysis::pareto_csv(result));
  write_text(dir / "pareto.svg", analysis::pareto_svg(result));
  write_text(dir / "profiles.md", analysis::profiles_markdown(bands));
  record.parameters() = {{"max_energy_kj", o.max_energy},
                         {"drop_zero_accuracy", o.drop_zero_accuracy},
                         {"bands", parse_bands(o.bands)}};
  record.write(dir);
  fmt::print(out, "front: {} of {} points ({} excluded)\n", result.front().size(),
             result.points.size(), result.excluded.size());
  return 0;
}

struct Trained {
  learn::ForestModel forest;
  learn::GridResult grid;
  learn::EvalReport report;
};

Trained train_and_evaluate(const measure::Dataset& ds, Metric metric, const Options& o,
                           const std::string& label, std::ostream& err) {
  auto [train, test] = learn::split_train_test(ds, o.split, o.seed);
  auto grid = learn::grid_search_cv(train, metric, grid_named(o.grid), o.folds, o.seed, o.jobs);
  std::vector<std::string> warnings;
  auto forest = learn::train_forest(train, metric, grid.best, o.seed, o.jobs, &warnings);
  emit_warnings(err, warnings);
  auto report = learn::evaluate(forest, test);
  report.split_seed = o.seed;
  report.sampler_label = label;
  return {std::move(forest), std::move(grid), std::move(report)};
}

std::string label_of(const sampler::Sample& s, const std::optional<std::string>& label) {
  return label.value_or(std::string(sampler::strategy_name(s.strategy)));
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  RunRecord record("train");
  const auto l = load_measured(o, record, err);
  const Metric metric = single_metric(o);
  const auto t = train_and_evaluate(l.dataset, metric, o, label_of(l.sample, o.label), err);
  const fs::path dir = o.out.value_or(".");
  write_text(dir / "forest.json", learn::forest_to_json(t.forest));
  write_text(dir / "eval.json", learn::report_to_json(t.report, metric));
  write_text(dir / "eval.md", learn::report_markdown_header() + learn::report_markdown_row(t.report));
  write_text(dir / "cv.md", learn::cv_table_markdown(t.grid));
  record.parameters() = {{"metric", measure::metric_name(metric)}, {"seed", o.seed},
                         {"split", o.split},  {"folds", o.folds},
                         {"grid", o.grid},    {"label", t.report.sampler_label}};
  record.write(dir);
  out << learn::report_markdown_header() << learn::report_markdown_row(t.report);
  return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const auto forest = learn::forest_from_json(read_text(require(o.forest, "--forest")));
  const auto model = fm::load_model(require(o.model, "--model"));
  if (forest.feature_basis != model.concrete_features()) {
    throw ValidationError("forest feature basis does not match the model's concrete features");
  }
  std::string csv = "config_id,prediction\n";
  if (!o.sample.empty()) {
    const auto sample = sampler::load_sample(model, o.sample, o.t);
    for (const auto& c : sample.configurations) {
      csv += fmt::format("{},{}\n", c.id, forest.predict(measure::feature_vector(model, c)));
    }
  } else {
    if (o.select.empty()) throw ValidationError("give --sample or --select");
    // Unlisted concrete features are deselected; abstract ones follow.
    logic::PartialAssignment partial;
    for (const auto& name : model.concrete_features()) partial[name] = false;
    for (const auto& name : o.select) {
      if (!model.find(name)) throw ValidationError(fmt::format("unknown feature '{}'", name));
      partial[name] = true;
    }
    if (!logic::is_valid(model, partial)) {
      throw ValidationError("the selected features do not form a valid configuration");
    }
    const auto config = logic::complete(model, partial, o.seed);
    csv += fmt::format("query,{}\n", forest.predict(measure::feature_vector(model, config)));
  }
  out << csv;
  if (o.out) {
    write_text(fs::path(*o.out) / "predictions.csv", csv);
    RunRecord record("predict");
    record.input("forest", o.forest);
    record.input("model", o.model);
    if (!o.sample.empty()) record.input("sample", o.sample);
    if (!o.select.empty()) record.parameters()["select"] = o.select;
    record.write(*o.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportPlan {
  std::vector<Metric> metrics;
  std::optional<std::string> anchor;
  analysis::ParetoFilters filters;
  std::vector<double> bands;
  bool learn = false;
  bool per_sampler = false;
  std::vector<std::string> strategies;
};

std::string pct(double v) { return fmt::format("{:.4f}", v); }

std::string build_report(const Loaded& l, const ReportPlan& plan, const Options& o,
                         const fs::path& dir, std::ostream& err) {
  std::string md = "# Varitune report\n\n## Model\n\n";
  md += fmt::format("- {}\n", model_summary(l.model));
  try {
    logic::CountOptions options;
    options.decision_budget = counting_budget();
    md += fmt::format("- valid configurations: {}\n", logic::count_models(l.model, options).str());
  } catch (const BudgetExceeded&) {
    md += "- valid configurations: not counted (decision budget exceeded)\n";
  }
  const auto dead = logic::dead_features(l.model);
  md += fmt::format("- dead features: {}\n", dead.empty() ? "none" : fmt::format("{}", fmt::join(dead, ", ")));

  md += "\n## Sample\n\n";
  md += fmt::format("- strategy: {}\n- configurations: {}\n- {}-wise coverage: {} ({}/{})\n",
                    sampler::strategy_name(l.sample.strategy), l.sample.size(), l.sample.t,
                    pct(l.sample.coverage), l.sample.covered_interactions,
                    l.sample.valid_interactions);
  md += fmt::format("- measured configurations: {}\n", l.dataset.size());

  md += "\n## Feature-wise impact\n\n";
  for (Metric m : plan.metrics) {
    const auto entries = analysis::feature_wise(l.dataset, m);
    write_text(dir / fmt::format("impacts-{}.csv", measure::metric_name(m)),
               analysis::impacts_csv(entries));
    md += analysis::impacts_markdown(entries, std::string(measure::metric_name(m)), 5);
  }
  if (plan.anchor) {
    md += fmt::format("## Pairwise impact with {}\n\n", *plan.anchor);
    for (Metric m : plan.metrics) {
      const auto entries = analysis::pair_wise(l.dataset, m, plan.anchor);
      write_text(dir / fmt::format("pair-impacts-{}.csv", measure::metric_name(m)),
                 analysis::impacts_csv(entries));
      md += analysis::impacts_markdown(entries, std::string(measure::metric_name(m)), 5);
    }
  }

  md += "## Energy / accuracy trade-offs\n\n";
  const auto result = front_of(l, plan.filters);
  write_text(dir / "pareto.csv", analysis::pareto_csv(result));
  write_text(dir / "pareto.svg", analysis::pareto_svg(result));
  md += fmt::format("- Pareto front: {} of {} configurations ({} excluded by filters)\n\n",
                    result.front().size(), result.points.size(), result.excluded.size());
  const auto profiles = analysis::objective_profiles(result.front(), l.sample, plan.bands);
  write_text(dir / "profiles.md", analysis::profiles_markdown(profiles));
  md += analysis::profiles_markdown(profiles) + "\n";

  if (plan.learn) {
    md += "## Prediction\n\n";
    for (Metric m : plan.metrics) {
      md += fmt::format("### {}\n\n{}", measure::metric_name(m), learn::report_markdown_header());
      std::vector<std::pair<std::string, measure::Dataset>> sets;
      if (plan.per_sampler && plan.strategies.size() > 1) {
        for (const auto& name : plan.strategies) {
          measure::Dataset part;
          part.feature_basis = l.dataset.feature_basis;
          // Ids carry the strategy's one-letter prefix.
          for (const auto& row : l.dataset.rows) {
            if (row.config_id[0] == name[0]) part.rows.push_back(row);
          }
          sets.emplace_back(name, std::move(part));
        }
      }
      sets.emplace_back(plan.strategies.size() > 1 ? "ALL" : label_of(l.sample, std::nullopt),
                        l.dataset);
      for (const auto& [label, ds] : sets) {
        const auto t = train_and_evaluate(ds, m, o, label, err);
        const std::string stem = fmt::format("{}-{}", measure::metric_name(m), label);
        write_text(dir / fmt::format("forest-{}.json", stem), learn::forest_to_json(t.forest));
        write_text(dir / fmt::format("eval-{}.json", stem), learn::report_to_json(t.report, m));
        write_text(dir / fmt::format("cv-{}.md", stem), learn::cv_table_markdown(t.grid));
        md += learn::report_markdown_row(t.report);
      }
      md += "\n";
    }
  }
  write_text(dir / "report.md", md);
  return md;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

int cmd_report_manifest(const Options& cli, std::ostream& out, std::ostream& err) {
  const fs::path manifest_path(cli.manifest);
  ordered_json m;
  try {
    m = ordered_json::parse(read_text(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", cli.manifest, e.what()));
  }
  const fs::path base = manifest_path.parent_path();
  try {
    Options o = cli;
    o.model = resolve(base, m.at("model").get<std::string>()).string();
    o.strategies = m.value("strategies", std::vector<std::string>{"random", "greedy2wise",
                                                                  "incremental2wise"});
    o.seed = m.value("seed", o.seed);
    o.t = m.value("t", o.t);
    if (m.contains("n")) o.n = m["n"].get<std::size_t>();
    ReportPlan plan;
    plan.metrics = metrics_of(m.value("metrics", std::vector<std::string>{}));
    if (m.contains("anchor")) plan.anchor = m["anchor"].get<std::string>();
    const auto filters = m.value("filters", ordered_json::object());
    plan.filters.drop_zero_accuracy = filters.value("drop_zero_accuracy", true);
    plan.filters.max_energy_kj = filters.value("max_energy_kj", 70.0);
    plan.bands = m.value("bands", std::vector<double>{30.0, 45.0});
    plan.strategies = o.strategies;
    if (m.contains("learn")) {
      const auto& lj = m["learn"];
      plan.learn = true;
      o.split = lj.value("split", o.split);
      o.folds = lj.value("folds", o.folds);
      o.grid = lj.value("grid", o.grid);
      plan.per_sampler = lj.value("per_sampler", false);
    }
    fs::path dir = cli.out ? fs::path(*cli.out)
                           : resolve(base, m.value("output", std::string("report")));

    RunRecord record("report");
    record.root()["run"] = m;
    record.root()["run"].erase("output");
    record.root().erase("parameters");
    record.input("model", o.model);
    auto model = fm::load_model(o.model);
    auto sample = draw_sample(model, o.strategies, o.seed, o.t, o.n);
    sampler::write_sample(model, sample, dir / "sample");

    const auto& source = m.at("measurements");
    std::vector<measure::MeasurementRecord> records;
    if (source.contains("csv")) {
      const auto path = resolve(base, source["csv"].get<std::string>());
      record.input("measurements", path.string());
      records = measure::ingest_csv(path, sample);
    } else if (source.contains("synthetic")) {
      const auto path = resolve(base, source["synthetic"].get<std::string>());
      record.input("effects", path.string());
      const measure::SynthOracle oracle(measure::load_effect_table(model, path), o.seed);
      records = measure::synthesize(oracle, sample, source.value("repetitions", 1));
    } else {
      throw ValidationError("measurements needs a 'csv' or 'synthetic' entry");
    }
    write_text(dir / "measurements.csv", measure::format_csv(records));
    // Input paths are recorded relative to the manifest so the record does
    // not depend on where the run was launched from.
    for (auto& [key, value] : record.root()["inputs"].items()) {
      value["path"] = fs::path(value["path"].get<std::string>()).lexically_relative(base).string();
    }
    const auto loaded = derive(std::move(model), std::move(sample), records, err);
    build_report(loaded, plan, o, dir, err);
    record.write(dir);
    fmt::print(out, "report written ({} configurations)\n", loaded.sample.size());
    return 0;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", cli.manifest, e.what()));
  }
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.manifest.empty()) return cmd_report_manifest(o, out, err);
  RunRecord record("report");
  const auto l = load_measured(o, record, err);
  ReportPlan plan;
  plan.metrics = metrics_of(o.metrics);
  plan.anchor = o.anchor;
  plan.filters = filters_of(o);
  plan.bands = parse_bands(o.bands);
  const fs::path dir = o.out.value_or(".");
  build_report(l, plan, o, dir, err);
  record.parameters() = {{"metrics", o.metrics}, {"bands", plan.bands},
                         {"max_energy_kj", o.max_energy}, {"drop_zero_accuracy", o.drop_zero_accuracy}};
  if (o.anchor) record.parameters()["anchor"] = *o.anchor;
  record.write(dir);
  fmt::print(out, "report written to {}\n", (dir / "report.md").string());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Configuration-space toolkit for text-generation inference settings", "varitune"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VARITUNE_VERSION);
  Options o;

  const auto model = [&](CLI::App* c) { c->add_option("-m,--model", o.model, "Feature model")->required(); };
  const auto sample = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--sample", o.sample, "Sample JSON");
    if (required) opt->required();
  };
  const auto measured = [&](CLI::App* c) {
    model(c);
    sample(c, true);
    c->add_option("--measurements", o.measurements, "Measurement CSV")->required();
  };
  const auto out_dir = [&](CLI::App* c) { c->add_option("-o,--out", o.out, "Output directory"); };
  const auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed"); };
  const auto strength = [&](CLI::App* c) {
    c->add_option("-t", o.t, "Interaction strength")->check(CLI::Range(1, 6));
  };
  const auto metric = [&](CLI::App* c) {
    c->add_option("--metric", o.metrics, "energy_kj, latency_s or pass_at_1");
  };
  const auto filters = [&](CLI::App* c) {
    c->add_option("--max-energy", o.max_energy, "Drop points above this energy (kJ)");
    c->add_flag("--drop-zero-accuracy,!--keep-zero-accuracy", o.drop_zero_accuracy,
                "Drop points with pass@1 = 0");
    c->add_option("--bands", o.bands, "Energy band thresholds, comma separated");
  };
  const auto learning = [&](CLI::App* c) {
    c->add_option("--split", o.split, "Training fraction");
    c->add_option("--folds", o.folds, "Cross-validation folds");
    c->add_option("--grid", o.grid, "Hyperparameter grid: default or quick");
    c->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Validate a model and optionally an assignment");
  model(check);
  check->add_option("--select", o.select, "Features set to true")->delimiter(',');
  check->add_option("--deselect", o.deselect, "Features set to false")->delimiter(',');
  auto* count = app.add_subcommand("count", "Count valid configurations");
  model(count);
  auto* dead = app.add_subcommand("dead", "List dead features");
  model(dead);
  auto* samp = app.add_subcommand("sample", "Sample configurations");
  model(samp);
  samp->add_option("-s,--strategy", o.strategies, "random, greedy2wise or incremental2wise")
      ->required();
  samp->add_option("-n", o.n, "Random sample size");
  seed(samp);
  strength(samp);
  out_dir(samp);
  auto* cov = app.add_subcommand("coverage", "Interaction coverage of a sample");
  model(cov);
  sample(cov, true);
  strength(cov);
  auto* synth = app.add_subcommand("measure-synth", "Synthesize measurements from an effect table");
  model(synth);
  sample(synth, true);
  synth->add_option("--effects", o.effects, "Effect table JSON")->required();
  synth->add_option("--reps", o.reps, "Repetitions per configuration")->check(CLI::PositiveNumber);
  seed(synth);
  out_dir(synth);
  auto* analyze = app.add_subcommand("analyze", "Feature-wise and pairwise impact analysis");
  measured(analyze);
  metric(analyze);
  analyze->add_flag("--feature-wise", o.feature_wise, "Feature-wise analysis");
  analyze->add_flag("--pair-wise", o.pair_wise, "Pairwise analysis");
  analyze->add_option("--anchor", o.anchor, "Condition pairwise analysis on a feature");
  out_dir(analyze);
  auto* pareto = app.add_subcommand("pareto", "Energy / accuracy Pareto front");
  measured(pareto);
  filters(pareto);
  out_dir(pareto);
  auto* train = app.add_subcommand("train", "Train and evaluate a random forest");
  measured(train);
  metric(train);
  learning(train);
  seed(train);
  train->add_option("--label", o.label, "Sampler label for the evaluation table");
  out_dir(train);
  auto* predict = app.add_subcommand("predict", "Predict a metric with a trained forest");
  predict->add_option("--forest", o.forest, "Forest JSON")->required();
  model(predict);
  sample(predict, false);
  predict->add_option("--select", o.select, "Selected features of one configuration")
      ->delimiter(',');
  out_dir(predict);
  auto* report = app.add_subcommand("report", "Pipeline report");
  report->add_option("--manifest", o.manifest, "Run manifest JSON");
  report->add_option("-m,--model", o.model, "Feature model");
  report->add_option("--sample", o.sample, "Sample JSON");
  report->add_option("--measurements", o.measurements, "Measurement CSV");
  metric(report);
  report->add_option("--anchor", o.anchor, "Anchor feature for pairwise tables");
  filters(report);
  learning(report);
  seed(report);
  out_dir(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*count) return cmd_count(o, out);
    if (*dead) return cmd_dead(o, out);
    if (*samp) return cmd_sample(o, out);
    if (*cov) return cmd_coverage(o, out);
    if (*synth) return cmd_measure_synth(o, out);
    if (*analyze) return cmd_analyze(o, out, err);
    if (*pareto) return cmd_pareto(o, out, err);
    if (*train) return cmd_train(o, out, err);
    if (*predict) return cmd_predict(o, out);
    if (*report) return cmd_report(o, out, err);
  } catch (const ValidationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  } catch (const BudgetExceeded& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace varitune::cli
