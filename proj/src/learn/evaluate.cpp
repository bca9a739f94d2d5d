// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/learn/evaluate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "varitune/error.hpp"
#include "varitune/random.hpp"

namespace varitune::learn {
namespace {

measure::Dataset subset(const measure::Dataset& ds, const std::vector<std::size_t>& rows) {
  measure::Dataset out;
  out.feature_basis = ds.feature_basis;
  for (std::size_t r : rows) out.rows.push_back(ds.rows[r]);
  return out;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : "n/a";
}

}  // namespace

EvalReport evaluate_predictions(std::span<const double> y, std::span<const double> predicted) {
  if (y.empty()) throw ValidationError("evaluation needs at least one test row");
  if (y.size() != predicted.size()) throw ValidationError("prediction count mismatch");
  const double n = static_cast<double>(y.size());
  double sum = 0.0;
  for (double v : y) sum += v;
  const double mean = sum / n;
  double ss_tot = 0.0, ss_res = 0.0;
  bool has_zero = false;
  std::vector<double> abs_err, rel_err;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - predicted[i]) * (y[i] - predicted[i]);
    const double err = std::abs(predicted[i] - y[i]);
    abs_err.push_back(err);
    if (y[i] == 0.0) {
      has_zero = true;
    } else {
      rel_err.push_back(err / std::abs(y[i]));
    }
  }
  // Sorted sums make MAE and MAPE independent of row order.
  const auto sorted_sum = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  const double abs_sum = sorted_sum(abs_err);
  const double rel_sum = sorted_sum(rel_err);
  EvalReport r;
  r.n_test = y.size();
  r.mae = abs_sum / n;
  std::vector<std::string> notes;
  if (ss_tot > 0.0) {
    r.r2 = 1.0 - ss_res / ss_tot;
  } else {
    notes.push_back("R2 undefined: test targets are constant");
  }
  if (!has_zero) {
    r.mape = rel_sum / n;
  } else {
    notes.push_back("MAPE omitted: a test target is zero");
  }
  for (const auto& s : notes) r.note += (r.note.empty() ? "" : "; ") + s;
  return r;
}

EvalReport evaluate(const ForestModel& model, const measure::Dataset& test) {
  const auto predicted = predict_all(model, test);
  const auto y = test.target(model.target_metric);
  return evaluate_predictions(y, predicted);
}

std::string report_to_json(const EvalReport& r, measure::Metric metric) {
  nlohmann::ordered_json j;
  j["target_metric"] = measure::metric_name(metric);
  j["sampler"] = r.sampler_label;
  j["split_seed"] = r.split_seed;
  j["n_test"] = r.n_test;
  j["mae"] = r.mae;
  j["r2"] = r.r2 ? nlohmann::ordered_json(*r.r2) : nlohmann::ordered_json();
  j["mape"] = r.mape ? nlohmann::ordered_json(*r.mape) : nlohmann::ordered_json();
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2) + "\n";
}

std::string report_markdown_header() {
  return "| Sampler | MAE | R² | MAPE |\n|---|---:|---:|---:|\n";
}

std::string report_markdown_row(const EvalReport& r) {
  return fmt::format("| {} | {:.2f} | {} | {} |\n", r.sampler_label, r.mae,
                     optional_number(r.r2), optional_number(r.mape));
}

std::pair<measure::Dataset, measure::Dataset> split_train_test(const measure::Dataset& ds,
                                                               double fraction,
                                                               std::uint64_t seed) {
  const std::size_t n = ds.rows.size();
  if (n < 5) throw ValidationError(fmt::format("train/test split needs >= 5 rows, got {}", n));
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("split fraction must be in (0, 1)");
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
  if (n_train == 0 || n_train == n) throw ValidationError("split leaves an empty part");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(mix_seed(seed));
  rng.shuffle(order);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {subset(ds, train), subset(ds, test)};
}

std::vector<std::size_t> fold_assignment(std::size_t rows, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  if (rows < k) throw ValidationError(fmt::format("{} rows cannot fill {} folds", rows, k));
  std::vector<std::size_t> order(rows);
  for (std::size_t i = 0; i < rows; ++i) order[i] = i;
  Rng rng(mix_seed(seed ^ 0x9e3779b97f4a7c15ULL));
  rng.shuffle(order);
  std::vector<std::size_t> fold(rows);
  for (std::size_t i = 0; i < rows; ++i) fold[order[i]] = i % k;
  return fold;
}

std::vector<Hyperparams> Grid::points() const {
  std::vector<Hyperparams> out;
  for (auto t : n_trees) {
    for (auto d : max_depth) {
      for (auto l : min_leaf) {
        for (auto f : features_per_split) {
          Hyperparams hp;
          hp.n_trees = t;
          hp.max_depth = d;
          hp.min_leaf = l;
          hp.features_per_split = f;
          out.push_back(hp);
        }
      }
    }
  }
  return out;
}

GridResult grid_search_cv(const measure::Dataset& ds, measure::Metric metric,
                          const Grid& grid, std::size_t k, std::uint64_t seed,
                          unsigned jobs) {
  const auto fold = fold_assignment(ds.rows.size(), k, seed);
  const auto points = grid.points();
  if (points.empty()) throw ValidationError("hyperparameter grid is empty");
  std::vector<std::pair<measure::Dataset, measure::Dataset>> splits;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    splits.emplace_back(subset(ds, train), subset(ds, test));
  }
  GridResult result;
  std::size_t best = 0;
  for (std::size_t g = 0; g < points.size(); ++g) {
    validate(points[g]);
    CvRow row;
    row.hyperparams = points[g];
    double r2_sum = 0.0, mae_sum = 0.0;
    std::size_t r2_count = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const auto model = train_forest(splits[f].first, metric, points[g],
                                      mix_seed(seed + f + 1), jobs);
      const auto report = evaluate(model, splits[f].second);
      mae_sum += report.mae;
      if (report.r2) {
        r2_sum += *report.r2;
        ++r2_count;
      }
    }
    if (r2_count > 0) row.mean_r2 = r2_sum / static_cast<double>(r2_count);
    row.mean_mae = mae_sum / static_cast<double>(k);
    result.table.push_back(row);
    const CvRow& incumbent = result.table[best];
    const auto r2_key = [](const CvRow& r) {
      return r.mean_r2.value_or(-std::numeric_limits<double>::infinity());
    };
    if (r2_key(row) > r2_key(incumbent) ||
        (r2_key(row) == r2_key(incumbent) && row.mean_mae < incumbent.mean_mae)) {
      best = g;
    }
  }
  result.best = result.table[best].hyperparams;
  return result;
}

std::string cv_table_markdown(const GridResult& result) {
  std::string out = "| Hyperparameters | CV R² | CV MAE | |\n|---|---:|---:|---|\n";
  for (const auto& row : result.table) {
    out += fmt::format("| {} | {} | {:.4f} | {} |\n", describe(row.hyperparams),
                       row.mean_r2 ? fmt::format("{:.4f}", *row.mean_r2) : "n/a", row.mean_mae,
                       row.hyperparams == result.best ? "best" : "");
  }
  return out;
}

}  // namespace varitune::learn
