// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varitune/learn/forest.hpp"

namespace varitune::learn {

struct EvalReport {
  std::optional<double> r2;  // empty when the test targets are constant
  double mae = 0.0;
  std::optional<double> mape;  // empty when a test target is 0
  std::string note;            // why r2 or mape is missing
  std::size_t n_test = 0;
  std::uint64_t split_seed = 0;
  std::string sampler_label;
};

// Throws ValidationError on empty or mismatched input.
EvalReport evaluate_predictions(std::span<const double> y, std::span<const double> predicted);
EvalReport evaluate(const ForestModel& model, const measure::Dataset& test);

std::string report_to_json(const EvalReport& report, measure::Metric metric);
// | label | MAE | R² | MAPE |
std::string report_markdown_row(const EvalReport& report);
std::string report_markdown_header();

// Seeded shuffle; train takes floor(n * fraction) rows. Both parts keep the
// dataset's row order. Throws ValidationError for fewer than 5 rows, a
// fraction outside (0, 1) or an empty part.
std::pair<measure::Dataset, measure::Dataset> split_train_test(const measure::Dataset& dataset,
                                                               double fraction,
                                                               std::uint64_t seed);

// fold_of[i] for row i: shuffled rows dealt round-robin into k folds.
std::vector<std::size_t> fold_assignment(std::size_t rows, std::size_t k, std::uint64_t seed);

struct Grid {
  std::vector<std::size_t> n_trees = {100, 300};
  std::vector<std::optional<std::size_t>> max_depth = {8, 16, std::nullopt};
  std::vector<std::size_t> min_leaf = {1, 3};
  std::vector<double> features_per_split = {1.0, 1.0 / 3.0};

  // Nested in field order, last field fastest.
  std::vector<Hyperparams> points() const;
};

struct CvRow {
  Hyperparams hyperparams;
  std::optional<double> mean_r2;  // over folds with a defined R²
  double mean_mae = 0.0;
};

struct GridResult {
  Hyperparams best;
  std::vector<CvRow> table;  // grid order
};

// Exhaustive k-fold search; best = highest mean R², then lower MAE, then
// grid order. Throws ValidationError when k < 2 or rows < k.
GridResult grid_search_cv(const measure::Dataset& dataset, measure::Metric metric,
                          const Grid& grid, std::size_t k, std::uint64_t seed,
                          unsigned jobs = 1);

std::string cv_table_markdown(const GridResult& result);

}  // namespace varitune::learn
