// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varitune/measure/dataset.hpp"

namespace varitune::analysis {

struct ImpactEntry {
  std::vector<std::string> features;  // one feature, or a pair
  std::optional<std::string> anchor;
  measure::Metric metric = measure::Metric::kEnergy;
  double delta = 0.0;
  double mean_with = 0.0;
  double mean_without = 0.0;
  std::size_t support_with = 0;
  std::size_t support_without = 0;

  bool insufficient_support() const { return support_with == 0 || support_without == 0; }
  // "a" or "a & b".
  std::string subject() const;
};

// delta(f) = mean(metric | f) - mean(metric | !f) for every basis feature.
// Entries with support are ranked by |delta| descending, ties by subject;
// insufficient-support entries follow in basis order with delta 0.
// Means are summed in value order, so row order never changes a result.
// Throws ValidationError on an empty dataset.
std::vector<ImpactEntry> feature_wise(const measure::Dataset& dataset,
                                      measure::Metric metric);

// With an anchor: rows restricted to the anchor, delta(g) = mean(anchor & g)
// - mean(anchor & !g) for each other feature g. Without: every unordered
// pair, delta = mean(both) - mean(not both). Ranked as feature_wise.
// Throws ValidationError if the anchor is unknown or selected in fewer than
// two rows.
std::vector<ImpactEntry> pair_wise(const measure::Dataset& dataset,
                                   measure::Metric metric,
                                   const std::optional<std::string>& anchor);

}  // namespace varitune::analysis
