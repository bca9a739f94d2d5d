// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varitune/measure/dataset.hpp"

namespace varitune::learn {

struct Hyperparams {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // empty: grow until pure
  std::size_t min_leaf = 1;
  double features_per_split = 1.0;  // fraction of the basis tried per node
  bool bootstrap = true;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Throws ValidationError unless n_trees >= 1, max_depth >= 1, min_leaf >= 1
// and 0 < features_per_split <= 1.
void validate(const Hyperparams& hp);
std::string describe(const Hyperparams& hp);

// Flat tree: node 0 is the root. A split sends unselected rows left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  // leaf mean
  std::size_t count = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

using Tree = std::vector<TreeNode>;

double predict_tree(const Tree& tree, std::span<const char> x);

struct ForestModel {
  Hyperparams hyperparams;
  std::vector<std::string> feature_basis;
  std::vector<Tree> trees;
  std::uint64_t train_seed = 0;
  measure::Metric target_metric = measure::Metric::kEnergy;

  // Mean over trees. Throws ValidationError on a basis-length mismatch.
  double predict(std::span<const char> x) const;
};

// Bootstrap forest of SSE-minimizing trees. Tree i draws from its own
// stream derived from (seed, i), so any `jobs` count yields the same model.
// Throws ValidationError on fewer than 2 rows or invalid hyperparameters.
// A basis without any varying feature yields constant trees and a warning.
ForestModel train_forest(const measure::Dataset& dataset, measure::Metric metric,
                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs = 1,
                         std::vector<std::string>* warnings = nullptr);

// Predicts rows of `dataset`, checking its basis matches the model's.
std::vector<double> predict_all(const ForestModel& model, const measure::Dataset& dataset);

std::string forest_to_json(const ForestModel& model);
// Throws ValidationError on malformed or inconsistent input.
ForestModel forest_from_json(const std::string& text);

}  // namespace varitune::learn
