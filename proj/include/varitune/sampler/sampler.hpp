// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varitune/fm/feature_model.hpp"
#include "varitune/logic/reasoner.hpp"

namespace varitune::sampler {

// kCombined labels the union of several strategies' samples.
enum class Strategy { kRandom, kGreedy2Wise, kIncremental2Wise, kCombined };

std::string_view strategy_name(Strategy strategy);
// Throws ValidationError for unknown names.
Strategy parse_strategy(std::string_view name);

struct Sample {
  Strategy strategy = Strategy::kRandom;
  std::vector<logic::Configuration> configurations;
  std::uint64_t seed = 0;
  std::size_t t = 2;
  std::size_t valid_interactions = 0;
  std::size_t covered_interactions = 0;
  double coverage = 0.0;
  // Random sampling could not find n distinct configurations by drawing.
  bool exhausted = false;

  std::size_t size() const { return configurations.size(); }
};

// Draws configurations with a randomized solver heuristic and removes
// duplicates. Not uniform over the configuration space. Default n is the
// model's total feature count. When drawing stalls, distinct configurations
// are enumerated instead and the sample is flagged exhausted (if fewer than
// n exist it holds all of them).
Sample sample_random(const fm::FeatureModel& model, std::optional<std::size_t> n,
                     std::uint64_t seed, std::size_t t = 2);

// Covering construction: each new configuration starts from the lowest-index
// uncovered interaction and absorbs every further uncovered interaction
// (in index order) that stays satisfiable, then is completed by the solver.
Sample sample_twise_greedy(const fm::FeatureModel& model, std::size_t t,
                           std::uint64_t seed);

// Partial-configuration merging: interactions (in seeded order) join the
// first compatible partial configuration or open a new one; partials are
// completed at the end.
Sample sample_twise_incremental(const fm::FeatureModel& model, std::size_t t,
                                std::uint64_t seed);

double coverage_of(const fm::FeatureModel& model,
                   const std::vector<logic::Configuration>& configs,
                   std::size_t t = 2);

// Union in argument order; configurations already present are dropped.
Sample merge_samples(const fm::FeatureModel& model,
                     const std::vector<Sample>& samples, std::size_t t = 2);

}  // namespace varitune::sampler
