// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "varitune/fm/feature_model.hpp"
#include "varitune/logic/reasoner.hpp"
#include "varitune/measure/measure.hpp"

namespace varitune::measure {

// Additive ground truth for synthetic measurements. JSON form:
//   {"base": {"energy_kj": 20, ...},
//    "features": {"cache_offloaded": {"energy_kj": 89.48}},
//    "pairs": [{"features": ["a", "b"], "energy_kj": 5}],
//    "noise": {"energy_kj": 0.4},    // absolute sigma per metric
//    "noise_relative": 0.02,         // sigma = fraction of base otherwise
//    "idle_power_w": 0}
// Missing metrics default to 0; missing noise defaults to 2% of base.
struct EffectTable {
  struct FeatureEffect {
    std::size_t feature;
    MetricValues delta{};
  };
  struct PairEffect {
    std::size_t first;
    std::size_t second;
    MetricValues delta{};
  };

  MetricValues base{};
  std::vector<FeatureEffect> features;
  std::vector<PairEffect> pairs;
  MetricValues noise_sigma{};
  double idle_power_w = 0.0;
};

// Throws ValidationError on unknown feature names or malformed JSON.
EffectTable parse_effect_table(const fm::FeatureModel& model, const std::string& json);
EffectTable load_effect_table(const fm::FeatureModel& model,
                              const std::filesystem::path& path);

// Pure function of (configuration, repetition): the noise stream is seeded
// from the noise seed, the assignment bytes and the repetition, so call
// order never matters and the object can be shared across threads.
class SynthOracle {
 public:
  SynthOracle(EffectTable table, std::uint64_t noise_seed);

  // Noise-free value: base + feature deltas + pair deltas.
  MetricValues expected(const logic::Configuration& config) const;
  // Expected value plus Gaussian noise. Energy and latency are clamped at 0,
  // pass@1 to [0, 1].
  MetricValues measure(const logic::Configuration& config, int repetition = 1) const;

  const EffectTable& table() const { return table_; }

 private:
  EffectTable table_;
  std::uint64_t seed_;
};

// One ok record per (configuration, repetition), in sample order.
std::vector<MeasurementRecord> synthesize(const SynthOracle& oracle,
                                          const sampler::Sample& sample,
                                          int repetitions);

}  // namespace varitune::measure
