// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "varitune/sampler/sampler.hpp"

namespace varitune::sampler {

// JSON array of {"id", "selected": [names], "parameters": {k: v}}.
std::string sample_to_json(const fm::FeatureModel& model, const Sample& sample);
// Sidecar: strategy, seed, coverage, size, t, valid/covered counts, exhausted.
std::string sample_meta_to_json(const Sample& sample);

// Parses a sample array against `model`. Names must exist, ids must be
// unique and every configuration must be valid; each violation throws
// ValidationError. Strategy and seed default to combined / 0; coverage
// statistics are recomputed.
Sample sample_from_json(const fm::FeatureModel& model, const std::string& text,
                        std::size_t t = 2);

// Loads `path`, and `sample-meta.json` next to it for strategy and seed if
// present.
Sample load_sample(const fm::FeatureModel& model,
                   const std::filesystem::path& path, std::size_t t = 2);

// Writes sample.json and sample-meta.json into `dir`.
void write_sample(const fm::FeatureModel& model, const Sample& sample,
                  const std::filesystem::path& dir);

}  // namespace varitune::sampler
