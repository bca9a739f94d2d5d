// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "varitune/fm/feature_model.hpp"
#include "varitune/logic/reasoner.hpp"
#include "varitune/measure/measure.hpp"
#include "varitune/sampler/sampler.hpp"

namespace varitune::measure {

struct DatasetRow {
  std::string config_id;
  std::vector<char> features;  // over Dataset::feature_basis
  MetricValues targets{};
};

// Design matrix for analysis and learning; the basis is the model's
// concrete features in document order.
struct Dataset {
  std::vector<std::string> feature_basis;
  std::vector<DatasetRow> rows;

  std::vector<double> target(Metric metric) const;
  std::size_t size() const { return rows.size(); }
};

// Concrete-feature vector of a configuration.
std::vector<char> feature_vector(const fm::FeatureModel& model,
                                 const logic::Configuration& config);

// Rows in sample order. Sampled configs without an aggregated point are
// dropped with a warning; points whose id is not in the sample throw
// ValidationError.
Dataset build_dataset(const fm::FeatureModel& model, const sampler::Sample& sample,
                      const std::vector<AggregatedPoint>& points,
                      std::vector<std::string>* warnings = nullptr);

}  // namespace varitune::measure
