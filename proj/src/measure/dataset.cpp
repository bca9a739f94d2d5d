// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/measure/dataset.hpp"

#include <fmt/format.h>

#include <map>

#include "varitune/error.hpp"

namespace varitune::measure {

std::vector<double> Dataset::target(Metric metric) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.targets[static_cast<std::size_t>(metric)]);
  return out;
}

std::vector<char> feature_vector(const fm::FeatureModel& model,
                                 const logic::Configuration& config) {
  std::vector<char> out;
  for (std::size_t i : model.concrete_indices()) out.push_back(config.selected(i) ? 1 : 0);
  return out;
}

Dataset build_dataset(const fm::FeatureModel& model, const sampler::Sample& sample,
                      const std::vector<AggregatedPoint>& points,
                      std::vector<std::string>* warnings) {
  std::map<std::string, const AggregatedPoint*> by_id;
  for (const auto& p : points) by_id[p.config_id] = &p;
  std::map<std::string, const logic::Configuration*> in_sample;
  for (const auto& c : sample.configurations) in_sample[c.id] = &c;
  for (const auto& p : points) {
    if (!in_sample.count(p.config_id)) {
      throw ValidationError(
          fmt::format("measured config '{}' is not in the sample", p.config_id));
    }
  }

  Dataset ds;
  ds.feature_basis = model.concrete_features();
  for (const auto& c : sample.configurations) {
    const auto it = by_id.find(c.id);
    if (it == by_id.end()) {
      if (warnings) {
        warnings->push_back(
            fmt::format("config '{}' has no measurements; dropped from dataset", c.id));
      }
      continue;
    }
    ds.rows.push_back({c.id, feature_vector(model, c), it->second->mean});
  }
  return ds;
}

}  // namespace varitune::measure
