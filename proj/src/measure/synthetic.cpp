// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/measure/synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "varitune/error.hpp"
#include "varitune/random.hpp"

namespace varitune::measure {
namespace {

using nlohmann::json;

MetricValues read_values(const json& obj, std::string_view where) {
  if (!obj.is_object()) throw ValidationError(fmt::format("{} must be an object", where));
  MetricValues v{};
  for (const auto& [key, value] : obj.items()) {
    if (key == "features") continue;
    if (!value.is_number()) {
      throw ValidationError(fmt::format("{}: '{}' must be a number", where, key));
    }
    v[static_cast<std::size_t>(parse_metric(key))] = value.get<double>();
  }
  return v;
}

std::size_t feature_index(const fm::FeatureModel& model, const json& name) {
  if (!name.is_string()) throw ValidationError("feature names must be strings");
  const auto index = model.find(name.get<std::string>());
  if (!index) {
    throw ValidationError(
        fmt::format("effect table: unknown feature '{}'", name.get<std::string>()));
  }
  return *index;
}

}  // namespace

EffectTable parse_effect_table(const fm::FeatureModel& model, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("effect table is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ValidationError("effect table must be a JSON object");
  EffectTable table;
  if (doc.contains("base")) table.base = read_values(doc["base"], "base");
  if (doc.contains("features")) {
    if (!doc["features"].is_object()) throw ValidationError("features must be an object");
    for (const auto& [name, deltas] : doc["features"].items()) {
      table.features.push_back({feature_index(model, name), read_values(deltas, name)});
    }
    std::sort(table.features.begin(), table.features.end(),
              [](const auto& a, const auto& b) { return a.feature < b.feature; });
  }
  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array()) throw ValidationError("pairs must be an array");
    for (const auto& entry : doc["pairs"]) {
      if (!entry.is_object() || !entry.contains("features") ||
          !entry["features"].is_array() || entry["features"].size() != 2) {
        throw ValidationError("each pair needs a two-element 'features' array");
      }
      const std::size_t a = feature_index(model, entry["features"][0]);
      const std::size_t b = feature_index(model, entry["features"][1]);
      if (a == b) throw ValidationError("pair features must differ");
      table.pairs.push_back({std::min(a, b), std::max(a, b), read_values(entry, "pair")});
    }
  }
  double relative = 0.02;
  if (doc.contains("noise_relative")) relative = doc["noise_relative"].get<double>();
  if (relative < 0) throw ValidationError("noise_relative must be >= 0");
  for (std::size_t m = 0; m < 3; ++m) table.noise_sigma[m] = relative * std::abs(table.base[m]);
  if (doc.contains("noise")) {
    const MetricValues given = read_values(doc["noise"], "noise");
    for (const auto& [key, value] : doc["noise"].items()) {
      const auto m = static_cast<std::size_t>(parse_metric(key));
      if (given[m] < 0) throw ValidationError("noise sigma must be >= 0");
      table.noise_sigma[m] = given[m];
    }
  }
  if (doc.contains("idle_power_w")) table.idle_power_w = doc["idle_power_w"].get<double>();
  if (table.idle_power_w < 0) throw ValidationError("idle_power_w must be >= 0");
  return table;
}

EffectTable load_effect_table(const fm::FeatureModel& model,
                              const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_effect_table(model, buf.str());
}

SynthOracle::SynthOracle(EffectTable table, std::uint64_t noise_seed)
    : table_(std::move(table)), seed_(noise_seed) {}

MetricValues SynthOracle::expected(const logic::Configuration& config) const {
  MetricValues v = table_.base;
  for (const auto& e : table_.features) {
    if (!config.selected(e.feature)) continue;
    for (std::size_t m = 0; m < 3; ++m) v[m] += e.delta[m];
  }
  for (const auto& e : table_.pairs) {
    if (!config.selected(e.first) || !config.selected(e.second)) continue;
    for (std::size_t m = 0; m < 3; ++m) v[m] += e.delta[m];
  }
  return v;
}

MetricValues SynthOracle::measure(const logic::Configuration& config,
                                  int repetition) const {
  MetricValues v = expected(config);
  const std::string_view bytes(config.assignment.data(), config.assignment.size());
  Rng rng(mix_seed(seed_ ^ mix_seed(stable_hash(bytes) +
                                    static_cast<std::uint64_t>(repetition))));
  for (std::size_t m = 0; m < 3; ++m) {
    const double z = rng.normal();
    if (table_.noise_sigma[m] > 0) v[m] += table_.noise_sigma[m] * z;
  }
  v[0] = std::max(0.0, v[0]);
  v[1] = std::max(0.0, v[1]);
  v[2] = std::clamp(v[2], 0.0, 1.0);
  return v;
}

std::vector<MeasurementRecord> synthesize(const SynthOracle& oracle,
                                          const sampler::Sample& sample,
                                          int repetitions) {
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  std::vector<MeasurementRecord> out;
  for (const auto& c : sample.configurations) {
    for (int rep = 1; rep <= repetitions; ++rep) {
      MeasurementRecord r;
      r.config_id = c.id;
      r.repetition = rep;
      r.metrics = oracle.measure(c, rep);
      r.idle_power_w = oracle.table().idle_power_w;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace varitune::measure
