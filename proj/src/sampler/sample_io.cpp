// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/sampler/sample_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "varitune/error.hpp"
#include "varitune/sampler/interactions.hpp"

namespace varitune::sampler {
namespace {

using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

}  // namespace

std::string sample_to_json(const fm::FeatureModel& model, const Sample& sample) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : sample.configurations) {
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : c.parameters) params[k] = v;
    arr.push_back({{"id", c.id},
                   {"selected", c.selected_names(model)},
                   {"parameters", params}});
  }
  return arr.dump(2) + "\n";
}

std::string sample_meta_to_json(const Sample& sample) {
  ordered_json meta = {{"strategy", strategy_name(sample.strategy)},
                       {"seed", sample.seed},
                       {"coverage", sample.coverage},
                       {"size", sample.size()},
                       {"t", sample.t},
                       {"valid_interactions", sample.valid_interactions},
                       {"covered_interactions", sample.covered_interactions},
                       {"exhausted", sample.exhausted}};
  return meta.dump(2) + "\n";
}

Sample sample_from_json(const fm::FeatureModel& model, const std::string& text,
                        std::size_t t) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("sample is not valid JSON: {}", e.what()));
  }
  if (!doc.is_array()) throw ValidationError("sample must be a JSON array");
  Sample sample;
  sample.strategy = Strategy::kCombined;
  std::set<std::string> ids;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
        !entry.contains("selected") || !entry["selected"].is_array()) {
      throw ValidationError("sample entry needs string 'id' and array 'selected'");
    }
    const std::string id = entry["id"].get<std::string>();
    if (!ids.insert(id).second) {
      throw ValidationError(fmt::format("duplicate configuration id '{}'", id));
    }
    std::vector<char> assignment(model.size(), 0);
    for (const auto& name : entry["selected"]) {
      if (!name.is_string()) throw ValidationError("selected names must be strings");
      const auto index = model.find(name.get<std::string>());
      if (!index) {
        throw ValidationError(fmt::format("configuration '{}': unknown feature '{}'",
                                          id, name.get<std::string>()));
      }
      assignment[*index] = 1;
    }
    if (!logic::is_valid(model, assignment)) {
      throw ValidationError(fmt::format("configuration '{}' is not valid", id));
    }
    sample.configurations.push_back(
        logic::make_configuration(model, std::move(assignment), id));
  }
  logic::Reasoner reasoner(model);
  const InteractionSpace space(reasoner, t);
  sample.t = t;
  sample.valid_interactions = space.valid_count();
  sample.covered_interactions = space.covered_count(sample.configurations);
  sample.coverage = space.coverage(sample.configurations);
  return sample;
}

Sample load_sample(const fm::FeatureModel& model,
                   const std::filesystem::path& path, std::size_t t) {
  Sample sample = sample_from_json(model, read_file(path), t);
  const auto meta_path = path.parent_path() / "sample-meta.json";
  if (std::filesystem::exists(meta_path)) {
    try {
      const auto meta = nlohmann::json::parse(read_file(meta_path));
      if (meta.contains("strategy")) {
        sample.strategy = parse_strategy(meta["strategy"].get<std::string>());
      }
      if (meta.contains("seed")) sample.seed = meta["seed"].get<std::uint64_t>();
      if (meta.contains("exhausted")) sample.exhausted = meta["exhausted"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(fmt::format("{}: {}", meta_path.string(), e.what()));
    }
  }
  return sample;
}

void write_sample(const fm::FeatureModel& model, const Sample& sample,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "sample.json", sample_to_json(model, sample));
  write_file(dir / "sample-meta.json", sample_meta_to_json(sample));
}

}  // namespace varitune::sampler
