// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "varitune/fm/formula.hpp"

namespace varitune::fm {

enum class GroupKind { kNone, kOr, kAlternative };

// Relation of a feature to its parent. The root carries kMandatory.
enum class EdgeKind { kMandatory, kOptional, kGrouped };

// Hyperparameter setting emitted when the feature is selected.
struct Attribute {
  std::string param;
  std::string value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Feature {
  std::string name;
  bool is_abstract = false;
  GroupKind group = GroupKind::kNone;
  EdgeKind edge = EdgeKind::kMandatory;
  std::optional<Attribute> attribute;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;

  friend bool operator==(const Feature&, const Feature&) = default;
};

bool is_valid_feature_name(std::string_view name);

// Immutable feature tree plus cross-tree constraints. Features are stored in
// document (pre-)order; index 0 is the root.
class FeatureModel {
 public:
  // Validates every invariant and throws ValidationError on violation.
  // Features may be given in any order as long as parent links form a tree
  // rooted at index 0; they are renumbered into pre-order and constraint
  // leaves are remapped accordingly.
  FeatureModel(std::vector<Feature> features, std::vector<Formula> constraints);

  std::size_t size() const { return features_.size(); }
  const Feature& feature(std::size_t index) const { return features_[index]; }
  const Feature& root() const { return features_.front(); }
  const std::vector<Feature>& features() const { return features_; }
  const std::vector<Formula>& constraints() const { return constraints_; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws ValidationError for unknown names.
  std::size_t index_of(std::string_view name) const;

  // Non-abstract features in document order.
  const std::vector<std::size_t>& concrete_indices() const { return concrete_; }
  std::vector<std::string> concrete_features() const;

  friend bool operator==(const FeatureModel& a, const FeatureModel& b) {
    return a.features_ == b.features_ && a.constraints_ == b.constraints_;
  }

 private:
  std::vector<Feature> features_;
  std::vector<Formula> constraints_;
  std::vector<std::size_t> concrete_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

// Incremental construction helper used by generators and tests.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::string root_name, bool is_abstract = true);

  std::size_t add(std::size_t parent, std::string name, EdgeKind edge,
                  bool is_abstract = false,
                  std::optional<Attribute> attribute = std::nullopt);
  void set_group(std::size_t feature, GroupKind group);
  void set_abstract(std::size_t feature, bool is_abstract);
  void add_constraint(Formula formula);

  std::size_t size() const { return features_.size(); }

  FeatureModel build() const;

 private:
  std::vector<Feature> features_;
  std::vector<Formula> constraints_;
};

}  // namespace varitune::fm
