// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/fm/feature_model.hpp"

#include <fmt/format.h>

#include <cctype>
#include <utility>

#include "varitune/error.hpp"

namespace varitune::fm {
namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '-';
}

void remap(Formula& formula, const std::vector<std::size_t>& old_to_new) {
  if (formula.op == Formula::Op::kVar) {
    formula.feature = old_to_new[formula.feature];
    return;
  }
  for (Formula& f : formula.operands) remap(f, old_to_new);
}

}  // namespace

bool is_valid_feature_name(std::string_view name) {
  if (name.empty() || !is_name_start(name.front())) return false;
  for (char c : name) {
    if (!is_name_char(c)) return false;
  }
  return true;
}

FeatureModel::FeatureModel(std::vector<Feature> features,
                           std::vector<Formula> constraints) {
  if (features.empty()) throw ValidationError("feature model has no root");
  if (features[0].parent) throw ValidationError("root feature has a parent");
  const std::size_t n = features.size();

  // Pre-order walk; also detects cycles and unreachable features.
  std::vector<std::size_t> order;
  std::vector<std::size_t> old_to_new(n, n);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t current = stack.back();
    stack.pop_back();
    if (old_to_new[current] != n) {
      throw ValidationError(
          fmt::format("feature '{}' is reachable twice", features[current].name));
    }
    old_to_new[current] = order.size();
    order.push_back(current);
    const auto& kids = features[current].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (*it >= n) throw ValidationError("child index out of range");
      if (features[*it].parent != current) {
        throw ValidationError(fmt::format(
            "feature '{}' has inconsistent parent link", features[*it].name));
      }
      stack.push_back(*it);
    }
  }
  if (order.size() != n) {
    throw ValidationError("feature tree has unreachable features");
  }

  features_.reserve(n);
  for (std::size_t old_index : order) {
    Feature f = std::move(features[old_index]);
    if (f.parent) f.parent = old_to_new[*f.parent];
    for (std::size_t& child : f.children) child = old_to_new[child];
    features_.push_back(std::move(f));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Feature& f = features_[i];
    if (!is_valid_feature_name(f.name)) {
      throw ValidationError(fmt::format("invalid feature name '{}'", f.name));
    }
    if (!by_name_.emplace(f.name, i).second) {
      throw ValidationError(fmt::format("duplicate feature name '{}'", f.name));
    }
    if (f.group != GroupKind::kNone && f.children.empty()) {
      throw ValidationError(
          fmt::format("group feature '{}' has no children", f.name));
    }
    if (f.is_abstract && f.attribute) {
      throw ValidationError(
          fmt::format("abstract feature '{}' carries an attribute", f.name));
    }
    if (!f.parent) {
      if (i != 0) throw ValidationError("multiple roots");
      if (f.edge != EdgeKind::kMandatory) {
        throw ValidationError("root feature must be mandatory");
      }
    } else {
      const bool grouped_parent =
          features_[*f.parent].group != GroupKind::kNone;
      if (grouped_parent != (f.edge == EdgeKind::kGrouped)) {
        throw ValidationError(fmt::format(
            "feature '{}': grouped edges must match the parent's group",
            f.name));
      }
    }
    if (!f.is_abstract) concrete_.push_back(i);
  }

  for (Formula& formula : constraints) {
    std::vector<std::size_t> leaves;
    formula.collect_features(leaves);
    for (std::size_t leaf : leaves) {
      if (leaf >= n) throw ValidationError("constraint references unknown feature");
    }
    remap(formula, old_to_new);
  }
  constraints_ = std::move(constraints);
}

std::optional<std::size_t> FeatureModel::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureModel::index_of(std::string_view name) const {
  if (auto index = find(name)) return *index;
  throw ValidationError(fmt::format("unknown feature '{}'", name));
}

std::vector<std::string> FeatureModel::concrete_features() const {
  std::vector<std::string> names;
  names.reserve(concrete_.size());
  for (std::size_t i : concrete_) names.push_back(features_[i].name);
  return names;
}

ModelBuilder::ModelBuilder(std::string root_name, bool is_abstract) {
  Feature root;
  root.name = std::move(root_name);
  root.is_abstract = is_abstract;
  features_.push_back(std::move(root));
}

std::size_t ModelBuilder::add(std::size_t parent, std::string name,
                              EdgeKind edge, bool is_abstract,
                              std::optional<Attribute> attribute) {
  Feature f;
  f.name = std::move(name);
  f.edge = edge;
  f.is_abstract = is_abstract;
  f.attribute = std::move(attribute);
  f.parent = parent;
  const std::size_t index = features_.size();
  features_.push_back(std::move(f));
  features_[parent].children.push_back(index);
  return index;
}

void ModelBuilder::set_group(std::size_t feature, GroupKind group) {
  features_[feature].group = group;
}

void ModelBuilder::set_abstract(std::size_t feature, bool is_abstract) {
  features_[feature].is_abstract = is_abstract;
}

void ModelBuilder::add_constraint(Formula formula) {
  constraints_.push_back(std::move(formula));
}

FeatureModel ModelBuilder::build() const {
  return FeatureModel(features_, constraints_);
}

}  // namespace varitune::fm
