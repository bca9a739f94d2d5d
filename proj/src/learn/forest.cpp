// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/learn/forest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "varitune/error.hpp"
#include "varitune/random.hpp"

namespace varitune::learn {
namespace {

using nlohmann::ordered_json;

struct Builder {
  const measure::Dataset& ds;
  const std::vector<double>& y;
  const Hyperparams& hp;
  std::vector<std::size_t> candidates;  // features that vary in the data
  std::size_t per_split;
  Rng rng;
  Tree tree;

  double mean_of(const std::vector<std::size_t>& rows) const {
    double sum = 0.0;
    for (std::size_t r : rows) sum += y[r];
    return sum / static_cast<double>(rows.size());
  }

  double sse_of(const std::vector<std::size_t>& rows) const {
    const double m = mean_of(rows);
    double ss = 0.0;
    for (std::size_t r : rows) ss += (y[r] - m) * (y[r] - m);
    return ss;
  }

  std::uint32_t leaf(const std::vector<std::size_t>& rows) {
    TreeNode node;
    node.value = mean_of(rows);
    node.count = rows.size();
    tree.push_back(node);
    return static_cast<std::uint32_t>(tree.size() - 1);
  }

  std::uint32_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    const double parent_sse = sse_of(rows);
    if (parent_sse == 0.0 || (hp.max_depth && depth >= *hp.max_depth) ||
        rows.size() < 2 * hp.min_leaf) {
      return leaf(rows);
    }
    // Random subset without replacement, tried in ascending index order so
    // ties go to the lowest feature.
    std::vector<std::size_t> tried = candidates;
    if (per_split < tried.size()) {
      for (std::size_t i = 0; i < per_split; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(tried.size() - i));
        std::swap(tried[i], tried[j]);
      }
      tried.resize(per_split);
      std::sort(tried.begin(), tried.end());
    }
    int best = -1;
    double best_sse = 0.0;
    std::vector<std::size_t> lo, hi;
    for (std::size_t f : tried) {
      lo.clear();
      hi.clear();
      for (std::size_t r : rows) (ds.rows[r].features[f] ? hi : lo).push_back(r);
      if (lo.size() < hp.min_leaf || hi.size() < hp.min_leaf) continue;
      const double sse = sse_of(lo) + sse_of(hi);
      if (best < 0 || sse < best_sse) {
        best = static_cast<int>(f);
        best_sse = sse;
      }
    }
    if (best < 0) return leaf(rows);
    lo.clear();
    hi.clear();
    for (std::size_t r : rows) (ds.rows[r].features[best] ? hi : lo).push_back(r);
    const auto index = static_cast<std::uint32_t>(tree.size());
    tree.push_back({});
    tree[index].feature = best;
    tree[index].count = rows.size();
    const std::uint32_t left = grow(lo, depth + 1);
    const std::uint32_t right = grow(hi, depth + 1);
    tree[index].left = left;
    tree[index].right = right;
    return index;
  }
};

ordered_json tree_to_json(const Tree& tree, std::uint32_t node) {
  const TreeNode& n = tree[node];
  if (n.is_leaf()) return {{"leaf", n.value}, {"count", n.count}};
  return {{"f", n.feature}, {"l", tree_to_json(tree, n.left)},
          {"r", tree_to_json(tree, n.right)}};
}

// Rebuilds nodes in the same pre-order the builder emits.
std::uint32_t tree_from_json(const ordered_json& j, std::size_t basis, Tree& tree) {
  if (!j.is_object()) throw ValidationError("tree node must be an object");
  const auto index = static_cast<std::uint32_t>(tree.size());
  tree.push_back({});
  if (j.contains("leaf")) {
    tree[index].value = j.at("leaf").get<double>();
    tree[index].count = j.at("count").get<std::size_t>();
    return index;
  }
  const int f = j.at("f").get<int>();
  if (f < 0 || static_cast<std::size_t>(f) >= basis) {
    throw ValidationError(fmt::format("split feature {} outside the basis", f));
  }
  tree[index].feature = f;
  const std::uint32_t left = tree_from_json(j.at("l"), basis, tree);
  const std::uint32_t right = tree_from_json(j.at("r"), basis, tree);
  tree[index].left = left;
  tree[index].right = right;
  tree[index].count = tree[left].count + tree[right].count;
  return index;
}

}  // namespace

void validate(const Hyperparams& hp) {
  if (hp.n_trees < 1) throw ValidationError("n_trees must be >= 1");
  if (hp.max_depth && *hp.max_depth < 1) throw ValidationError("max_depth must be >= 1");
  if (hp.min_leaf < 1) throw ValidationError("min_leaf must be >= 1");
  if (!(hp.features_per_split > 0.0 && hp.features_per_split <= 1.0)) {
    throw ValidationError("features_per_split must be in (0, 1]");
  }
}

std::string describe(const Hyperparams& hp) {
  return fmt::format("n_trees={} max_depth={} min_leaf={} features_per_split={:.3g}{}",
                     hp.n_trees, hp.max_depth ? fmt::format("{}", *hp.max_depth) : "none",
                     hp.min_leaf, hp.features_per_split, hp.bootstrap ? "" : " no-bootstrap");
}

double predict_tree(const Tree& tree, std::span<const char> x) {
  std::uint32_t node = 0;
  while (!tree[node].is_leaf()) {
    node = x[static_cast<std::size_t>(tree[node].feature)] ? tree[node].right : tree[node].left;
  }
  return tree[node].value;
}

double ForestModel::predict(std::span<const char> x) const {
  if (x.size() != feature_basis.size()) {
    throw ValidationError(fmt::format("feature vector has {} entries; model basis has {}",
                                      x.size(), feature_basis.size()));
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += predict_tree(t, x);
  return sum / static_cast<double>(trees.size());
}

ForestModel train_forest(const measure::Dataset& ds, measure::Metric metric,
                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs,
                         std::vector<std::string>* warnings) {
  validate(hp);
  if (ds.rows.size() < 2) throw ValidationError("training needs at least 2 rows");
  const std::size_t p = ds.feature_basis.size();
  for (const auto& r : ds.rows) {
    if (r.features.size() != p) throw ValidationError("dataset row does not match its basis");
  }
  const std::vector<double> y = ds.target(metric);
  std::vector<std::size_t> candidates;
  for (std::size_t f = 0; f < p; ++f) {
    const char first = ds.rows[0].features[f];
    for (const auto& r : ds.rows) {
      if (r.features[f] != first) {
        candidates.push_back(f);
        break;
      }
    }
  }
  if (candidates.empty() && warnings) {
    warnings->push_back("no feature varies in the training data; predictor is constant");
  }
  const std::size_t per_split = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(hp.features_per_split * static_cast<double>(p) + 1e-9)));

  ForestModel model;
  model.hyperparams = hp;
  model.feature_basis = ds.feature_basis;
  model.train_seed = seed;
  model.target_metric = metric;
  model.trees.resize(hp.n_trees);

  const auto build = [&](std::size_t t) {
    Builder b{ds, y, hp, candidates, per_split, Rng(mix_seed(seed ^ mix_seed(t + 1))), {}};
    std::vector<std::size_t> rows(ds.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i] = hp.bootstrap ? static_cast<std::size_t>(b.rng.below(rows.size())) : i;
    }
    b.grow(rows, 0);
    model.trees[t] = std::move(b.tree);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(hp.n_trees)));
  if (workers == 1) {
    for (std::size_t t = 0; t < hp.n_trees; ++t) build(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < hp.n_trees; t += workers) build(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return model;
}

std::vector<double> predict_all(const ForestModel& model, const measure::Dataset& ds) {
  if (ds.feature_basis != model.feature_basis) {
    throw ValidationError("dataset basis does not match the model basis");
  }
  std::vector<double> out;
  out.reserve(ds.rows.size());
  for (const auto& r : ds.rows) out.push_back(model.predict(r.features));
  return out;
}

std::string forest_to_json(const ForestModel& model) {
  const Hyperparams& hp = model.hyperparams;
  ordered_json j;
  j["hyperparams"] = {{"n_trees", hp.n_trees},
                      {"max_depth", hp.max_depth ? ordered_json(*hp.max_depth) : ordered_json()},
                      {"min_leaf", hp.min_leaf},
                      {"features_per_split", hp.features_per_split},
                      {"bootstrap", hp.bootstrap}};
  j["feature_basis"] = model.feature_basis;
  j["trees"] = ordered_json::array();
  for (const auto& t : model.trees) j["trees"].push_back(tree_to_json(t, 0));
  j["train_seed"] = model.train_seed;
  j["target_metric"] = measure::metric_name(model.target_metric);
  return j.dump() + "\n";
}

ForestModel forest_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    ForestModel model;
    const auto& h = j.at("hyperparams");
    model.hyperparams.n_trees = h.at("n_trees").get<std::size_t>();
    if (!h.at("max_depth").is_null()) model.hyperparams.max_depth = h.at("max_depth").get<std::size_t>();
    model.hyperparams.min_leaf = h.at("min_leaf").get<std::size_t>();
    model.hyperparams.features_per_split = h.at("features_per_split").get<double>();
    model.hyperparams.bootstrap = h.value("bootstrap", true);
    validate(model.hyperparams);
    model.feature_basis = j.at("feature_basis").get<std::vector<std::string>>();
    for (const auto& t : j.at("trees")) {
      Tree tree;
      tree_from_json(t, model.feature_basis.size(), tree);
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.size() != model.hyperparams.n_trees) {
      throw ValidationError("tree count does not match n_trees");
    }
    model.train_seed = j.at("train_seed").get<std::uint64_t>();
    model.target_metric = measure::parse_metric(j.at("target_metric").get<std::string>());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("malformed forest model: {}", e.what()));
  }
}

}  // namespace varitune::learn
