// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/analysis/impact.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "varitune/error.hpp"

namespace varitune::analysis {
namespace {

double order_free_mean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

template <typename Pred>
ImpactEntry contrast(const measure::Dataset& ds, const std::vector<std::size_t>& rows,
                     measure::Metric metric, Pred&& with) {
  std::vector<double> in, out;
  const auto m = static_cast<std::size_t>(metric);
  for (std::size_t r : rows) {
    (with(ds.rows[r]) ? in : out).push_back(ds.rows[r].targets[m]);
  }
  ImpactEntry e;
  e.metric = metric;
  e.support_with = in.size();
  e.support_without = out.size();
  if (!in.empty()) e.mean_with = order_free_mean(in);
  if (!out.empty()) e.mean_without = order_free_mean(out);
  if (!e.insufficient_support()) e.delta = e.mean_with - e.mean_without;
  return e;
}

std::vector<ImpactEntry> rank(std::vector<ImpactEntry> entries) {
  std::stable_partition(entries.begin(), entries.end(),
                        [](const ImpactEntry& e) { return !e.insufficient_support(); });
  const auto end = std::find_if(entries.begin(), entries.end(),
                                [](const ImpactEntry& e) { return e.insufficient_support(); });
  std::sort(entries.begin(), end, [](const ImpactEntry& a, const ImpactEntry& b) {
    const double x = std::abs(a.delta), y = std::abs(b.delta);
    if (x != y) return x > y;
    return a.subject() < b.subject();
  });
  return entries;
}

void require_rows(const measure::Dataset& ds) {
  if (ds.rows.empty()) throw ValidationError("dataset is empty");
}

}  // namespace

std::string ImpactEntry::subject() const {
  return features.size() == 1 ? features[0] : fmt::format("{} & {}", features[0], features[1]);
}

std::vector<ImpactEntry> feature_wise(const measure::Dataset& ds, measure::Metric metric) {
  require_rows(ds);
  std::vector<std::size_t> all(ds.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<ImpactEntry> entries;
  for (std::size_t f = 0; f < ds.feature_basis.size(); ++f) {
    auto e = contrast(ds, all, metric,
                      [f](const measure::DatasetRow& r) { return r.features[f] != 0; });
    e.features = {ds.feature_basis[f]};
    entries.push_back(std::move(e));
  }
  return rank(std::move(entries));
}

std::vector<ImpactEntry> pair_wise(const measure::Dataset& ds, measure::Metric metric,
                                   const std::optional<std::string>& anchor) {
  require_rows(ds);
  const std::size_t n = ds.feature_basis.size();
  std::vector<ImpactEntry> entries;
  if (anchor) {
    const auto it = std::find(ds.feature_basis.begin(), ds.feature_basis.end(), *anchor);
    if (it == ds.feature_basis.end()) {
      throw ValidationError(fmt::format("anchor '{}' is not a concrete feature", *anchor));
    }
    const auto a = static_cast<std::size_t>(it - ds.feature_basis.begin());
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
      if (ds.rows[i].features[a]) rows.push_back(i);
    }
    if (rows.size() < 2) {
      throw ValidationError(fmt::format(
          "anchor '{}' is selected in {} configuration(s); need at least 2", *anchor,
          rows.size()));
    }
    for (std::size_t g = 0; g < n; ++g) {
      if (g == a) continue;
      auto e = contrast(ds, rows, metric,
                        [g](const measure::DatasetRow& r) { return r.features[g] != 0; });
      e.features = {*anchor, ds.feature_basis[g]};
      e.anchor = *anchor;
      entries.push_back(std::move(e));
    }
    return rank(std::move(entries));
  }
  std::vector<std::size_t> all(ds.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = f + 1; g < n; ++g) {
      auto e = contrast(ds, all, metric, [f, g](const measure::DatasetRow& r) {
        return r.features[f] != 0 && r.features[g] != 0;
      });
      e.features = {ds.feature_basis[f], ds.feature_basis[g]};
      entries.push_back(std::move(e));
    }
  }
  return rank(std::move(entries));
}

}  // namespace varitune::analysis
