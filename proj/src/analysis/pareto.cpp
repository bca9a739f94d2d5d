// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/analysis/pareto.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "varitune/error.hpp"

namespace varitune::analysis {

std::vector<ParetoPoint> ParetoResult::front() const {
  std::vector<ParetoPoint> out;
  for (const auto& p : points) {
    if (!p.dominated) out.push_back(p);
  }
  return out;
}

bool dominates(const ParetoPoint& q, const ParetoPoint& p) {
  return q.energy_kj <= p.energy_kj && q.pass_at_1 >= p.pass_at_1 &&
         (q.energy_kj < p.energy_kj || q.pass_at_1 > p.pass_at_1);
}

ParetoResult pareto_front(std::vector<ParetoPoint> points, const ParetoFilters& filters) {
  ParetoResult result;
  for (auto& p : points) {
    if (!std::isfinite(p.energy_kj) || !std::isfinite(p.pass_at_1)) {
      throw ValidationError(fmt::format("config '{}' has a non-finite objective", p.config_id));
    }
    if (filters.drop_zero_accuracy && p.pass_at_1 == 0.0) {
      result.excluded.push_back({p.config_id, "pass_at_1 = 0"});
    } else if (filters.max_energy_kj && p.energy_kj > *filters.max_energy_kj) {
      result.excluded.push_back(
          {p.config_id, fmt::format("energy_kj > {}", *filters.max_energy_kj)});
    } else {
      p.dominated = false;
      result.points.push_back(std::move(p));
    }
  }
  if (result.points.empty()) throw ValidationError("no points left after filtering");
  std::sort(result.points.begin(), result.points.end(),
            [](const ParetoPoint& a, const ParetoPoint& b) {
              if (a.energy_kj != b.energy_kj) return a.energy_kj < b.energy_kj;
              if (a.pass_at_1 != b.pass_at_1) return a.pass_at_1 > b.pass_at_1;
              return a.config_id < b.config_id;
            });
  // Sweep equal-energy groups; best_before is the highest pass@1 at strictly
  // lower energy.
  double best_before = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.points.size();) {
    std::size_t j = i;
    while (j < result.points.size() && result.points[j].energy_kj == result.points[i].energy_kj) {
      ++j;
    }
    const double group_best = result.points[i].pass_at_1;
    for (std::size_t k = i; k < j; ++k) {
      auto& p = result.points[k];
      p.dominated = p.pass_at_1 < group_best || p.pass_at_1 <= best_before;
    }
    best_before = std::max(best_before, group_best);
    i = j;
  }
  return result;
}

std::vector<ParetoPoint> pareto_points(const std::vector<measure::AggregatedPoint>& points) {
  std::vector<ParetoPoint> out;
  for (const auto& p : points) {
    out.push_back({p.config_id, p.value(measure::Metric::kEnergy),
                   p.value(measure::Metric::kPassAt1), false});
  }
  return out;
}

std::vector<Band> objective_profiles(const std::vector<ParetoPoint>& front,
                                     const sampler::Sample& sample,
                                     const std::vector<double>& thresholds) {
  if (front.empty()) throw ValidationError("Pareto front is empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end()) ||
      std::adjacent_find(thresholds.begin(), thresholds.end()) != thresholds.end()) {
    throw ValidationError("band thresholds must be strictly ascending");
  }
  std::map<std::string, const logic::Configuration*> configs;
  for (const auto& c : sample.configurations) configs[c.id] = &c;

  std::vector<Band> bands(thresholds.size() + 1);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (thresholds.empty()) {
      bands[b].label = "all";
    } else if (b == 0) {
      bands[b].label = fmt::format("< {}", thresholds[0]);
    } else if (b == thresholds.size()) {
      bands[b].label = fmt::format(">= {}", thresholds.back());
    } else {
      bands[b].label = fmt::format("{}-{}", thresholds[b - 1], thresholds[b]);
    }
  }
  for (const auto& p : front) {
    const auto b = static_cast<std::size_t>(
        std::upper_bound(thresholds.begin(), thresholds.end(), p.energy_kj) -
        thresholds.begin());
    Band& band = bands[b];
    band.config_ids.push_back(p.config_id);
    band.avg_energy_kj += p.energy_kj;
    band.avg_pass_at_1 += p.pass_at_1;
    const auto it = configs.find(p.config_id);
    if (it == configs.end()) {
      throw ValidationError(fmt::format("front point '{}' is not in the sample", p.config_id));
    }
    for (const auto& [key, value] : it->second->parameters) ++band.parameters[key][value];
  }
  std::vector<Band> out;
  for (auto& band : bands) {
    if (band.config_ids.empty()) continue;
    const double n = static_cast<double>(band.config_ids.size());
    band.avg_energy_kj /= n;
    band.avg_pass_at_1 /= n;
    if (!out.empty()) {
      band.delta_energy_kj = band.avg_energy_kj - out.back().avg_energy_kj;
      band.delta_pass_at_1 = band.avg_pass_at_1 - out.back().avg_pass_at_1;
    }
    out.push_back(std::move(band));
  }
  return out;
}

}  // namespace varitune::analysis
