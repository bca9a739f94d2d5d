// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varitune/measure/measure.hpp"
#include "varitune/sampler/sampler.hpp"

namespace varitune::analysis {

struct ParetoPoint {
  std::string config_id;
  double energy_kj = 0.0;
  double pass_at_1 = 0.0;
  bool dominated = false;

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

struct ParetoFilters {
  bool drop_zero_accuracy = true;
  std::optional<double> max_energy_kj = 70.0;  // drops energy > threshold
};

struct Excluded {
  std::string config_id;
  std::string reason;
};

struct ParetoResult {
  // Points surviving the filters, energy ascending, then pass@1 descending,
  // then id; `dominated` is exact.
  std::vector<ParetoPoint> points;
  std::vector<Excluded> excluded;

  std::vector<ParetoPoint> front() const;
};

// q dominates p iff q is no worse in both objectives and strictly better in
// one (lower energy, higher pass@1).
bool dominates(const ParetoPoint& q, const ParetoPoint& p);

// Filters first, then the non-dominated set. Throws ValidationError when no
// point survives or a value is not finite.
ParetoResult pareto_front(std::vector<ParetoPoint> points,
                          const ParetoFilters& filters = {});

std::vector<ParetoPoint> pareto_points(const std::vector<measure::AggregatedPoint>& points);

struct Band {
  std::string label;
  std::vector<std::string> config_ids;
  double avg_energy_kj = 0.0;
  double avg_pass_at_1 = 0.0;
  // parameter -> value -> number of band members using it
  std::map<std::string, std::map<std::string, std::size_t>> parameters;
  // Against the previous non-empty band.
  std::optional<double> delta_energy_kj;
  std::optional<double> delta_pass_at_1;
};

// Buckets front points into half-open energy bands [t_{i-1}, t_i) cut at
// ascending `thresholds` (default 30, 45 kJ); empty bands are omitted.
// Throws ValidationError on an empty front or unsorted thresholds.
std::vector<Band> objective_profiles(const std::vector<ParetoPoint>& front,
                                     const sampler::Sample& sample,
                                     const std::vector<double>& thresholds = {30.0, 45.0});

}  // namespace varitune::analysis
