// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "varitune/sampler/sampler.hpp"

namespace varitune::measure {

enum class Metric { kEnergy = 0, kLatency = 1, kPassAt1 = 2 };
inline constexpr std::array<Metric, 3> kMetrics = {Metric::kEnergy, Metric::kLatency,
                                                   Metric::kPassAt1};

// CSV column names: energy_kj, latency_s, pass_at_1.
std::string_view metric_name(Metric metric);
// Throws ValidationError for unknown names.
Metric parse_metric(std::string_view name);

// Indexed by static_cast<size_t>(Metric).
using MetricValues = std::array<double, 3>;

enum class Status { kOk, kFailed };

struct MeasurementRecord {
  std::string config_id;
  int repetition = 1;
  Status status = Status::kOk;
  std::optional<MetricValues> metrics;  // set iff status is ok
  std::optional<double> idle_power_w;   // may be empty on failed rows

  double metric(Metric m) const { return (*metrics)[static_cast<std::size_t>(m)]; }
  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct AggregatedPoint {
  std::string config_id;
  MetricValues mean{};
  std::array<std::optional<double>, 3> stddev;  // needs two ok repetitions
  std::size_t repetitions_ok = 0;
  double idle_power_w = 0.0;  // mean over ok repetitions
  std::optional<double> marginal_energy_kj;

  double value(Metric m) const { return mean[static_cast<std::size_t>(m)]; }
};

inline constexpr std::string_view kCsvHeader =
    "config_id,repetition,energy_kj,latency_s,pass_at_1,idle_power_w,status";

// Parses measurement CSV text. Lines starting with '#' and blank lines are
// ignored; the first other line must be the header. ParseError carries the
// 1-based line number; config ids outside `known_ids` are rejected.
std::vector<MeasurementRecord> parse_csv(std::string_view text,
                                         const std::set<std::string>& known_ids);
std::vector<MeasurementRecord> ingest_csv(const std::filesystem::path& path,
                                          const sampler::Sample& sample);

std::string format_csv(const std::vector<MeasurementRecord>& records);

// Per-config mean and sample standard deviation over ok repetitions, ordered
// by config id. Sums run in repetition order, so row order does not change
// any bit of the result. Configs without ok repetitions are dropped with a
// warning appended to `warnings`.
std::vector<AggregatedPoint> aggregate(const std::vector<MeasurementRecord>& records,
                                       std::vector<std::string>* warnings = nullptr);

// Unbiased pass@k estimator 1 - C(n-c, k) / C(n, k). Throws ValidationError
// unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(long n, long c, long k);

// Mean energy minus idle draw over `duration_s` (default: mean latency),
// in kJ, floored at 0 with a warning.
double marginal_energy(const AggregatedPoint& point, double idle_power_w,
                       std::optional<double> duration_s = std::nullopt,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace varitune::measure
