// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/measure/measure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "varitune/error.hpp"

namespace varitune::measure {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view cell, std::string_view column,
                    std::size_t line) {
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(fmt::format("{}: '{}' is not a number", column, cell), line, 1);
  }
  return value;
}

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kEnergy: return "energy_kj";
    case Metric::kLatency: return "latency_s";
    case Metric::kPassAt1: return "pass_at_1";
  }
  return "energy_kj";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw ValidationError(fmt::format("unknown metric '{}'", name));
}

std::vector<MeasurementRecord> parse_csv(std::string_view text,
                                         const std::set<std::string>& known_ids) {
  std::vector<MeasurementRecord> records;
  std::set<std::pair<std::string, int>> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ParseError(fmt::format("expected header '{}'", kCsvHeader), line_no, 1);
      }
      header_seen = true;
      continue;
    }
    const auto cells = split_fields(line);
    if (cells.size() != 7) {
      throw ParseError(fmt::format("expected 7 fields, found {}", cells.size()),
                       line_no, 1);
    }
    MeasurementRecord r;
    r.config_id = std::string(cells[0]);
    if (r.config_id.empty()) throw ParseError("empty config_id", line_no, 1);
    if (!known_ids.count(r.config_id)) {
      throw ParseError(fmt::format("config_id '{}' is not in the sample", r.config_id),
                       line_no, 1);
    }
    {
      const auto* end = cells[1].data() + cells[1].size();
      const auto [ptr, ec] = std::from_chars(cells[1].data(), end, r.repetition);
      if (cells[1].empty() || ec != std::errc() || ptr != end || r.repetition < 1) {
        throw ParseError(fmt::format("repetition '{}' must be an integer >= 1", cells[1]),
                         line_no, 1);
      }
    }
    if (cells[6] == "ok") {
      r.status = Status::kOk;
    } else if (cells[6] == "failed") {
      r.status = Status::kFailed;
    } else {
      throw ParseError(fmt::format("status '{}' must be ok or failed", cells[6]),
                       line_no, 1);
    }
    const bool metrics_empty = cells[2].empty() && cells[3].empty() && cells[4].empty();
    if (r.status == Status::kFailed) {
      if (!metrics_empty) {
        throw ParseError("failed rows must leave metric cells empty", line_no, 1);
      }
    } else {
      MetricValues v{};
      for (Metric m : kMetrics) {
        v[static_cast<std::size_t>(m)] =
            parse_number(cells[2 + static_cast<std::size_t>(m)], metric_name(m), line_no);
      }
      if (v[0] < 0 || v[1] < 0) {
        throw ParseError("energy_kj and latency_s must be >= 0", line_no, 1);
      }
      if (v[2] < 0 || v[2] > 1) throw ParseError("pass_at_1 must be in [0, 1]", line_no, 1);
      r.metrics = v;
    }
    if (!cells[5].empty()) {
      r.idle_power_w = parse_number(cells[5], "idle_power_w", line_no);
      if (*r.idle_power_w < 0) throw ParseError("idle_power_w must be >= 0", line_no, 1);
    } else if (r.status == Status::kOk) {
      throw ParseError("idle_power_w is required on ok rows", line_no, 1);
    }
    if (!seen.emplace(r.config_id, r.repetition).second) {
      throw ParseError(fmt::format("duplicate repetition {} for '{}'", r.repetition,
                                   r.config_id),
                       line_no, 1);
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("missing header", line_no == 0 ? 1 : line_no, 1);
  return records;
}

std::vector<MeasurementRecord> ingest_csv(const std::filesystem::path& path,
                                          const sampler::Sample& sample) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::set<std::string> ids;
  for (const auto& c : sample.configurations) ids.insert(c.id);
  try {
    return parse_csv(buf.str(), ids);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line(),
                     e.column());
  }
}

std::string format_csv(const std::vector<MeasurementRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},", r.config_id, r.repetition);
    if (r.metrics) {
      out += fmt::format("{},{},{},", (*r.metrics)[0], (*r.metrics)[1], (*r.metrics)[2]);
    } else {
      out += ",,,";
    }
    if (r.idle_power_w) out += fmt::format("{}", *r.idle_power_w);
    out += r.status == Status::kOk ? ",ok\n" : ",failed\n";
  }
  return out;
}

std::vector<AggregatedPoint> aggregate(const std::vector<MeasurementRecord>& records,
                                       std::vector<std::string>* warnings) {
  std::map<std::string, std::map<int, const MeasurementRecord*>> by_config;
  for (const auto& r : records) by_config[r.config_id][r.repetition] = &r;

  std::vector<AggregatedPoint> points;
  for (const auto& [id, reps] : by_config) {
    std::vector<const MeasurementRecord*> ok;
    for (const auto& [rep, r] : reps) {
      if (r->status == Status::kOk) ok.push_back(r);
    }
    if (ok.empty()) {
      warn(warnings, fmt::format("config '{}' has no ok repetitions; dropped", id));
      continue;
    }
    AggregatedPoint p;
    p.config_id = id;
    p.repetitions_ok = ok.size();
    const double n = static_cast<double>(ok.size());
    for (std::size_t m = 0; m < 3; ++m) {
      double sum = 0.0;
      for (const auto* r : ok) sum += (*r->metrics)[m];
      p.mean[m] = sum / n;
      if (ok.size() >= 2) {
        double ss = 0.0;
        for (const auto* r : ok) ss += ((*r->metrics)[m] - p.mean[m]) * ((*r->metrics)[m] - p.mean[m]);
        p.stddev[m] = std::sqrt(ss / (n - 1.0));
      }
    }
    double idle = 0.0;
    for (const auto* r : ok) idle += *r->idle_power_w;
    p.idle_power_w = idle / n;
    p.marginal_energy_kj = marginal_energy(p, p.idle_power_w, std::nullopt, warnings);
    points.push_back(std::move(p));
  }
  return points;
}

double pass_at_k(long n, long c, long k) {
  if (n < 1 || c < 0 || c > n || k < 1 || k > n) {
    throw ValidationError(
        fmt::format("pass@k needs 0 <= c <= n and 1 <= k <= n (n={}, c={}, k={})", n, c, k));
  }
  if (c == 0) return 0.0;
  if (n - c < k) return 1.0;
  double miss = 1.0;
  for (long i = n - c + 1; i <= n; ++i) {
    miss *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - miss;
}

double marginal_energy(const AggregatedPoint& point, double idle_power_w,
                       std::optional<double> duration_s,
                       std::vector<std::string>* warnings) {
  const double duration = duration_s.value_or(point.value(Metric::kLatency));
  const double marginal = point.value(Metric::kEnergy) - idle_power_w * duration / 1000.0;
  if (marginal < 0.0) {
    warn(warnings, fmt::format("config '{}': idle energy exceeds measured energy; "
                               "marginal energy floored at 0",
                               point.config_id));
    return 0.0;
  }
  return marginal;
}

}  // namespace varitune::measure
