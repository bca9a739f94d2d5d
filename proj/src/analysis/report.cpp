// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/analysis/report.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace varitune::analysis {
namespace {

std::string signed2(double v) { return fmt::format("{:+.2f}", v); }

}  // namespace

std::string impacts_csv(const std::vector<ImpactEntry>& entries) {
  std::string out =
      "rank,subject,anchor,metric,delta,mean_with,mean_without,support_with,"
      "support_without,insufficient_support\n";
  std::size_t rank = 0;
  for (const auto& e : entries) {
    const bool insufficient = e.insufficient_support();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n",
                       insufficient ? std::string() : fmt::format("{}", ++rank), e.subject(),
                       e.anchor.value_or(""), measure::metric_name(e.metric), e.delta,
                       e.mean_with, e.mean_without, e.support_with, e.support_without,
                       insufficient ? "true" : "false");
  }
  return out;
}

std::string impacts_markdown(const std::vector<ImpactEntry>& entries,
                             const std::string& title, std::size_t limit) {
  std::string out = fmt::format("### {}\n\n| Rank | Feature | Δ | With | Without |\n"
                                "|---:|---|---:|---:|---:|\n",
                                title);
  std::size_t rank = 0;
  for (const auto& e : entries) {
    if (e.insufficient_support() || rank == limit) break;
    out += fmt::format("| {} | {} | {} | {} | {} |\n", ++rank, e.subject(), signed2(e.delta),
                       e.support_with, e.support_without);
  }
  return out + "\n";
}

std::string pareto_csv(const ParetoResult& result) {
  std::string out = "config_id,energy_kj,pass_at_1,dominated,excluded_reason\n";
  for (const auto& p : result.points) {
    out += fmt::format("{},{},{},{},\n", p.config_id, p.energy_kj, p.pass_at_1,
                       p.dominated ? "true" : "false");
  }
  for (const auto& e : result.excluded) out += fmt::format("{},,,,{}\n", e.config_id, e.reason);
  return out;
}

std::string pareto_svg(const ParetoResult& result) {
  constexpr double kWidth = 640, kHeight = 420, kMargin = 50;
  double emin = result.points.front().energy_kj, emax = emin;
  for (const auto& p : result.points) {
    emin = std::min(emin, p.energy_kj);
    emax = std::max(emax, p.energy_kj);
  }
  if (emax == emin) emax = emin + 1.0;
  const auto x = [&](double e) {
    return kMargin + (e - emin) / (emax - emin) * (kWidth - 2 * kMargin);
  };
  const auto y = [&](double a) { return kHeight - kMargin - a * (kHeight - 2 * kMargin); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<line x1=\"{2}\" y1=\"{3}\" x2=\"{4}\" y2=\"{3}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{3}\" x2=\"{2}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<text x=\"{5}\" y=\"{6}\" text-anchor=\"middle\" font-size=\"12\">energy (kJ)</text>\n"
      "<text x=\"14\" y=\"{7}\" font-size=\"12\" transform=\"rotate(-90 14 {7})\" "
      "text-anchor=\"middle\">pass@1</text>\n"
      "<text x=\"{2}\" y=\"{8}\" font-size=\"10\" text-anchor=\"middle\">{9:.1f}</text>\n"
      "<text x=\"{4}\" y=\"{8}\" font-size=\"10\" text-anchor=\"middle\">{10:.1f}</text>\n"
      "<text x=\"{11}\" y=\"{3}\" font-size=\"10\" text-anchor=\"end\">0</text>\n"
      "<text x=\"{11}\" y=\"{12}\" font-size=\"10\" text-anchor=\"end\">1</text>\n",
      kWidth, kHeight, kMargin, kHeight - kMargin, kWidth - kMargin, kWidth / 2,
      kHeight - 12, kHeight / 2, kHeight - kMargin + 14, emin, emax, kMargin - 4,
      kMargin + 4);
  for (const auto& p : result.points) {
    if (p.dominated) {
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#bbbbbb\"/>\n",
                         x(p.energy_kj), y(p.pass_at_1));
    }
  }
  std::string path;
  const auto front = result.front();
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (i > 0) {
      path += fmt::format(" L{:.2f},{:.2f}", x(front[i].energy_kj), y(front[i - 1].pass_at_1));
    }
    path += fmt::format(" {}{:.2f},{:.2f}", i == 0 ? "M" : "L", x(front[i].energy_kj),
                        y(front[i].pass_at_1));
  }
  out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#c0392b\"/>\n", path.substr(1));
  for (const auto& p : front) {
    out += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"#c0392b\"><title>{}</title></circle>\n",
        x(p.energy_kj), y(p.pass_at_1), p.config_id);
  }
  return out + "</svg>\n";
}

std::string profiles_markdown(const std::vector<Band>& bands) {
  std::string out =
      "| Band | Configs | Avg energy (kJ) | Avg pass@1 | Δ energy | Δ pass@1 | Settings |\n"
      "|---|---:|---:|---:|---:|---:|---|\n";
  for (const auto& b : bands) {
    std::string settings;
    for (const auto& [key, values] : b.parameters) {
      std::string vs;
      for (const auto& [value, count] : values) {
        vs += fmt::format("{}{} ({})", vs.empty() ? "" : ", ", value, count);
      }
      settings += fmt::format("{}{}: {}", settings.empty() ? "" : "; ", key, vs);
    }
    out += fmt::format("| {} | {} | {:.2f} | {:.2f} | {} | {} | {} |\n", b.label,
                       b.config_ids.size(), b.avg_energy_kj, b.avg_pass_at_1,
                       b.delta_energy_kj ? signed2(*b.delta_energy_kj) : "",
                       b.delta_pass_at_1 ? signed2(*b.delta_pass_at_1) : "", settings);
  }
  return out;
}

}  // namespace varitune::analysis
