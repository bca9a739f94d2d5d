// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "varitune/analysis/impact.hpp"
#include "varitune/analysis/pareto.hpp"

namespace varitune::analysis {

// rank,subject,anchor,metric,delta,mean_with,mean_without,support_with,
// support_without,insufficient_support. Ranked entries carry ranks from 1;
// insufficient-support rows have an empty rank.
std::string impacts_csv(const std::vector<ImpactEntry>& entries);
// Top `limit` ranked entries as a Markdown table.
std::string impacts_markdown(const std::vector<ImpactEntry>& entries,
                             const std::string& title, std::size_t limit = 10);

// config_id,energy_kj,pass_at_1,dominated, then excluded points with reason.
std::string pareto_csv(const ParetoResult& result);
// Energy on x, pass@1 on y; front drawn as a step line.
std::string pareto_svg(const ParetoResult& result);

std::string profiles_markdown(const std::vector<Band>& bands);

}  // namespace varitune::analysis
