// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "varitune/fm/feature_model.hpp"

namespace varitune::logic {

// DIMACS-style literal: +v / -v for variable v >= 1.
using Literal = int;
using Clause = std::vector<Literal>;

// Feature i is variable i + 1. Auxiliary (Tseitin) variables follow the
// feature variables. Each auxiliary variable is defined by a full
// equivalence, so every assignment of the feature variables extends to at
// most one model: solutions project bijectively onto feature assignments.
struct CnfFormula {
  std::size_t feature_count = 0;
  std::size_t aux_count = 0;
  std::vector<Clause> clauses;

  std::size_t variable_count() const { return feature_count + aux_count; }

  static Literal literal(std::size_t feature, bool positive = true) {
    const int v = static_cast<int>(feature) + 1;
    return positive ? v : -v;
  }
};

CnfFormula encode(const fm::FeatureModel& model);

// Standard `p cnf` text with `c` comment lines naming feature variables.
std::string to_dimacs(const fm::FeatureModel& model, const CnfFormula& cnf);

}  // namespace varitune::logic
