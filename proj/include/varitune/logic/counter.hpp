// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "varitune/logic/cnf.hpp"

namespace varitune::logic {

using BigInt = boost::multiprecision::cpp_int;

struct CountOptions {
  std::uint64_t decision_budget = 10'000'000;
};

// Exact #SAT over all variables of the formula: DPLL with unit propagation,
// connected-component decomposition and a component cache. Throws
// BudgetExceeded once the number of branching decisions passes the budget.
BigInt count_solutions(const CnfFormula& cnf, const CountOptions& options = {});

}  // namespace varitune::logic
