// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "varitune/logic/cnf.hpp"

namespace varitune {
class Rng;
}

namespace varitune::logic {

// Conflict-driven clause-learning SAT solver with two watched literals,
// first-UIP learning and MiniSat-style assumptions. Decisions follow a
// configurable static variable order and per-variable phase, which is what
// the samplers randomize. Learned clauses persist across solve() calls.
// Not thread-safe; use one instance per thread.
class Solver {
 public:
  enum class Result { kSat, kUnsat, kUnknown };

  static constexpr std::uint64_t kDefaultBudget = 10'000'000;

  explicit Solver(const CnfFormula& cnf);

  // Must be called between solves, never during one.
  void add_clause(std::span<const Literal> clause);

  // kUnknown when the decision budget runs out.
  Result solve(std::span<const Literal> assumptions = {},
               std::uint64_t decision_budget = kDefaultBudget);

  // Valid after kSat: truth value of variable v (1-based).
  bool value(int variable) const { return model_[static_cast<std::size_t>(variable)] != 0; }
  const std::vector<char>& model() const { return model_; }

  std::size_t variable_count() const { return num_vars_; }

  // Variables listed first are decided first; unlisted ones follow in index
  // order. Phase true means a decision assigns the variable true.
  void set_order(std::vector<int> variables);
  void set_phase(int variable, bool positive);
  void set_all_phases(bool positive);
  // Shuffles the order and draws random phases.
  void randomize(Rng& rng);

  std::uint64_t decisions() const { return total_decisions_; }

 private:
  // Internal literal encoding: 2 * (v - 1) + (negative ? 1 : 0).
  using Lit = std::uint32_t;
  static Lit to_lit(Literal l) {
    return l > 0 ? static_cast<Lit>(2 * (l - 1))
                 : static_cast<Lit>(2 * (-l - 1) + 1);
  }
  static std::uint32_t var_of(Lit l) { return l >> 1; }

  // 1 true, 0 false, -1 unassigned
  int lit_value(Lit l) const {
    const int v = assign_[var_of(l)];
    return v < 0 ? -1 : (v ^ static_cast<int>(l & 1u));
  }

  void attach(std::uint32_t clause_index);
  void enqueue(Lit l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int conflict, std::vector<Lit>& learned, int& backjump);
  void backtrack(int level);
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  Lit pick_branch();

  std::size_t num_vars_;
  bool inconsistent_ = false;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<int> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t queue_head_ = 0;
  std::vector<char> seen_;
  std::vector<std::uint32_t> order_;
  std::vector<char> phase_;
  std::vector<char> model_;
  std::uint64_t total_decisions_ = 0;
};

}  // namespace varitune::logic
