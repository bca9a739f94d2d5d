// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/logic/solver.hpp"

#include <algorithm>
#include <numeric>

#include "varitune/random.hpp"

namespace varitune::logic {

Solver::Solver(const CnfFormula& cnf)
    : num_vars_(cnf.variable_count()),
      watches_(2 * num_vars_),
      assign_(num_vars_, -1),
      level_(num_vars_, 0),
      reason_(num_vars_, -1),
      seen_(num_vars_, 0),
      order_(num_vars_),
      phase_(num_vars_, 0),
      model_(num_vars_ + 1, 0) {
  std::iota(order_.begin(), order_.end(), 0u);
  for (const Clause& clause : cnf.clauses) add_clause(clause);
}

void Solver::add_clause(std::span<const Literal> clause) {
  if (inconsistent_) return;
  std::vector<Lit> lits;
  for (Literal l : clause) lits.push_back(to_lit(l));
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i] == (lits[i - 1] ^ 1u)) return;  // tautology
  }
  // Drop literals already false at level 0; skip clauses already satisfied.
  std::vector<Lit> kept;
  for (Lit l : lits) {
    const int v = lit_value(l);
    if (v == 1 && level_[var_of(l)] == 0) return;
    if (v == 0 && level_[var_of(l)] == 0) continue;
    kept.push_back(l);
  }
  if (kept.empty()) {
    inconsistent_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) inconsistent_ = true;
    return;
  }
  clauses_.push_back(std::move(kept));
  attach(static_cast<std::uint32_t>(clauses_.size() - 1));
}

void Solver::attach(std::uint32_t index) {
  const auto& c = clauses_[index];
  watches_[c[0]].push_back(index);
  watches_[c[1]].push_back(index);
}

void Solver::enqueue(Lit l, int reason) {
  const std::uint32_t v = var_of(l);
  assign_[v] = static_cast<int>((l & 1u) ^ 1u);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

int Solver::propagate() {
  while (queue_head_ < trail_.size()) {
    const Lit false_lit = trail_[queue_head_++] ^ 1u;
    auto& watch_list = watches_[false_lit];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < watch_list.size(); ++i) {
      const std::uint32_t ci = watch_list[i];
      auto& c = clauses_[ci];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (lit_value(c[0]) == 1) {
        watch_list[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      watch_list[keep++] = ci;
      if (lit_value(c[0]) == 0) {
        for (std::size_t j = i + 1; j < watch_list.size(); ++j) {
          watch_list[keep++] = watch_list[j];
        }
        watch_list.resize(keep);
        queue_head_ = trail_.size();
        return static_cast<int>(ci);
      }
      enqueue(c[0], static_cast<int>(ci));
    }
    watch_list.resize(keep);
  }
  return -1;
}

void Solver::analyze(int conflict, std::vector<Lit>& learned, int& backjump) {
  learned.clear();
  learned.push_back(0);  // slot for the asserting literal
  int pending = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  int clause = conflict;
  for (;;) {
    for (Lit q : clauses_[static_cast<std::size_t>(clause)]) {
      if (have_p && q == p) continue;
      const std::uint32_t v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      if (level_[v] == decision_level()) {
        ++pending;
      } else {
        learned.push_back(q);
      }
    }
    do {
      --index;
    } while (!seen_[var_of(trail_[index])]);
    p = trail_[index];
    have_p = true;
    seen_[var_of(p)] = 0;
    --pending;
    if (pending == 0) break;
    clause = reason_[var_of(p)];
  }
  learned[0] = p ^ 1u;
  backjump = 0;
  std::size_t max_i = 1;
  for (std::size_t i = 1; i < learned.size(); ++i) {
    seen_[var_of(learned[i])] = 0;
    if (level_[var_of(learned[i])] > backjump) {
      backjump = level_[var_of(learned[i])];
      max_i = i;
    }
  }
  if (learned.size() > 1) std::swap(learned[1], learned[max_i]);
}

void Solver::backtrack(int level) {
  if (decision_level() <= level) return;
  const std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
  for (std::size_t i = trail_.size(); i > stop; --i) {
    const std::uint32_t v = var_of(trail_[i - 1]);
    assign_[v] = -1;
    reason_[v] = -1;
  }
  trail_.resize(stop);
  trail_lim_.resize(static_cast<std::size_t>(level));
  queue_head_ = trail_.size();
}

Solver::Lit Solver::pick_branch() {
  for (std::uint32_t v : order_) {
    if (assign_[v] < 0) return 2 * v + (phase_[v] ? 0u : 1u);
  }
  return static_cast<Lit>(-1);
}

Solver::Result Solver::solve(std::span<const Literal> assumptions,
                             std::uint64_t decision_budget) {
  if (inconsistent_) return Result::kUnsat;
  std::uint64_t decisions = 0;
  std::vector<Lit> learned;
  auto finish = [&](Result r) {
    if (r == Result::kSat) {
      for (std::size_t v = 0; v < num_vars_; ++v) {
        model_[v + 1] = static_cast<char>(assign_[v] == 1);
      }
    }
    backtrack(0);
    return r;
  };
  for (;;) {
    const int conflict = propagate();
    if (conflict >= 0) {
      if (decision_level() == 0) {
        inconsistent_ = true;
        return finish(Result::kUnsat);
      }
      int backjump = 0;
      analyze(conflict, learned, backjump);
      backtrack(backjump);
      if (learned.size() == 1) {
        enqueue(learned[0], -1);
      } else {
        clauses_.push_back(learned);
        const auto ci = static_cast<std::uint32_t>(clauses_.size() - 1);
        attach(ci);
        enqueue(learned[0], static_cast<int>(ci));
      }
      continue;
    }
    Lit next = static_cast<Lit>(-1);
    while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
      const Lit a = to_lit(assumptions[static_cast<std::size_t>(decision_level())]);
      const int v = lit_value(a);
      if (v == 1) {
        trail_lim_.push_back(trail_.size());  // satisfied: empty level
      } else if (v == 0) {
        return finish(Result::kUnsat);
      } else {
        next = a;
        break;
      }
    }
    if (next == static_cast<Lit>(-1)) {
      next = pick_branch();
      if (next == static_cast<Lit>(-1)) return finish(Result::kSat);
      if (++decisions > decision_budget) return finish(Result::kUnknown);
      ++total_decisions_;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(next, -1);
  }
}

void Solver::set_order(std::vector<int> variables) {
  std::vector<char> listed(num_vars_, 0);
  order_.clear();
  for (int v : variables) {
    const auto idx = static_cast<std::uint32_t>(v - 1);
    if (!listed[idx]) {
      listed[idx] = 1;
      order_.push_back(idx);
    }
  }
  for (std::uint32_t v = 0; v < num_vars_; ++v) {
    if (!listed[v]) order_.push_back(v);
  }
}

void Solver::set_phase(int variable, bool positive) {
  phase_[static_cast<std::size_t>(variable - 1)] = positive ? 1 : 0;
}

void Solver::set_all_phases(bool positive) {
  std::fill(phase_.begin(), phase_.end(), positive ? 1 : 0);
}

void Solver::randomize(Rng& rng) {
  std::vector<std::uint32_t> order(num_vars_);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);
  order_ = std::move(order);
  for (auto& p : phase_) p = rng.coin() ? 1 : 0;
}

}  // namespace varitune::logic
