// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/logic/counter.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "varitune/error.hpp"
#include "varitune/random.hpp"

namespace varitune::logic {
namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<int>& key) const {
    std::uint64_t h = 0x84222325ULL;
    for (int v : key) h = mix_seed(h ^ static_cast<std::uint32_t>(v));
    return static_cast<std::size_t>(h);
  }
};

class Counter {
 public:
  explicit Counter(std::uint64_t budget) : budget_(budget) {}

  // Counts models of `clauses` over the variables in `scope`.
  BigInt count(std::vector<Clause> clauses, std::vector<int> scope) {
    if (!simplify(clauses, scope)) return 0;

    // Variables of the scope untouched by any clause are free.
    std::unordered_map<int, int> component_of;
    std::vector<int> parent;
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    std::unordered_map<int, int> slot;
    for (const Clause& c : clauses) {
      for (Literal l : c) {
        const int v = std::abs(l);
        if (slot.emplace(v, static_cast<int>(parent.size())).second) {
          parent.push_back(static_cast<int>(parent.size()));
        }
      }
    }
    const std::size_t constrained = parent.size();
    BigInt result = 1;
    result <<= (scope.size() - constrained);
    if (clauses.empty()) return result;

    for (const Clause& c : clauses) {
      const int first = find(slot[std::abs(c[0])]);
      for (std::size_t i = 1; i < c.size(); ++i) {
        const int other = find(slot[std::abs(c[i])]);
        if (other != first) parent[static_cast<std::size_t>(other)] = first;
      }
    }
    std::unordered_map<int, std::size_t> group_index;
    std::vector<std::vector<Clause>> groups;
    for (Clause& c : clauses) {
      const int g = find(slot[std::abs(c[0])]);
      auto [it, inserted] = group_index.emplace(g, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(std::move(c));
    }
    for (auto& group : groups) {
      result *= count_component(std::move(group));
      if (result == 0) return 0;
    }
    return result;
  }

 private:
  // Unit propagation; removes satisfied clauses and false literals and the
  // assigned variables from scope. Returns false on conflict.
  static bool simplify(std::vector<Clause>& clauses, std::vector<int>& scope) {
    std::unordered_map<int, bool> assigned;
    for (;;) {
      Literal unit = 0;
      for (const Clause& c : clauses) {
        if (c.empty()) return false;
        if (c.size() == 1) {
          unit = c[0];
          break;
        }
      }
      if (unit == 0) break;
      assigned[std::abs(unit)] = unit > 0;
      std::vector<Clause> next;
      next.reserve(clauses.size());
      for (Clause& c : clauses) {
        bool satisfied = false;
        Clause reduced;
        reduced.reserve(c.size());
        for (Literal l : c) {
          if (l == unit) {
            satisfied = true;
            break;
          }
          if (l != -unit) reduced.push_back(l);
        }
        if (satisfied) continue;
        if (reduced.empty()) return false;
        next.push_back(std::move(reduced));
      }
      clauses = std::move(next);
    }
    if (!assigned.empty()) {
      std::erase_if(scope, [&](int v) { return assigned.count(v) != 0; });
    }
    return true;
  }

  BigInt count_component(std::vector<Clause> clauses) {
    for (Clause& c : clauses) std::sort(c.begin(), c.end());
    std::sort(clauses.begin(), clauses.end());
    std::vector<int> key;
    for (const Clause& c : clauses) {
      key.insert(key.end(), c.begin(), c.end());
      key.push_back(0);
    }
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::unordered_map<int, int> occurrences;
    for (const Clause& c : clauses) {
      for (Literal l : c) ++occurrences[std::abs(l)];
    }
    std::vector<int> scope;
    scope.reserve(occurrences.size());
    for (const auto& [v, n] : occurrences) scope.push_back(v);
    std::sort(scope.begin(), scope.end());
    int branch = scope.front();
    for (int v : scope) {
      if (occurrences[v] > occurrences[branch]) branch = v;
    }
    if (++decisions_ > budget_) {
      throw BudgetExceeded(fmt::format(
          "model counting exceeded the budget of {} decisions", budget_));
    }
    BigInt total = 0;
    for (Literal choice : {branch, -branch}) {
      std::vector<Clause> branch_clauses = clauses;
      branch_clauses.push_back({choice});
      total += count(std::move(branch_clauses), scope);
    }
    cache_.emplace(std::move(key), total);
    return total;
  }

  std::uint64_t budget_;
  std::uint64_t decisions_ = 0;
  std::unordered_map<std::vector<int>, BigInt, KeyHash> cache_;
};

}  // namespace

BigInt count_solutions(const CnfFormula& cnf, const CountOptions& options) {
  std::vector<int> scope(cnf.variable_count());
  std::iota(scope.begin(), scope.end(), 1);
  return Counter(options.decision_budget).count(cnf.clauses, std::move(scope));
}

}  // namespace varitune::logic
