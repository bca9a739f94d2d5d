// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/sampler/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "varitune/error.hpp"
#include "varitune/random.hpp"
#include "varitune/sampler/interactions.hpp"

namespace varitune::sampler {
namespace {

using logic::Configuration;
using logic::Literal;

std::string_view id_prefix(Strategy s) {
  switch (s) {
    case Strategy::kRandom: return "r";
    case Strategy::kGreedy2Wise: return "g";
    case Strategy::kIncremental2Wise: return "i";
    case Strategy::kCombined: return "c";
  }
  return "c";
}

void assign_ids(Sample& sample) {
  const std::size_t width =
      std::max<std::size_t>(3, fmt::format("{}", sample.size()).size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    sample.configurations[i].id =
        fmt::format("{}{:0{}}", id_prefix(sample.strategy), i + 1, width);
  }
}

void finalize(Sample& sample, const InteractionSpace& space) {
  sample.t = space.t();
  sample.valid_interactions = space.valid_count();
  sample.covered_interactions = space.covered_count(sample.configurations);
  sample.coverage = space.coverage(sample.configurations);
}

// Feature-level view of a partial assignment: -1 free, 0 false, 1 true.
struct Partial {
  std::vector<signed char> fixed;
  std::vector<Literal> literals;
  std::vector<char> witness;

  explicit Partial(std::size_t n) : fixed(n, -1) {}

  bool conflicts(const Interaction& inter) const {
    for (const auto& [f, v] : inter.literals) {
      if (fixed[f] >= 0 && (fixed[f] != 0) != v) return true;
    }
    return false;
  }
  bool contains(const Interaction& inter) const {
    for (const auto& [f, v] : inter.literals) {
      if (fixed[f] < 0 || (fixed[f] != 0) != v) return false;
    }
    return true;
  }
  std::vector<Literal> with(const Interaction& inter) const {
    std::vector<Literal> lits = literals;
    for (const auto& [f, v] : inter.literals) {
      if (fixed[f] < 0) lits.push_back(logic::CnfFormula::literal(f, v));
    }
    return lits;
  }
  void add(const Interaction& inter) {
    for (const auto& [f, v] : inter.literals) {
      if (fixed[f] < 0) {
        fixed[f] = v ? 1 : 0;
        literals.push_back(logic::CnfFormula::literal(f, v));
      }
    }
  }
};

// Tries to extend `partial` by `inter`; updates the witness on success.
bool try_absorb(logic::Reasoner& reasoner, Partial& partial,
                const Interaction& inter) {
  if (partial.conflicts(inter)) return false;
  if (inter.covered_by(partial.witness)) {
    partial.add(inter);
    return true;
  }
  const auto lits = partial.with(inter);
  auto witness = reasoner.witness(lits);
  if (!witness) return false;
  partial.witness = std::move(*witness);
  partial.add(inter);
  return true;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRandom: return "random";
    case Strategy::kGreedy2Wise: return "greedy2wise";
    case Strategy::kIncremental2Wise: return "incremental2wise";
    case Strategy::kCombined: return "combined";
  }
  return "combined";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kRandom, Strategy::kGreedy2Wise,
                     Strategy::kIncremental2Wise, Strategy::kCombined}) {
    if (strategy_name(s) == name) return s;
  }
  throw ValidationError(fmt::format("unknown sampling strategy '{}'", name));
}

Sample sample_random(const fm::FeatureModel& model, std::optional<std::size_t> n,
                     std::uint64_t seed, std::size_t t) {
  logic::Reasoner reasoner(model);
  if (!reasoner.satisfiable()) throw ValidationError("feature model is unsatisfiable");
  const std::size_t wanted = n.value_or(model.size());
  const std::size_t budget = 10 * wanted + 100;

  Sample sample;
  sample.strategy = Strategy::kRandom;
  sample.seed = seed;
  std::set<std::vector<char>> seen;
  for (std::size_t attempt = 0; attempt < budget && seen.size() < wanted;
       ++attempt) {
    reasoner.randomize(mix_seed(seed ^ mix_seed(attempt)));
    auto assignment = reasoner.witness({});
    if (seen.insert(*assignment).second) {
      sample.configurations.push_back(
          logic::make_configuration(model, std::move(*assignment)));
    }
  }
  if (seen.size() < wanted) {
    // Enumerate with blocking clauses over the feature variables.
    sample.exhausted = true;
    logic::CnfFormula cnf = logic::encode(model);
    logic::Solver solver(cnf);
    std::vector<std::vector<char>> extra;
    while (seen.size() + extra.size() < wanted &&
           solver.solve() == logic::Solver::Result::kSat) {
      std::vector<char> a(model.size());
      logic::Clause block;
      for (std::size_t i = 0; i < model.size(); ++i) {
        a[i] = solver.value(static_cast<int>(i) + 1) ? 1 : 0;
        block.push_back(logic::CnfFormula::literal(i, a[i] == 0));
      }
      solver.add_clause(block);
      if (!seen.count(a)) extra.push_back(std::move(a));
    }
    for (auto& a : extra) {
      sample.configurations.push_back(logic::make_configuration(model, std::move(a)));
    }
  }
  assign_ids(sample);
  logic::Reasoner coverage_reasoner(model);
  finalize(sample, InteractionSpace(coverage_reasoner, t));
  return sample;
}

Sample sample_twise_greedy(const fm::FeatureModel& model, std::size_t t,
                           std::uint64_t seed) {
  logic::Reasoner reasoner(model);
  if (!reasoner.satisfiable()) throw ValidationError("feature model is unsatisfiable");
  const InteractionSpace space(reasoner, t);
  reasoner.randomize(seed);

  Sample sample;
  sample.strategy = Strategy::kGreedy2Wise;
  sample.seed = seed;
  std::vector<char> covered(space.size(), 0);
  std::size_t remaining = space.valid_count();
  std::size_t cursor = 0;
  while (remaining > 0) {
    while (!space.valid(cursor) || covered[cursor]) ++cursor;
    const Interaction first = space.interaction(cursor);
    Partial partial(model.size());
    partial.witness = *reasoner.witness(first.as_literals());
    partial.add(first);
    for (std::size_t index = cursor + 1; index < space.size(); ++index) {
      if (!space.valid(index) || covered[index]) continue;
      try_absorb(reasoner, partial, space.interaction(index));
    }
    remaining -= space.mark(partial.witness, covered);
    sample.configurations.push_back(
        logic::make_configuration(model, std::move(partial.witness)));
  }
  assign_ids(sample);
  finalize(sample, space);
  return sample;
}

Sample sample_twise_incremental(const fm::FeatureModel& model, std::size_t t,
                                std::uint64_t seed) {
  logic::Reasoner reasoner(model);
  if (!reasoner.satisfiable()) throw ValidationError("feature model is unsatisfiable");
  const InteractionSpace space(reasoner, t);
  reasoner.randomize(seed);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.valid(i)) order.push_back(i);
  }
  Rng rng(mix_seed(seed));
  rng.shuffle(order);

  std::vector<Partial> partials;
  for (std::size_t index : order) {
    const Interaction inter = space.interaction(index);
    bool placed = false;
    for (const Partial& p : partials) {
      if (p.contains(inter)) {
        placed = true;
        break;
      }
    }
    // Prefer partials whose witness already agrees: no solver call needed.
    for (std::size_t pass = 0; pass < 2 && !placed; ++pass) {
      for (Partial& p : partials) {
        if (p.conflicts(inter)) continue;
        if (pass == 0 && !inter.covered_by(p.witness)) continue;
        if (try_absorb(reasoner, p, inter)) {
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      Partial p(model.size());
      p.witness = *reasoner.witness(inter.as_literals());
      p.add(inter);
      partials.push_back(std::move(p));
    }
  }

  Sample sample;
  sample.strategy = Strategy::kIncremental2Wise;
  sample.seed = seed;
  std::set<std::vector<char>> seen;
  for (Partial& p : partials) {
    if (seen.insert(p.witness).second) {
      sample.configurations.push_back(
          logic::make_configuration(model, std::move(p.witness)));
    }
  }
  if (sample.configurations.empty()) {
    // No interactions to cover (fewer than t concrete features).
    sample.configurations.push_back(
        logic::make_configuration(model, *reasoner.witness({})));
  }
  assign_ids(sample);
  finalize(sample, space);
  return sample;
}

double coverage_of(const fm::FeatureModel& model,
                   const std::vector<Configuration>& configs, std::size_t t) {
  logic::Reasoner reasoner(model);
  return InteractionSpace(reasoner, t).coverage(configs);
}

Sample merge_samples(const fm::FeatureModel& model,
                     const std::vector<Sample>& samples, std::size_t t) {
  Sample merged;
  merged.strategy = Strategy::kCombined;
  merged.seed = samples.empty() ? 0 : samples.front().seed;
  std::set<std::vector<char>> seen;
  for (const Sample& s : samples) {
    merged.exhausted = merged.exhausted || s.exhausted;
    for (const Configuration& c : s.configurations) {
      if (seen.insert(c.assignment).second) merged.configurations.push_back(c);
    }
  }
  logic::Reasoner reasoner(model);
  finalize(merged, InteractionSpace(reasoner, t));
  return merged;
}

}  // namespace varitune::sampler
