// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/logic/reasoner.hpp"

#include <fmt/format.h>

#include "varitune/error.hpp"
#include "varitune/random.hpp"

namespace varitune::logic {

std::vector<std::string> Configuration::selected_names(
    const fm::FeatureModel& model) const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i]) names.push_back(model.feature(i).name);
  }
  return names;
}

Configuration make_configuration(const fm::FeatureModel& model,
                                 std::vector<char> assignment, std::string id) {
  if (assignment.size() != model.size()) {
    throw ValidationError("assignment size does not match the model");
  }
  Configuration config;
  config.id = std::move(id);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const fm::Feature& f = model.feature(i);
    if (!assignment[i] || !f.attribute) continue;
    auto [it, inserted] =
        config.parameters.emplace(f.attribute->param, f.attribute->value);
    if (!inserted && it->second != f.attribute->value) {
      throw ValidationError(fmt::format(
          "parameter '{}' receives two values ('{}', '{}')", f.attribute->param,
          it->second, f.attribute->value));
    }
  }
  config.assignment = std::move(assignment);
  return config;
}

Reasoner::Reasoner(const fm::FeatureModel& model)
    : model_(&model), cnf_(encode(model)), solver_(cnf_) {}

bool Reasoner::satisfiable() { return extensible({}); }

bool Reasoner::extensible(std::span<const Literal> literals) {
  switch (solver_.solve(literals, decision_budget)) {
    case Solver::Result::kSat:
      return true;
    case Solver::Result::kUnsat:
      return false;
    case Solver::Result::kUnknown:
      break;
  }
  throw BudgetExceeded("satisfiability check exceeded its decision budget");
}

std::optional<std::vector<char>> Reasoner::witness(
    std::span<const Literal> literals) {
  if (!extensible(literals)) return std::nullopt;
  std::vector<char> assignment(model_->size());
  for (std::size_t i = 0; i < model_->size(); ++i) {
    assignment[i] = solver_.value(static_cast<int>(i) + 1) ? 1 : 0;
  }
  return assignment;
}

void Reasoner::randomize(std::uint64_t seed) {
  Rng rng(seed);
  solver_.randomize(rng);
}

void Reasoner::reset_heuristic(bool select_first) {
  solver_.set_order({});
  solver_.set_all_phases(select_first);
}

std::vector<Literal> to_literals(const fm::FeatureModel& model,
                                 const PartialAssignment& partial) {
  std::vector<Literal> literals;
  literals.reserve(partial.size());
  for (const auto& [name, value] : partial) {
    literals.push_back(CnfFormula::literal(model.index_of(name), value));
  }
  return literals;
}

bool is_valid(const fm::FeatureModel& model, const PartialAssignment& assignment) {
  const std::vector<Literal> literals = to_literals(model, assignment);
  Reasoner reasoner(model);
  return reasoner.extensible(literals);
}

bool is_valid(const fm::FeatureModel& model, std::span<const char> assignment) {
  if (assignment.size() != model.size()) return false;
  std::vector<Literal> literals;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    literals.push_back(CnfFormula::literal(i, assignment[i] != 0));
  }
  Reasoner reasoner(model);
  return reasoner.extensible(literals);
}

BigInt count_models(const fm::FeatureModel& model, const CountOptions& options) {
  // The encoding defines auxiliary variables by equivalences, so counting
  // all variables is exact over the feature variables.
  return count_solutions(encode(model), options);
}

std::vector<std::string> dead_features(const fm::FeatureModel& model) {
  Reasoner reasoner(model);
  std::vector<char> alive(model.size(), 0);
  auto mark = [&](const std::vector<char>& assignment) {
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i]) alive[i] = 1;
    }
  };
  // Positive phases make witnesses select as much as possible.
  reasoner.reset_heuristic(true);
  std::vector<std::string> dead;
  auto first = reasoner.witness({});
  if (!first) {
    for (const fm::Feature& f : model.features()) dead.push_back(f.name);
    return dead;
  }
  mark(*first);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (alive[i]) continue;
    const Literal lit = CnfFormula::literal(i);
    if (auto w = reasoner.witness({&lit, 1})) {
      mark(*w);
    } else {
      dead.push_back(model.feature(i).name);
    }
  }
  return dead;
}

Configuration complete(const fm::FeatureModel& model,
                       const PartialAssignment& partial, std::uint64_t seed) {
  const std::vector<Literal> literals = to_literals(model, partial);
  Reasoner reasoner(model);
  reasoner.randomize(seed);
  auto assignment = reasoner.witness(literals);
  if (!assignment) {
    throw ValidationError("partial assignment cannot be extended to a valid configuration");
  }
  return make_configuration(model, std::move(*assignment));
}

}  // namespace varitune::logic
