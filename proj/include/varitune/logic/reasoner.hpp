// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varitune/fm/feature_model.hpp"
#include "varitune/logic/cnf.hpp"
#include "varitune/logic/counter.hpp"
#include "varitune/logic/solver.hpp"

namespace varitune::logic {

// Feature name -> selection; may be partial.
using PartialAssignment = std::map<std::string, bool>;

// A total, valid selection over every feature of a model.
struct Configuration {
  std::string id;
  std::vector<char> assignment;  // indexed by feature, document order
  std::map<std::string, std::string> parameters;

  bool selected(std::size_t feature) const { return assignment[feature] != 0; }
  std::vector<std::string> selected_names(const fm::FeatureModel& model) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Builds a Configuration from a total assignment and derives its parameter
// map. Throws ValidationError if two selected features set the same
// parameter.
Configuration make_configuration(const fm::FeatureModel& model,
                                 std::vector<char> assignment,
                                 std::string id = {});

// Stateful reasoning over one model: keeps a solver with learned clauses so
// repeated extensibility queries are cheap. Single-threaded.
class Reasoner {
 public:
  explicit Reasoner(const fm::FeatureModel& model);

  const fm::FeatureModel& model() const { return *model_; }
  const CnfFormula& cnf() const { return cnf_; }

  bool satisfiable();

  // True iff the literals extend to a valid configuration. Throws
  // BudgetExceeded if the solver cannot decide within its budget.
  bool extensible(std::span<const Literal> literals);

  // Like extensible(), but on success also returns the feature assignment of
  // the witness found under the current decision heuristic.
  std::optional<std::vector<char>> witness(std::span<const Literal> literals);

  // Decision heuristic control used for seeded completion.
  void randomize(std::uint64_t seed);
  // Index-order decisions; `select_first` decides variables true first.
  void reset_heuristic(bool select_first = false);

  std::uint64_t decision_budget = Solver::kDefaultBudget;

 private:
  const fm::FeatureModel* model_;
  CnfFormula cnf_;
  Solver solver_;
};

std::vector<Literal> to_literals(const fm::FeatureModel& model,
                                 const PartialAssignment& partial);

// Partial input: true iff extensible. Total input: true iff it is a valid
// configuration. Throws ValidationError on unknown feature names.
bool is_valid(const fm::FeatureModel& model, const PartialAssignment& assignment);
bool is_valid(const fm::FeatureModel& model, std::span<const char> assignment);

// Exact number of valid configurations. Throws BudgetExceeded.
BigInt count_models(const fm::FeatureModel& model,
                    const CountOptions& options = {});

// Features false in every valid configuration (all features when the model
// is unsatisfiable), in document order.
std::vector<std::string> dead_features(const fm::FeatureModel& model);

// A valid configuration consistent with `partial`, deterministic in `seed`.
// Throws ValidationError if `partial` is not extensible.
Configuration complete(const fm::FeatureModel& model,
                       const PartialAssignment& partial, std::uint64_t seed);

}  // namespace varitune::logic
