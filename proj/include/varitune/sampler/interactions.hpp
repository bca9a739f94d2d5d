// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "varitune/logic/reasoner.hpp"

namespace varitune::sampler {

// t concrete-feature literals; features strictly increasing.
struct Interaction {
  std::vector<std::pair<std::size_t, bool>> literals;

  std::vector<logic::Literal> as_literals() const;
  bool covered_by(std::span<const char> assignment) const;
  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Every t-wise interaction over the concrete features of a model, indexed
// by (feature combination in lexicographic order, polarity pattern), with
// validity decided by SAT. Lower indices come first in every traversal, so
// index order is the deterministic tie-break for samplers.
class InteractionSpace {
 public:
  // Throws BudgetExceeded if an extensibility check cannot be decided.
  InteractionSpace(logic::Reasoner& reasoner, std::size_t t);

  std::size_t t() const { return t_; }
  std::size_t size() const { return valid_.size(); }
  std::size_t valid_count() const { return valid_count_; }
  bool valid(std::size_t index) const { return valid_[index] != 0; }
  Interaction interaction(std::size_t index) const;

  // Marks interactions covered by `assignment`; returns the number newly
  // marked among valid interactions.
  std::size_t mark(std::span<const char> assignment,
                   std::vector<char>& covered) const;

  // covered / valid over the given configurations; 1.0 when no valid
  // interaction exists.
  double coverage(std::span<const logic::Configuration> configs) const;
  std::size_t covered_count(std::span<const logic::Configuration> configs) const;

 private:
  std::size_t polarity_count() const { return std::size_t{1} << t_; }

  std::size_t t_;
  std::vector<std::size_t> concrete_;
  std::vector<std::vector<std::uint32_t>> combos_;  // positions in concrete_
  std::vector<char> valid_;
  std::size_t valid_count_ = 0;
};

}  // namespace varitune::sampler
