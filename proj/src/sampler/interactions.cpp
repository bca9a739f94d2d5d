// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/sampler/interactions.hpp"

#include "varitune/error.hpp"

namespace varitune::sampler {

std::vector<logic::Literal> Interaction::as_literals() const {
  std::vector<logic::Literal> out;
  out.reserve(literals.size());
  for (const auto& [feature, value] : literals) {
    out.push_back(logic::CnfFormula::literal(feature, value));
  }
  return out;
}

bool Interaction::covered_by(std::span<const char> assignment) const {
  for (const auto& [feature, value] : literals) {
    if ((assignment[feature] != 0) != value) return false;
  }
  return true;
}

InteractionSpace::InteractionSpace(logic::Reasoner& reasoner, std::size_t t)
    : t_(t), concrete_(reasoner.model().concrete_indices()) {
  if (t == 0 || t > 6) throw ValidationError("interaction strength must be in [1, 6]");
  const std::size_t m = concrete_.size();
  if (m >= t) {
    std::vector<std::uint32_t> combo(t);
    for (std::size_t i = 0; i < t; ++i) combo[i] = static_cast<std::uint32_t>(i);
    for (;;) {
      combos_.push_back(combo);
      std::size_t k = t;
      while (k > 0 && combo[k - 1] == m - t + k - 1) --k;
      if (k == 0) break;
      ++combo[k - 1];
      for (std::size_t j = k; j < t; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  valid_.assign(combos_.size() * polarity_count(), 0);

  // Witnesses validate every interaction they cover; SAT is only consulted
  // for interactions no witness has reached yet.
  reasoner.reset_heuristic();
  std::vector<char> decided(valid_.size(), 0);
  for (std::size_t index = 0; index < valid_.size(); ++index) {
    if (decided[index]) continue;
    const Interaction inter = interaction(index);
    const auto lits = inter.as_literals();
    if (auto witness = reasoner.witness(lits)) {
      for (std::size_t c = 0; c < combos_.size(); ++c) {
        std::size_t bits = 0;
        for (std::size_t k = 0; k < t_; ++k) {
          if ((*witness)[concrete_[combos_[c][k]]]) bits |= std::size_t{1} << k;
        }
        const std::size_t covered_index = c * polarity_count() + bits;
        if (!valid_[covered_index]) {
          valid_[covered_index] = 1;
          ++valid_count_;
        }
        decided[covered_index] = 1;
      }
    } else {
      decided[index] = 1;
    }
  }
}

Interaction InteractionSpace::interaction(std::size_t index) const {
  const std::size_t combo = index / polarity_count();
  const std::size_t bits = index % polarity_count();
  Interaction out;
  for (std::size_t k = 0; k < t_; ++k) {
    out.literals.emplace_back(concrete_[combos_[combo][k]],
                              ((bits >> k) & 1u) != 0);
  }
  return out;
}

std::size_t InteractionSpace::mark(std::span<const char> assignment,
                                   std::vector<char>& covered) const {
  std::size_t fresh = 0;
  for (std::size_t c = 0; c < combos_.size(); ++c) {
    std::size_t bits = 0;
    for (std::size_t k = 0; k < t_; ++k) {
      if (assignment[concrete_[combos_[c][k]]]) bits |= std::size_t{1} << k;
    }
    const std::size_t index = c * polarity_count() + bits;
    if (!covered[index]) {
      covered[index] = 1;
      if (valid_[index]) ++fresh;
    }
  }
  return fresh;
}

std::size_t InteractionSpace::covered_count(
    std::span<const logic::Configuration> configs) const {
  std::vector<char> covered(valid_.size(), 0);
  std::size_t total = 0;
  for (const auto& config : configs) total += mark(config.assignment, covered);
  return total;
}

double InteractionSpace::coverage(
    std::span<const logic::Configuration> configs) const {
  if (valid_count_ == 0) return 1.0;
  return static_cast<double>(covered_count(configs)) /
         static_cast<double>(valid_count_);
}

}  // namespace varitune::sampler
