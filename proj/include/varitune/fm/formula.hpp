// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varitune::fm {

// Propositional formula over feature indices. And/Or are n-ary (>= 2
// operands); Implies/Iff are binary; Not is unary.
struct Formula {
  enum class Op { kVar, kNot, kAnd, kOr, kImplies, kIff };

  Op op = Op::kVar;
  std::size_t feature = 0;  // kVar only
  std::vector<Formula> operands;

  static Formula var(std::size_t feature);
  static Formula negate(Formula operand);
  static Formula all_of(std::vector<Formula> operands);
  static Formula any_of(std::vector<Formula> operands);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);

  // `assignment[i]` is the truth value of feature i.
  bool evaluate(std::span<const char> assignment) const;

  void collect_features(std::vector<std::size_t>& out) const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

}  // namespace varitune::fm
