// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/fm/formula.hpp"

#include <algorithm>
#include <utility>

namespace varitune::fm {

Formula Formula::var(std::size_t feature) {
  Formula f;
  f.op = Op::kVar;
  f.feature = feature;
  return f;
}

Formula Formula::negate(Formula operand) {
  Formula f;
  f.op = Op::kNot;
  f.operands.push_back(std::move(operand));
  return f;
}

Formula Formula::all_of(std::vector<Formula> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  Formula f;
  f.op = Op::kAnd;
  f.operands = std::move(operands);
  return f;
}

Formula Formula::any_of(std::vector<Formula> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  Formula f;
  f.op = Op::kOr;
  f.operands = std::move(operands);
  return f;
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  Formula f;
  f.op = Op::kImplies;
  f.operands.push_back(std::move(lhs));
  f.operands.push_back(std::move(rhs));
  return f;
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  Formula f;
  f.op = Op::kIff;
  f.operands.push_back(std::move(lhs));
  f.operands.push_back(std::move(rhs));
  return f;
}

bool Formula::evaluate(std::span<const char> assignment) const {
  switch (op) {
    case Op::kVar:
      return assignment[feature] != 0;
    case Op::kNot:
      return !operands[0].evaluate(assignment);
    case Op::kAnd:
      return std::all_of(operands.begin(), operands.end(),
                         [&](const Formula& f) { return f.evaluate(assignment); });
    case Op::kOr:
      return std::any_of(operands.begin(), operands.end(),
                         [&](const Formula& f) { return f.evaluate(assignment); });
    case Op::kImplies:
      return !operands[0].evaluate(assignment) ||
             operands[1].evaluate(assignment);
    case Op::kIff:
      return operands[0].evaluate(assignment) ==
             operands[1].evaluate(assignment);
  }
  return false;
}

void Formula::collect_features(std::vector<std::size_t>& out) const {
  if (op == Op::kVar) {
    out.push_back(feature);
    return;
  }
  for (const Formula& f : operands) f.collect_features(out);
}

}  // namespace varitune::fm
