// Copyright 2026 The Varitune Authors
// SPDX-License-Identifier: Apache-2.0

#include "varitune/logic/cnf.hpp"

#include <fmt/format.h>

#include <utility>

namespace varitune::logic {
namespace {

using fm::Formula;

// Negation-normal form: only kVar, kNot(kVar), kAnd, kOr remain.
Formula to_nnf(const Formula& f, bool negated) {
  switch (f.op) {
    case Formula::Op::kVar:
      return negated ? Formula::negate(f) : f;
    case Formula::Op::kNot:
      return to_nnf(f.operands[0], !negated);
    case Formula::Op::kAnd:
    case Formula::Op::kOr: {
      std::vector<Formula> parts;
      for (const Formula& op : f.operands) parts.push_back(to_nnf(op, negated));
      const bool conj = (f.op == Formula::Op::kAnd) != negated;
      return conj ? Formula::all_of(std::move(parts))
                  : Formula::any_of(std::move(parts));
    }
    case Formula::Op::kImplies: {
      // a => b  ==  !a | b
      std::vector<Formula> parts{to_nnf(f.operands[0], !negated),
                                 to_nnf(f.operands[1], negated)};
      return negated ? Formula::all_of(std::move(parts))
                     : Formula::any_of(std::move(parts));
    }
    case Formula::Op::kIff: {
      const Formula& a = f.operands[0];
      const Formula& b = f.operands[1];
      if (!negated) {
        // (!a | b) & (a | !b)
        return Formula::all_of(
            {Formula::any_of({to_nnf(a, true), to_nnf(b, false)}),
             Formula::any_of({to_nnf(a, false), to_nnf(b, true)})});
      }
      // (a & !b) | (!a & b)
      return Formula::any_of(
          {Formula::all_of({to_nnf(a, false), to_nnf(b, true)}),
           Formula::all_of({to_nnf(a, true), to_nnf(b, false)})});
    }
  }
  return f;
}

class Tseitin {
 public:
  explicit Tseitin(CnfFormula& cnf) : cnf_(cnf) {}

  void assert_true(const Formula& nnf) {
    switch (nnf.op) {
      case Formula::Op::kAnd:
        for (const Formula& part : nnf.operands) assert_true(part);
        return;
      case Formula::Op::kOr: {
        Clause clause;
        for (const Formula& part : nnf.operands) clause.push_back(define(part));
        cnf_.clauses.push_back(std::move(clause));
        return;
      }
      default:
        cnf_.clauses.push_back({define(nnf)});
        return;
    }
  }

 private:
  Literal define(const Formula& nnf) {
    if (nnf.op == Formula::Op::kVar) return CnfFormula::literal(nnf.feature);
    if (nnf.op == Formula::Op::kNot) {
      return CnfFormula::literal(nnf.operands[0].feature, false);
    }
    Clause parts;
    for (const Formula& part : nnf.operands) parts.push_back(define(part));
    ++cnf_.aux_count;
    const Literal aux = static_cast<Literal>(cnf_.variable_count());
    if (nnf.op == Formula::Op::kAnd) {
      Clause back{aux};
      for (Literal l : parts) {
        cnf_.clauses.push_back({-aux, l});
        back.push_back(-l);
      }
      cnf_.clauses.push_back(std::move(back));
    } else {
      Clause forward{-aux};
      for (Literal l : parts) {
        cnf_.clauses.push_back({aux, -l});
        forward.push_back(l);
      }
      cnf_.clauses.push_back(std::move(forward));
    }
    return aux;
  }

  CnfFormula& cnf_;
};

}  // namespace

CnfFormula encode(const fm::FeatureModel& model) {
  CnfFormula cnf;
  cnf.feature_count = model.size();
  cnf.clauses.push_back({CnfFormula::literal(0)});
  for (std::size_t i = 0; i < model.size(); ++i) {
    const fm::Feature& f = model.feature(i);
    const Literal self = CnfFormula::literal(i);
    if (f.parent) {
      const Literal parent = CnfFormula::literal(*f.parent);
      cnf.clauses.push_back({-self, parent});
      if (f.edge == fm::EdgeKind::kMandatory) {
        cnf.clauses.push_back({-parent, self});
      }
    }
    if (f.group != fm::GroupKind::kNone) {
      Clause at_least_one{-self};
      for (std::size_t child : f.children) {
        at_least_one.push_back(CnfFormula::literal(child));
      }
      cnf.clauses.push_back(std::move(at_least_one));
      if (f.group == fm::GroupKind::kAlternative) {
        for (std::size_t a = 0; a < f.children.size(); ++a) {
          for (std::size_t b = a + 1; b < f.children.size(); ++b) {
            cnf.clauses.push_back({CnfFormula::literal(f.children[a], false),
                                   CnfFormula::literal(f.children[b], false)});
          }
        }
      }
    }
  }
  Tseitin tseitin(cnf);
  for (const Formula& constraint : model.constraints()) {
    tseitin.assert_true(to_nnf(constraint, false));
  }
  return cnf;
}

std::string to_dimacs(const fm::FeatureModel& model, const CnfFormula& cnf) {
  std::string out;
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += fmt::format("c {} {}\n", i + 1, model.feature(i).name);
  }
  out += fmt::format("p cnf {} {}\n", cnf.variable_count(), cnf.clauses.size());
  for (const Clause& clause : cnf.clauses) {
    for (Literal l : clause) out += fmt::format("{} ", l);
    out += "0\n";
  }
  return out;
}

}  // namespace varitune::logic
