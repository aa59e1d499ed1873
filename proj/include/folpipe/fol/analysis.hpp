#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "folpipe/fol/ast.hpp"

namespace folpipe::fol {

// Variables occurring in atom arguments that no enclosing quantifier binds.
std::set<std::string> free_variables(const Formula& f);

bool is_closed(const Formula& f);

struct VacuousQuantifier {
  Connective kind;
  std::string var;
  SourceSpan span;
};

// Quantifiers whose bound variable does not occur in their body.
std::vector<VacuousQuantifier> vacuous_quantifiers(const Formula& f);

struct ConstantFact {
  std::string predicate;
  SourceSpan span;
};

// Atoms of arity >= 1 whose arguments are all constants, occurring inside
// the scope of some quantifier ("In(indonesia)" under a forall). These are
// the "quantifier applied to constant facts" pattern.
std::vector<ConstantFact> constant_facts_under_quantifiers(const Formula& f);

// Variables quantified on both sides of a top-level implication (the
// re-quantification pattern: "exists y (...) -> exists y (...)").
std::vector<std::string> requantified_across_implication(const Formula& f);

// Every predicate, constant and variable name occurring in the formula.
void collect_identifiers(const Formula& f, std::set<std::string>& out);

std::set<std::string> collect_constants(const Formula& f);

// Depth-first visit of every atom.
void for_each_atom(const Formula& f, const std::function<void(const Formula&)>& fn);

}  // namespace folpipe::fol
