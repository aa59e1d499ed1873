#include "folpipe/fol/analysis.hpp"

#include <algorithm>

namespace folpipe::fol {

namespace {

void free_vars_walk(const Formula& f, std::vector<std::string>& bound,
                    std::set<std::string>& out) {
  switch (f.kind) {
    case Connective::Atom:
      for (const Term& t : f.args) {
        if (t.is_variable() &&
            std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
          out.insert(t.name);
        }
      }
      return;
    case Connective::ForAll:
    case Connective::Exists:
      bound.push_back(f.label);
      free_vars_walk(*f.lhs, bound, out);
      bound.pop_back();
      return;
    default:
      if (f.lhs) free_vars_walk(*f.lhs, bound, out);
      if (f.rhs) free_vars_walk(*f.rhs, bound, out);
      return;
  }
}

bool uses_variable(const Formula& f, const std::string& var) {
  switch (f.kind) {
    case Connective::Atom:
      for (const Term& t : f.args) {
        if (t.is_variable() && t.name == var) return true;
      }
      return false;
    case Connective::ForAll:
    case Connective::Exists:
      // An inner quantifier over the same name shadows the outer one.
      if (f.label == var) return false;
      return uses_variable(*f.lhs, var);
    default:
      return (f.lhs && uses_variable(*f.lhs, var)) || (f.rhs && uses_variable(*f.rhs, var));
  }
}

void vacuous_walk(const Formula& f, std::vector<VacuousQuantifier>& out) {
  if (is_quantifier(f.kind)) {
    if (!uses_variable(*f.lhs, f.label)) out.push_back({f.kind, f.label, f.span});
  }
  if (f.lhs) vacuous_walk(*f.lhs, out);
  if (f.rhs) vacuous_walk(*f.rhs, out);
}

void constant_fact_walk(const Formula& f, int quantifier_depth,
                        std::vector<ConstantFact>& out) {
  switch (f.kind) {
    case Connective::Atom: {
      if (quantifier_depth == 0 || f.args.empty()) return;
      const bool all_const = std::all_of(f.args.begin(), f.args.end(),
                                         [](const Term& t) { return !t.is_variable(); });
      if (all_const) out.push_back({f.label, f.span});
      return;
    }
    case Connective::ForAll:
    case Connective::Exists:
      constant_fact_walk(*f.lhs, quantifier_depth + 1, out);
      return;
    default:
      if (f.lhs) constant_fact_walk(*f.lhs, quantifier_depth, out);
      if (f.rhs) constant_fact_walk(*f.rhs, quantifier_depth, out);
      return;
  }
}

void quantified_names(const Formula& f, std::set<std::string>& out) {
  if (is_quantifier(f.kind)) out.insert(f.label);
  if (f.lhs) quantified_names(*f.lhs, out);
  if (f.rhs) quantified_names(*f.rhs, out);
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_walk(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

std::vector<VacuousQuantifier> vacuous_quantifiers(const Formula& f) {
  std::vector<VacuousQuantifier> out;
  vacuous_walk(f, out);
  return out;
}

std::vector<ConstantFact> constant_facts_under_quantifiers(const Formula& f) {
  std::vector<ConstantFact> out;
  constant_fact_walk(f, 0, out);
  return out;
}

std::vector<std::string> requantified_across_implication(const Formula& f) {
  if (f.kind != Connective::Implies) return {};
  std::set<std::string> lhs, rhs;
  quantified_names(*f.lhs, lhs);
  quantified_names(*f.rhs, rhs);
  std::vector<std::string> both;
  std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                        std::back_inserter(both));
  return both;
}

void collect_identifiers(const Formula& f, std::set<std::string>& out) {
  if (f.kind == Connective::Atom) {
    out.insert(f.label);
    for (const Term& t : f.args) out.insert(t.name);
  }
  if (is_quantifier(f.kind)) out.insert(f.label);
  if (f.lhs) collect_identifiers(*f.lhs, out);
  if (f.rhs) collect_identifiers(*f.rhs, out);
}

std::set<std::string> collect_constants(const Formula& f) {
  std::set<std::string> out;
  for_each_atom(f, [&](const Formula& atom) {
    for (const Term& t : atom.args) {
      if (!t.is_variable()) out.insert(t.name);
    }
  });
  return out;
}

void for_each_atom(const Formula& f, const std::function<void(const Formula&)>& fn) {
  if (f.kind == Connective::Atom) {
    fn(f);
    return;
  }
  if (f.lhs) for_each_atom(*f.lhs, fn);
  if (f.rhs) for_each_atom(*f.rhs, fn);
}

}  // namespace folpipe::fol
