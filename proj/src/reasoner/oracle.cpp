#include "folpipe/reasoner/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <string>

#include "folpipe/fol/analysis.hpp"
#include "folpipe/reasoner/clausify.hpp"

namespace folpipe::reasoner {

namespace {

using fol::Connective;
using fol::Formula;
using fol::FormulaPtr;

// An existential inside a universal scope (in NNF) has no finite witness
// domain; such instances are outside the oracle's exact fragment. Plain
// existentials are counted: each needs one fresh witness constant for the
// finite expansion to match first-order satisfiability.
int count_existential_witnesses(const Formula& nnf_formula, bool under_universal) {
  switch (nnf_formula.kind) {
    case Connective::Atom:
      return 0;
    case Connective::Exists:
      if (under_universal) {
        throw BoundExceeded(
            "existential quantifier under a universal; no finite domain is exact");
      }
      return 1 + count_existential_witnesses(*nnf_formula.lhs, under_universal);
    case Connective::ForAll:
      return count_existential_witnesses(*nnf_formula.lhs, true);
    default: {
      int n = 0;
      if (nnf_formula.lhs) n += count_existential_witnesses(*nnf_formula.lhs, under_universal);
      if (nnf_formula.rhs) n += count_existential_witnesses(*nnf_formula.rhs, under_universal);
      return n;
    }
  }
}

FormulaPtr ground(const Formula& f, const std::vector<std::string>& domain,
                  std::map<std::string, std::string>& binding) {
  switch (f.kind) {
    case Connective::Atom: {
      std::vector<fol::Term> args;
      args.reserve(f.args.size());
      for (const auto& t : f.args) {
        if (t.is_variable()) {
          const auto it = binding.find(t.name);
          assert(it != binding.end() && "oracle inputs must be closed");
          args.push_back(fol::Term::constant(it->second));
        } else {
          args.push_back(t);
        }
      }
      return Formula::atom(f.label, std::move(args));
    }
    case Connective::Not:
      return Formula::negation(ground(*f.lhs, domain, binding));
    case Connective::ForAll:
    case Connective::Exists: {
      const Connective fold =
          f.kind == Connective::ForAll ? Connective::And : Connective::Or;
      const auto saved = binding.find(f.label) != binding.end()
                             ? std::optional<std::string>(binding[f.label])
                             : std::nullopt;
      FormulaPtr acc;
      for (const auto& c : domain) {
        binding[f.label] = c;
        FormulaPtr expanded = ground(*f.lhs, domain, binding);
        acc = acc ? Formula::binary(fold, acc, expanded) : expanded;
      }
      if (saved) binding[f.label] = *saved;
      else binding.erase(f.label);
      return acc;
    }
    default:
      return Formula::binary(f.kind, ground(*f.lhs, domain, binding),
                             ground(*f.rhs, domain, binding));
  }
}

std::string atom_key(const Formula& atom) {
  std::string key = atom.label;
  key += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) key += ',';
    key += atom.args[i].name;
  }
  key += ')';
  return key;
}

using Assignment = std::map<std::string, int>;  // -1 unknown, 0 false, 1 true

// Three-valued evaluation; records the first atom whose value is unknown.
std::optional<bool> eval(const Formula& f, const Assignment& assign,
                         const std::string** first_unknown) {
  switch (f.kind) {
    case Connective::Atom: {
      const auto it = assign.find(atom_key(f));
      assert(it != assign.end());
      if (it->second < 0) {
        if (first_unknown && !*first_unknown) *first_unknown = &it->first;
        return std::nullopt;
      }
      return it->second == 1;
    }
    case Connective::Not: {
      const auto v = eval(*f.lhs, assign, first_unknown);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Connective::And: {
      const auto l = eval(*f.lhs, assign, first_unknown);
      if (l && !*l) return false;
      const auto r = eval(*f.rhs, assign, first_unknown);
      if (r && !*r) return false;
      if (l && r) return true;
      return std::nullopt;
    }
    case Connective::Or: {
      const auto l = eval(*f.lhs, assign, first_unknown);
      if (l && *l) return true;
      const auto r = eval(*f.rhs, assign, first_unknown);
      if (r && *r) return true;
      if (l && r) return false;
      return std::nullopt;
    }
    case Connective::Implies: {
      const auto l = eval(*f.lhs, assign, first_unknown);
      if (l && !*l) return true;
      const auto r = eval(*f.rhs, assign, first_unknown);
      if (r && *r) return true;
      if (l && r) return false;
      return std::nullopt;
    }
    case Connective::Iff: {
      const auto l = eval(*f.lhs, assign, first_unknown);
      const auto r = eval(*f.rhs, assign, first_unknown);
      if (l && r) return *l == *r;
      return std::nullopt;
    }
    case Connective::Xor: {
      const auto l = eval(*f.lhs, assign, first_unknown);
      const auto r = eval(*f.rhs, assign, first_unknown);
      if (l && r) return *l != *r;
      return std::nullopt;
    }
    default:
      assert(false && "quantifiers must be grounded away");
      return std::nullopt;
  }
}

// Fixes literal conjuncts up front; returns false on an immediate conflict.
bool collect_units(const Formula& f, bool value, Assignment& assign) {
  if (f.kind == Connective::Atom) {
    const std::string key = atom_key(f);
    auto& slot = assign[key];
    const int v = value ? 1 : 0;
    if (slot >= 0 && slot != v) return false;
    slot = v;
    return true;
  }
  if (f.kind == Connective::Not) return collect_units(*f.lhs, !value, assign);
  if (f.kind == Connective::And && value) {
    return collect_units(*f.lhs, true, assign) && collect_units(*f.rhs, true, assign);
  }
  if (f.kind == Connective::Or && !value) {
    return collect_units(*f.lhs, false, assign) && collect_units(*f.rhs, false, assign);
  }
  return true;  // not a literal context; nothing to propagate
}

bool assignment_search(const std::vector<FormulaPtr>& formulas, Assignment& assign) {
  bool all_true = true;
  const std::string* branch_atom = nullptr;
  for (const auto& f : formulas) {
    const auto v = eval(*f, assign, &branch_atom);
    if (v && !*v) return false;
    if (!v) all_true = false;
  }
  if (all_true) return true;
  assert(branch_atom);
  const std::string key = *branch_atom;
  for (int value : {1, 0}) {
    assign[key] = value;
    if (assignment_search(formulas, assign)) {
      assign[key] = -1;
      return true;
    }
  }
  assign[key] = -1;
  return false;
}

struct SideCheck {
  std::set<std::string> base_constants;
  std::set<std::string> identifiers;
  OracleLimits limits;

  // NNF, witness-extended domain, grounding, unit propagation, search.
  bool satisfiable(const std::vector<FormulaPtr>& formulas) const {
    std::vector<FormulaPtr> normal;
    normal.reserve(formulas.size());
    int witnesses = 0;
    for (const auto& f : formulas) {
      FormulaPtr n = to_nnf(*f, true);
      witnesses += count_existential_witnesses(*n, false);
      normal.push_back(std::move(n));
    }
    if (witnesses > 16) {
      throw BoundExceeded("instance needs " + std::to_string(witnesses) +
                          " existential witnesses; limit is 16");
    }
    std::vector<std::string> domain(base_constants.begin(), base_constants.end());
    int next_fresh = 0;
    auto fresh = [&] {
      for (;;) {
        std::string name = "w" + std::to_string(next_fresh++);
        if (!identifiers.count(name)) return name;
      }
    };
    for (int i = 0; i < witnesses; ++i) domain.push_back(fresh());
    if (domain.empty()) domain.push_back(fresh());  // quantifiers need a non-empty domain

    std::vector<FormulaPtr> ground_formulas;
    ground_formulas.reserve(normal.size());
    for (const auto& f : normal) {
      std::map<std::string, std::string> binding;
      ground_formulas.push_back(ground(*f, domain, binding));
    }

    Assignment assign;
    for (const auto& f : ground_formulas) {
      fol::for_each_atom(*f, [&](const Formula& atom) {
        assign.emplace(atom_key(atom), -1);
      });
    }
    for (const auto& f : ground_formulas) {
      if (!collect_units(*f, true, assign)) return false;
    }
    int free_atoms = 0;
    for (const auto& [key, v] : assign) {
      if (v < 0) ++free_atoms;
    }
    if (free_atoms > limits.max_free_atoms) {
      throw BoundExceeded("ground base needs " + std::to_string(free_atoms) +
                          " undetermined atoms; limit is " +
                          std::to_string(limits.max_free_atoms) + " (2^24 assignments)");
    }
    return assignment_search(ground_formulas, assign);
  }
};

}  // namespace

OracleResult grounding_oracle(const std::vector<fol::FormulaPtr>& premises,
                              const fol::FormulaPtr& conclusion,
                              const OracleLimits& limits) {
  assert(conclusion);

  SideCheck side;
  side.limits = limits;
  std::set<std::string> predicates;
  auto scan = [&](const Formula& f) {
    const auto cs = fol::collect_constants(f);
    side.base_constants.insert(cs.begin(), cs.end());
    fol::for_each_atom(f, [&](const Formula& atom) { predicates.insert(atom.label); });
    fol::collect_identifiers(f, side.identifiers);
  };
  for (const auto& p : premises) {
    if (p) scan(*p);
  }
  scan(*conclusion);

  if (side.base_constants.size() > limits.max_constants) {
    throw BoundExceeded("instance has " + std::to_string(side.base_constants.size()) +
                        " constants; limit is " + std::to_string(limits.max_constants));
  }
  if (predicates.size() > limits.max_predicates) {
    throw BoundExceeded("instance has " + std::to_string(predicates.size()) +
                        " predicates; limit is " + std::to_string(limits.max_predicates));
  }

  auto with_goal = [&](bool conclusion_value) {
    std::vector<FormulaPtr> formulas;
    formulas.reserve(premises.size() + 1);
    for (const auto& p : premises) {
      if (p) formulas.push_back(p);
    }
    formulas.push_back(conclusion_value ? conclusion : Formula::negation(conclusion));
    return side.satisfiable(formulas);
  };

  const bool can_be_false = with_goal(false);  // premises ∧ ¬C satisfiable?
  const bool can_be_true = with_goal(true);    // premises ∧ C satisfiable?

  OracleResult result;
  if (!can_be_false && !can_be_true) {
    result.verdict.state = Verdict::State::True;
    result.premises_inconsistent = true;
  } else if (!can_be_false) {
    result.verdict.state = Verdict::State::True;
  } else if (!can_be_true) {
    result.verdict.state = Verdict::State::False;
  } else {
    result.verdict.state = Verdict::State::Uncertain;
  }
  return result;
}

}  // namespace folpipe::reasoner
