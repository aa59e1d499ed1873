#include "folpipe/reasoner/clausify.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <optional>

#include "folpipe/fol/analysis.hpp"

namespace folpipe::reasoner {

int ClauseTerm::weight() const {
  int w = 1;
  for (const auto& a : args) w += a.weight();
  return w;
}

std::string ClauseTerm::to_string() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].to_string();
  }
  out += ')';
  return out;
}

bool ClauseTerm::operator==(const ClauseTerm& other) const {
  return kind == other.kind && name == other.name && args == other.args;
}

bool ClauseTerm::operator<(const ClauseTerm& other) const {
  if (kind != other.kind) return kind < other.kind;
  if (name != other.name) return name < other.name;
  return args < other.args;
}

int Literal::weight() const {
  int w = 1;
  for (const auto& a : args) w += a.weight();
  return w;
}

std::string Literal::to_string() const {
  std::string out = positive ? "" : "~";
  out += predicate;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += args[i].to_string();
    }
    out += ')';
  }
  return out;
}

bool Literal::operator==(const Literal& other) const {
  return positive == other.positive && predicate == other.predicate && args == other.args;
}

bool Literal::operator<(const Literal& other) const {
  if (predicate != other.predicate) return predicate < other.predicate;
  if (positive != other.positive) return positive < other.positive;
  return args < other.args;
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  std::sort(literals_.begin(), literals_.end());
  literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
}

bool Clause::tautology() const {
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    for (std::size_t j = i + 1; j < literals_.size(); ++j) {
      if (literals_[i].positive != literals_[j].positive &&
          literals_[i].same_atom(literals_[j])) {
        return true;
      }
    }
  }
  return false;
}

int Clause::weight() const {
  int w = 0;
  for (const auto& l : literals_) w += l.weight();
  return w;
}

std::string Clause::to_string() const {
  if (literals_.empty()) return "<empty>";
  std::string out;
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    if (i) out += " | ";
    out += literals_[i].to_string();
  }
  return out;
}

FreeVariableError::FreeVariableError(std::vector<std::string> vars)
    : std::runtime_error("formula is not closed; free variables: " +
                         [&vars] {
                           std::string s;
                           for (std::size_t i = 0; i < vars.size(); ++i) {
                             if (i) s += ", ";
                             s += vars[i];
                           }
                           return s;
                         }()),
      vars_(std::move(vars)) {}

void SymbolPool::reserve_from(const fol::Formula& f) {
  fol::collect_identifiers(f, reserved_);
}

std::string SymbolPool::fresh_skolem() {
  for (;;) {
    std::string name = "sk" + std::to_string(next_skolem_++);
    if (!reserved_.count(name)) {
      reserved_.insert(name);
      return name;
    }
  }
}

std::string SymbolPool::fresh_definition() {
  for (;;) {
    std::string name = "df" + std::to_string(next_definition_++);
    if (!reserved_.count(name)) {
      reserved_.insert(name);
      return name;
    }
  }
}

std::string SymbolPool::fresh_variable() {
  for (;;) {
    std::string name = "X" + std::to_string(next_variable_++);
    if (!reserved_.count(name)) {
      reserved_.insert(name);
      return name;
    }
  }
}

namespace {

using fol::Connective;
using fol::Formula;
using fol::FormulaPtr;

// Negation normal form with connective elimination; `positive` is the
// polarity of the context.
FormulaPtr nnf(const Formula& f, bool positive) {
  switch (f.kind) {
    case Connective::Atom: {
      auto atom = Formula::atom(f.label, f.args, f.span);
      return positive ? atom : Formula::negation(atom);
    }
    case Connective::Not:
      return nnf(*f.lhs, !positive);
    case Connective::And:
    case Connective::Or: {
      const bool keep = (f.kind == Connective::And) == positive;
      return Formula::binary(keep ? Connective::And : Connective::Or,
                             nnf(*f.lhs, positive), nnf(*f.rhs, positive));
    }
    case Connective::Implies:
      if (positive) {
        return Formula::binary(Connective::Or, nnf(*f.lhs, false), nnf(*f.rhs, true));
      }
      return Formula::binary(Connective::And, nnf(*f.lhs, true), nnf(*f.rhs, false));
    case Connective::Iff: {
      // (a -> b) & (b -> a); negated: (a & ~b) | (b & ~a)
      if (positive) {
        return Formula::binary(
            Connective::And,
            Formula::binary(Connective::Or, nnf(*f.lhs, false), nnf(*f.rhs, true)),
            Formula::binary(Connective::Or, nnf(*f.rhs, false), nnf(*f.lhs, true)));
      }
      return Formula::binary(
          Connective::Or,
          Formula::binary(Connective::And, nnf(*f.lhs, true), nnf(*f.rhs, false)),
          Formula::binary(Connective::And, nnf(*f.rhs, true), nnf(*f.lhs, false)));
    }
    case Connective::Xor: {
      // a xor b == ~(a <-> b)
      if (positive) {
        return Formula::binary(
            Connective::Or,
            Formula::binary(Connective::And, nnf(*f.lhs, true), nnf(*f.rhs, false)),
            Formula::binary(Connective::And, nnf(*f.rhs, true), nnf(*f.lhs, false)));
      }
      return Formula::binary(
          Connective::And,
          Formula::binary(Connective::Or, nnf(*f.lhs, false), nnf(*f.rhs, true)),
          Formula::binary(Connective::Or, nnf(*f.rhs, false), nnf(*f.lhs, true)));
    }
    case Connective::ForAll:
    case Connective::Exists: {
      const bool forall = (f.kind == Connective::ForAll) == positive;
      return Formula::quantifier(forall ? Connective::ForAll : Connective::Exists,
                                 f.label, nnf(*f.lhs, positive));
    }
  }
  return nullptr;
}

using LiteralSet = std::vector<Literal>;

// Distributing Or over And multiplies clause counts; past this product the
// larger side is renamed with a fresh definitional predicate (positive
// occurrences only, so one-sided defining clauses keep equisatisfiability).
constexpr std::size_t kDistributionLimit = 64;

struct CnfBuilder {
  SymbolPool& pool;
  // surface variable -> clause term (universal variable or skolem term)
  std::map<std::string, ClauseTerm> binding;
  std::vector<ClauseTerm> universals;  // in scope, outermost first
  std::vector<LiteralSet> definitions;  // defining clauses hoisted to the top

  ClauseTerm convert_term(const fol::Term& t) {
    if (t.is_variable()) {
      const auto it = binding.find(t.name);
      assert(it != binding.end());
      return it->second;
    }
    return ClauseTerm::constant(t.name);
  }

  Literal convert_atom(const Formula& atom, bool positive) {
    Literal lit;
    lit.positive = positive;
    lit.predicate = atom.label;
    lit.args.reserve(atom.args.size());
    for (const auto& t : atom.args) lit.args.push_back(convert_term(t));
    return lit;
  }

  std::vector<LiteralSet> build(const Formula& f) {
    switch (f.kind) {
      case Connective::Atom:
        return {{convert_atom(f, true)}};
      case Connective::Not:
        assert(f.lhs->kind == Connective::Atom);
        return {{convert_atom(*f.lhs, false)}};
      case Connective::And: {
        auto left = build(*f.lhs);
        auto right = build(*f.rhs);
        left.insert(left.end(), std::make_move_iterator(right.begin()),
                    std::make_move_iterator(right.end()));
        return left;
      }
      case Connective::Or: {
        auto left = build(*f.lhs);
        auto right = build(*f.rhs);
        if (left.size() * right.size() > kDistributionLimit) {
          if (left.size() >= right.size()) rename(left);
          if (left.size() * right.size() > kDistributionLimit) rename(right);
        }
        std::vector<LiteralSet> out;
        out.reserve(left.size() * right.size());
        for (const auto& l : left) {
          for (const auto& r : right) {
            LiteralSet merged = l;
            merged.insert(merged.end(), r.begin(), r.end());
            out.push_back(std::move(merged));
          }
        }
        return out;
      }
      case Connective::ForAll: {
        const ClauseTerm var = ClauseTerm::variable(pool.fresh_variable());
        auto saved = shadow(f.label, var);
        universals.push_back(var);
        auto out = build(*f.lhs);
        universals.pop_back();
        restore(f.label, saved);
        return out;
      }
      case Connective::Exists: {
        const std::string name = pool.fresh_skolem();
        const ClauseTerm term = universals.empty()
                                    ? ClauseTerm::constant(name)
                                    : ClauseTerm::function(name, universals);
        auto saved = shadow(f.label, term);
        auto out = build(*f.lhs);
        restore(f.label, saved);
        return out;
      }
      default:
        assert(false && "connective should have been eliminated by nnf");
        return {};
    }
  }

  static void collect_variables(const ClauseTerm& t, std::vector<ClauseTerm>& out) {
    if (t.kind == ClauseTerm::Kind::Variable &&
        std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    }
    for (const auto& a : t.args) collect_variables(a, out);
  }

  // Replaces a positively occurring clause set with one fresh literal
  // D(vars) and hoists the defining clauses {~D | C}. Equisatisfiable.
  void rename(std::vector<LiteralSet>& clauses) {
    std::vector<ClauseTerm> vars;
    for (const auto& clause : clauses) {
      for (const auto& lit : clause) {
        for (const auto& a : lit.args) collect_variables(a, vars);
      }
    }
    Literal use;
    use.positive = true;
    use.predicate = pool.fresh_definition();
    use.args = vars;
    Literal negated = use;
    negated.positive = false;
    for (auto& clause : clauses) {
      LiteralSet defining;
      defining.reserve(clause.size() + 1);
      defining.push_back(negated);
      defining.insert(defining.end(), clause.begin(), clause.end());
      definitions.push_back(std::move(defining));
    }
    clauses.assign(1, LiteralSet{use});
  }

  std::optional<ClauseTerm> shadow(const std::string& var, ClauseTerm value) {
    std::optional<ClauseTerm> saved;
    const auto it = binding.find(var);
    if (it != binding.end()) saved = it->second;
    binding[var] = std::move(value);
    return saved;
  }
  void restore(const std::string& var, const std::optional<ClauseTerm>& saved) {
    if (saved) binding[var] = *saved;
    else binding.erase(var);
  }
};

void rename_clause_variables(std::vector<Clause>& clauses, SymbolPool& pool) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const auto& clause : clauses) {
    std::map<std::string, ClauseTerm> renaming;
    std::function<ClauseTerm(const ClauseTerm&)> rename = [&](const ClauseTerm& t) {
      if (t.kind == ClauseTerm::Kind::Variable) {
        auto it = renaming.find(t.name);
        if (it == renaming.end()) {
          it = renaming.emplace(t.name, ClauseTerm::variable(pool.fresh_variable())).first;
        }
        return it->second;
      }
      if (t.kind == ClauseTerm::Kind::Function) {
        std::vector<ClauseTerm> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(rename(a));
        return ClauseTerm::function(t.name, std::move(args));
      }
      return t;
    };
    std::vector<Literal> lits;
    lits.reserve(clause.size());
    for (const auto& l : clause.literals()) {
      Literal nl = l;
      for (auto& a : nl.args) a = rename(a);
      lits.push_back(std::move(nl));
    }
    out.emplace_back(std::move(lits));
  }
  clauses = std::move(out);
}

std::vector<Clause> clausify_one(const fol::Formula& f, SymbolPool& pool) {
  const auto free = fol::free_variables(f);
  if (!free.empty()) {
    throw FreeVariableError(std::vector<std::string>(free.begin(), free.end()));
  }
  const FormulaPtr normal = nnf(f, true);
  CnfBuilder builder{pool, {}, {}, {}};
  auto literal_sets = builder.build(*normal);
  literal_sets.insert(literal_sets.end(),
                      std::make_move_iterator(builder.definitions.begin()),
                      std::make_move_iterator(builder.definitions.end()));

  std::vector<Clause> clauses;
  clauses.reserve(literal_sets.size());
  for (auto& lits : literal_sets) {
    Clause c(lits);
    if (c.tautology()) continue;
    if (std::find(clauses.begin(), clauses.end(), c) != clauses.end()) continue;
    clauses.push_back(std::move(c));
  }
  return clauses;
}

}  // namespace

fol::FormulaPtr to_nnf(const fol::Formula& f, bool positive) {
  return nnf(f, positive);
}

std::vector<Clause> clausify(const fol::Formula& f, SymbolPool& pool) {
  pool.reserve_from(f);
  auto clauses = clausify_one(f, pool);
  rename_clause_variables(clauses, pool);
  return clauses;
}

std::vector<Clause> clausify(const fol::Formula& f) {
  SymbolPool pool;
  return clausify(f, pool);
}

std::vector<Clause> clausify_set(const std::vector<fol::FormulaPtr>& formulas,
                                 SymbolPool& pool) {
  for (const auto& f : formulas) {
    if (f) pool.reserve_from(*f);
  }
  std::vector<Clause> all;
  for (const auto& f : formulas) {
    if (!f) continue;
    auto clauses = clausify_one(*f, pool);
    all.insert(all.end(), std::make_move_iterator(clauses.begin()),
               std::make_move_iterator(clauses.end()));
  }
  rename_clause_variables(all, pool);
  return all;
}

}  // namespace folpipe::reasoner
