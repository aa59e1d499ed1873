#include "folpipe/reasoner/prover.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "folpipe/fol/analysis.hpp"

namespace folpipe::reasoner {

std::string_view to_string(TruthLabel label) {
  switch (label) {
    case TruthLabel::True: return "True";
    case TruthLabel::False: return "False";
    case TruthLabel::Uncertain: return "Uncertain";
  }
  return "?";
}

std::optional<TruthLabel> parse_truth_label(std::string_view s) {
  if (s == "True" || s == "true") return TruthLabel::True;
  if (s == "False" || s == "false") return TruthLabel::False;
  if (s == "Uncertain" || s == "uncertain" || s == "Unknown" || s == "unknown") {
    return TruthLabel::Uncertain;
  }
  return std::nullopt;
}

Verdict Verdict::of(TruthLabel label) {
  switch (label) {
    case TruthLabel::True: return {State::True, std::nullopt};
    case TruthLabel::False: return {State::False, std::nullopt};
    case TruthLabel::Uncertain: return {State::Uncertain, std::nullopt};
  }
  return {State::Uncertain, std::nullopt};
}

bool Verdict::matches(TruthLabel label) const {
  switch (label) {
    case TruthLabel::True: return state == State::True;
    case TruthLabel::False: return state == State::False;
    case TruthLabel::Uncertain: return state == State::Uncertain;
  }
  return false;
}

std::string_view to_string(Verdict::State state) {
  switch (state) {
    case Verdict::State::True: return "True";
    case Verdict::State::False: return "False";
    case Verdict::State::Uncertain: return "Uncertain";
    case Verdict::State::Error: return "Error";
  }
  return "?";
}

namespace {

using Subst = std::map<std::string, ClauseTerm>;

const ClauseTerm* walk(const ClauseTerm& t, const Subst& s) {
  const ClauseTerm* cur = &t;
  while (cur->is_variable()) {
    const auto it = s.find(cur->name);
    if (it == s.end()) break;
    cur = &it->second;
  }
  return cur;
}

bool occurs(const std::string& var, const ClauseTerm& t, const Subst& s) {
  const ClauseTerm* w = walk(t, s);
  if (w->is_variable()) return w->name == var;
  for (const auto& a : w->args) {
    if (occurs(var, a, s)) return true;
  }
  return false;
}

bool unify(const ClauseTerm& a, const ClauseTerm& b, Subst& s) {
  const ClauseTerm x = *walk(a, s);
  const ClauseTerm y = *walk(b, s);
  if (x.is_variable()) {
    if (y.is_variable() && y.name == x.name) return true;
    if (occurs(x.name, y, s)) return false;
    s[x.name] = y;
    return true;
  }
  if (y.is_variable()) return unify(y, x, s);
  if (x.kind != y.kind || x.name != y.name || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!unify(x.args[i], y.args[i], s)) return false;
  }
  return true;
}

bool unify_args(const Literal& a, const Literal& b, Subst& s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify(a.args[i], b.args[i], s)) return false;
  }
  return true;
}

ClauseTerm substitute(const ClauseTerm& t, const Subst& s) {
  const ClauseTerm* w = walk(t, s);
  if (w->kind == ClauseTerm::Kind::Function) {
    std::vector<ClauseTerm> args;
    args.reserve(w->args.size());
    for (const auto& a : w->args) args.push_back(substitute(a, s));
    return ClauseTerm::function(w->name, std::move(args));
  }
  return *w;
}

Literal substitute(const Literal& l, const Subst& s) {
  Literal out = l;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

void rename_term(ClauseTerm& t, const std::string& suffix) {
  if (t.is_variable()) {
    t.name += suffix;
    return;
  }
  for (auto& a : t.args) rename_term(a, suffix);
}

Clause rename_clause(const Clause& c, const std::string& suffix) {
  std::vector<Literal> lits = c.literals();
  for (auto& l : lits) {
    for (auto& a : l.args) rename_term(a, suffix);
  }
  return Clause(std::move(lits));
}

// Canonical per-clause variable names (first-occurrence order) keep resolvent
// names bounded and make duplicate detection effective.
Clause canonicalize(const Clause& c) {
  std::map<std::string, std::string> renaming;
  int next = 0;
  std::function<ClauseTerm(const ClauseTerm&)> rename = [&](const ClauseTerm& t) {
    if (t.is_variable()) {
      auto it = renaming.find(t.name);
      if (it == renaming.end()) {
        it = renaming.emplace(t.name, "V" + std::to_string(next++)).first;
      }
      return ClauseTerm::variable(it->second);
    }
    if (t.kind == ClauseTerm::Kind::Function) {
      std::vector<ClauseTerm> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(rename(a));
      return ClauseTerm::function(t.name, std::move(args));
    }
    return t;
  };
  std::vector<Literal> lits = c.literals();
  for (auto& l : lits) {
    for (auto& a : l.args) a = rename(a);
  }
  return Clause(std::move(lits));
}

// One-way matching for subsumption: pattern variables bind, target stays
// rigid.
bool match_term(const ClauseTerm& pattern, const ClauseTerm& target, Subst& s) {
  if (pattern.is_variable()) {
    const auto it = s.find(pattern.name);
    if (it != s.end()) return it->second == target;
    s[pattern.name] = target;
    return true;
  }
  if (pattern.kind != target.kind || pattern.name != target.name ||
      pattern.args.size() != target.args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    if (!match_term(pattern.args[i], target.args[i], s)) return false;
  }
  return true;
}

bool subsumes_from(const Clause& c, const Clause& d, std::size_t i, const Subst& s) {
  if (i == c.size()) return true;
  const Literal& lit = c.literals()[i];
  for (const Literal& cand : d.literals()) {
    if (cand.positive != lit.positive || cand.predicate != lit.predicate ||
        cand.args.size() != lit.args.size()) {
      continue;
    }
    Subst attempt = s;
    bool ok = true;
    for (std::size_t k = 0; k < lit.args.size(); ++k) {
      if (!match_term(lit.args[k], cand.args[k], attempt)) {
        ok = false;
        break;
      }
    }
    if (ok && subsumes_from(c, d, i + 1, attempt)) return true;
  }
  return false;
}

// Length-restricted theta-subsumption; removing less than full subsumption
// would allow is always safe.
bool subsumes(const Clause& c, const Clause& d) {
  if (c.size() > d.size()) return false;
  return subsumes_from(c, d, 0, {});
}

// Given-clause saturation loop with smallest-weight-first selection, FIFO on
// ties, forward and backward subsumption.
class Saturation {
 public:
  Saturation(const ProofLimits& limits, std::chrono::steady_clock::time_point deadline)
      : limits_(limits), deadline_(deadline) {}

  SearchResult run(const std::vector<Clause>& input) {
    for (const auto& c : input) {
      if (insert(c)) return finish(SearchOutcome::Refuted);
      if (over_budget()) return finish(SearchOutcome::Limited);
    }
    while (!queue_.empty()) {
      if (over_budget()) return finish(SearchOutcome::Limited);
      const auto [weight, index] = *queue_.begin();
      queue_.erase(queue_.begin());
      (void)weight;
      if (deleted_[index]) continue;
      processed_[index] = true;

      const Clause given = clauses_[index];  // copy: clauses_ may reallocate
      for (std::size_t p = 0; p < clauses_.size(); ++p) {
        if (!processed_[p] || deleted_[p]) continue;
        if (resolve_pair(given, clauses_[p])) return finish(SearchOutcome::Refuted);
        if (over_budget()) return finish(SearchOutcome::Limited);
      }
      if (add_factors(given)) return finish(SearchOutcome::Refuted);
    }
    return finish(weight_discard_ ? SearchOutcome::Limited : SearchOutcome::Saturated);
  }

 private:
  bool over_budget() {
    if (kept_ >= limits_.max_clauses) return true;
    if (++tick_ % 64 == 0 && std::chrono::steady_clock::now() >= deadline_) {
      timed_out_ = true;
      return true;
    }
    return false;
  }

  SearchResult finish(SearchOutcome outcome) {
    return SearchResult{outcome, kept_, generated_};
  }

  // Returns true when the empty clause appeared.
  bool insert(const Clause& raw) {
    ++generated_;
    const Clause c = canonicalize(raw);
    if (c.empty()) return true;
    if (c.tautology()) return false;
    if (c.weight() > limits_.max_clause_weight) {
      weight_discard_ = true;
      return false;
    }
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      if (!deleted_[i] && subsumes(clauses_[i], c)) return false;
    }
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      if (!deleted_[i] && subsumes(c, clauses_[i])) deleted_[i] = true;
    }
    const std::size_t index = clauses_.size();
    clauses_.push_back(c);
    deleted_.push_back(false);
    processed_.push_back(false);
    queue_.insert({c.weight(), index});
    ++kept_;
    return false;
  }

  bool resolve_pair(const Clause& given, const Clause& partner) {
    const Clause a = rename_clause(given, "#a");
    const Clause b = rename_clause(partner, "#b");
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const Literal& la = a.literals()[i];
        const Literal& lb = b.literals()[j];
        if (la.positive == lb.positive) continue;
        Subst s;
        if (!unify_args(la, lb, s)) continue;
        std::vector<Literal> lits;
        lits.reserve(a.size() + b.size() - 2);
        for (std::size_t k = 0; k < a.size(); ++k) {
          if (k != i) lits.push_back(substitute(a.literals()[k], s));
        }
        for (std::size_t k = 0; k < b.size(); ++k) {
          if (k != j) lits.push_back(substitute(b.literals()[k], s));
        }
        if (insert(Clause(std::move(lits)))) return true;
      }
    }
    return false;
  }

  bool add_factors(const Clause& given) {
    for (std::size_t i = 0; i < given.size(); ++i) {
      for (std::size_t j = i + 1; j < given.size(); ++j) {
        const Literal& li = given.literals()[i];
        const Literal& lj = given.literals()[j];
        if (li.positive != lj.positive) continue;
        Subst s;
        if (!unify_args(li, lj, s)) continue;
        std::vector<Literal> lits;
        lits.reserve(given.size());
        for (const auto& l : given.literals()) lits.push_back(substitute(l, s));
        if (insert(Clause(std::move(lits)))) return true;
      }
    }
    return false;
  }

  const ProofLimits& limits_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<Clause> clauses_;
  std::vector<char> deleted_;
  std::vector<char> processed_;
  std::set<std::pair<int, std::size_t>> queue_;  // (weight, insertion index)
  std::uint64_t kept_ = 0;
  std::uint64_t generated_ = 0;
  std::uint64_t tick_ = 0;
  bool weight_discard_ = false;
  bool timed_out_ = false;
};

}  // namespace

SearchResult refute(const std::vector<Clause>& clauses, const ProofLimits& limits,
                    std::chrono::steady_clock::time_point deadline) {
  Saturation search(limits, deadline);
  return search.run(clauses);
}

namespace {

fol::FormulaPtr rewrite_xor(const fol::Formula& f) {
  using fol::Connective;
  using fol::Formula;
  switch (f.kind) {
    case Connective::Atom:
      return Formula::atom(f.label, f.args);
    case Connective::Not:
      return Formula::negation(rewrite_xor(*f.lhs));
    case Connective::ForAll:
    case Connective::Exists:
      return Formula::quantifier(f.kind, f.label, rewrite_xor(*f.lhs));
    case Connective::Xor: {
      const auto lhs = rewrite_xor(*f.lhs);
      const auto rhs = rewrite_xor(*f.rhs);
      return Formula::binary(
          Connective::And, Formula::binary(Connective::Or, lhs, rhs),
          Formula::negation(Formula::binary(Connective::And, lhs, rhs)));
    }
    default:
      return Formula::binary(f.kind, rewrite_xor(*f.lhs), rewrite_xor(*f.rhs));
  }
}

}  // namespace

std::string to_prover9_input(const std::vector<fol::FormulaPtr>& premises,
                             const fol::FormulaPtr& conclusion) {
  std::string out = "formulas(assumptions).\n";
  for (const auto& p : premises) {
    if (!p) continue;
    out += fol::render(rewrite_xor(*p), fol::Dialect::Ascii);
    out += ".\n";
  }
  out += "end_of_list.\n\nformulas(goals).\n";
  if (conclusion) {
    out += fol::render(rewrite_xor(*conclusion), fol::Dialect::Ascii);
    out += ".\n";
  }
  out += "end_of_list.\n";
  return out;
}

ProofResult prove(const std::vector<fol::FormulaPtr>& premises,
                  const fol::FormulaPtr& conclusion, const ProofLimits& limits) {
  if (limits.max_clauses == 0 || limits.max_time.count() <= 0 ||
      limits.max_clause_weight <= 0) {
    throw std::invalid_argument("proof limits must be positive");
  }
  ProofResult result;

  std::set<std::string> open;
  for (const auto& p : premises) {
    if (!p) continue;
    const auto free = fol::free_variables(*p);
    open.insert(free.begin(), free.end());
  }
  if (conclusion) {
    const auto free = fol::free_variables(*conclusion);
    open.insert(free.begin(), free.end());
  }
  if (!open.empty() || !conclusion) {
    result.verdict = {Verdict::State::Error,
                      taxonomy::ErrorCategory{taxonomy::ErrorKind::MissingQuantifier}};
    return result;
  }

  SymbolPool pool;
  std::vector<Clause> base;
  std::vector<Clause> with_negated_goal;
  std::vector<Clause> with_goal;
  try {
    base = clausify_set(premises, pool);
    const fol::FormulaPtr negated = fol::Formula::negation(conclusion);
    with_negated_goal = clausify(*negated, pool);
    with_goal = clausify(*conclusion, pool);
  } catch (const FreeVariableError&) {
    result.verdict = {Verdict::State::Error,
                      taxonomy::ErrorCategory{taxonomy::ErrorKind::MissingQuantifier}};
    return result;
  }

  auto run_search = [&](const std::vector<Clause>& goal_clauses) {
    std::vector<Clause> clauses = base;
    clauses.insert(clauses.end(), goal_clauses.begin(), goal_clauses.end());
    // Each of the two searches gets half the wall-clock budget.
    const auto deadline = std::chrono::steady_clock::now() + limits.max_time / 2;
    return refute(clauses, limits, deadline);
  };

  const SearchResult against = run_search(with_negated_goal);  // premises + ~C
  const SearchResult with = run_search(with_goal);             // premises + C

  result.clauses_kept = against.kept + with.kept;
  result.clauses_generated = against.generated + with.generated;
  result.limit_hit = against.outcome == SearchOutcome::Limited ||
                     with.outcome == SearchOutcome::Limited;

  const bool refuted_neg = against.outcome == SearchOutcome::Refuted;
  const bool refuted_pos = with.outcome == SearchOutcome::Refuted;
  if (refuted_neg && refuted_pos) {
    // Premises alone are unsatisfiable; entailment holds vacuously.
    result.verdict.state = Verdict::State::True;
    result.premises_inconsistent = true;
  } else if (refuted_neg) {
    result.verdict.state = Verdict::State::True;
  } else if (refuted_pos) {
    result.verdict.state = Verdict::State::False;
  } else {
    result.verdict.state = Verdict::State::Uncertain;
  }
  return result;
}

}  // namespace folpipe::reasoner
