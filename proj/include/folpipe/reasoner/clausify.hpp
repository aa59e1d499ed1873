#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "folpipe/fol/ast.hpp"

namespace folpipe::reasoner {

// Term as it appears inside clauses. Function symbols only arise from
// skolemizing existentials under universals.
struct ClauseTerm {
  enum class Kind { Variable, Constant, Function };

  Kind kind = Kind::Constant;
  std::string name;
  std::vector<ClauseTerm> args;  // Function only

  static ClauseTerm variable(std::string n) { return {Kind::Variable, std::move(n), {}}; }
  static ClauseTerm constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
  static ClauseTerm function(std::string n, std::vector<ClauseTerm> a) {
    return {Kind::Function, std::move(n), std::move(a)};
  }

  bool is_variable() const { return kind == Kind::Variable; }
  int weight() const;
  std::string to_string() const;

  bool operator==(const ClauseTerm& other) const;
  bool operator<(const ClauseTerm& other) const;
};

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<ClauseTerm> args;

  int weight() const;
  std::string to_string() const;
  bool same_atom(const Literal& other) const {
    return predicate == other.predicate && args == other.args;
  }

  bool operator==(const Literal& other) const;
  bool operator<(const Literal& other) const;
};

// A disjunction of literals, kept sorted with duplicates removed.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);

  const std::vector<Literal>& literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }
  std::size_t size() const { return literals_.size(); }
  bool tautology() const;
  int weight() const;
  std::string to_string() const;

  bool operator==(const Clause& other) const { return literals_ == other.literals_; }
  bool operator<(const Clause& other) const { return literals_ < other.literals_; }

 private:
  std::vector<Literal> literals_;
};

class FreeVariableError : public std::runtime_error {
 public:
  explicit FreeVariableError(std::vector<std::string> vars);
  const std::vector<std::string>& variables() const { return vars_; }

 private:
  std::vector<std::string> vars_;
};

// Fresh-name source for skolem symbols and clause variables. Reserves every
// identifier seen in the input so generated names never collide.
class SymbolPool {
 public:
  void reserve_from(const fol::Formula& f);
  void reserve(const std::string& name) { reserved_.insert(name); }
  std::string fresh_skolem();      // "sk0", "sk1", ... skipping reserved names
  std::string fresh_variable();    // "X0", "X1", ...
  std::string fresh_definition();  // "df0", ... renaming predicates

 private:
  std::set<std::string> reserved_;
  int next_skolem_ = 0;
  int next_variable_ = 0;
  int next_definition_ = 0;
};

// Negation normal form with Implies/Iff/Xor eliminated; negations sit
// directly on atoms and quantifier polarity is normalized.
fol::FormulaPtr to_nnf(const fol::Formula& f, bool positive = true);

// Satisfiability-preserving clausal form: Xor/Iff/Implies rewriting, negation
// normal form, skolemization, CNF distribution. Throws FreeVariableError when
// the formula is not closed. Variables are standardized apart across clauses.
std::vector<Clause> clausify(const fol::Formula& f);
std::vector<Clause> clausify(const fol::Formula& f, SymbolPool& pool);
std::vector<Clause> clausify_set(const std::vector<fol::FormulaPtr>& formulas,
                                 SymbolPool& pool);

}  // namespace folpipe::reasoner
