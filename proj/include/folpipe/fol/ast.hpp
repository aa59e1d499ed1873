#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace folpipe::fol {

// Half-open byte range into the text a node was parsed from.
// Programmatically built nodes carry {0, 0}.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const SourceSpan&) const = default;
};

enum class TermKind { Variable, Constant };

// Atom argument. Function symbols are not part of the surface language; they
// only appear inside the reasoner after skolemization.
struct Term {
  TermKind kind = TermKind::Constant;
  std::string name;

  static Term variable(std::string name) { return Term{TermKind::Variable, std::move(name)}; }
  static Term constant(std::string name) { return Term{TermKind::Constant, std::move(name)}; }
  bool is_variable() const { return kind == TermKind::Variable; }

  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

// Identifier shapes that read as variables when they occur unbound: a single
// lowercase letter optionally followed by digits or underscores ("x", "y2").
// Multi-letter lowercase names ("emily", "yaleUniversity") are constants
// unless a quantifier binds them.
bool is_variable_shaped(std::string_view name);

enum class Connective { Atom, Not, And, Or, Implies, Iff, Xor, ForAll, Exists };

bool is_binary(Connective c);
bool is_quantifier(Connective c);
std::string_view connective_name(Connective c);

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula node. `label` holds the predicate name for atoms and the
// bound variable for quantifiers. `lhs` is the only child of Not and the body
// of quantifiers; binary connectives use both children.
class Formula {
 public:
  Connective kind = Connective::Atom;
  std::string label;
  std::vector<Term> args;
  FormulaPtr lhs;
  FormulaPtr rhs;
  SourceSpan span;

  static FormulaPtr atom(std::string predicate, std::vector<Term> args = {},
                         SourceSpan span = {});
  static FormulaPtr negation(FormulaPtr inner, SourceSpan span = {});
  static FormulaPtr binary(Connective kind, FormulaPtr lhs, FormulaPtr rhs,
                           SourceSpan span = {});
  static FormulaPtr quantifier(Connective kind, std::string var, FormulaPtr body,
                               SourceSpan span = {});
};

// Structural equality; spans are ignored.
bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// One line of a translation: a formula plus the optional ":::" gloss. The
// gloss carries no structural meaning and is preserved verbatim.
struct Statement {
  FormulaPtr formula;
  std::optional<std::string> gloss;
};

// Surface form used when rendering. Parsing always accepts both lexeme sets,
// mixed freely within one input.
enum class Dialect { Unicode, Ascii };

// Fully parenthesized rendering; re-parsing the result yields a structurally
// identical formula.
std::string render(const Formula& f, Dialect dialect);
std::string render(const FormulaPtr& f, Dialect dialect);
std::string render(const Term& t);

}  // namespace folpipe::fol
