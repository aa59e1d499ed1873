#include "folpipe/fol/ast.hpp"

#include <cassert>

namespace folpipe::fol {

bool is_variable_shaped(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    const char c = name[i];
    if ((c < '0' || c > '9') && c != '_') return false;
  }
  return true;
}

bool is_binary(Connective c) {
  switch (c) {
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
    case Connective::Iff:
    case Connective::Xor:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(Connective c) {
  return c == Connective::ForAll || c == Connective::Exists;
}

std::string_view connective_name(Connective c) {
  switch (c) {
    case Connective::Atom: return "atom";
    case Connective::Not: return "not";
    case Connective::And: return "and";
    case Connective::Or: return "or";
    case Connective::Implies: return "implies";
    case Connective::Iff: return "iff";
    case Connective::Xor: return "xor";
    case Connective::ForAll: return "forall";
    case Connective::Exists: return "exists";
  }
  return "?";
}

FormulaPtr Formula::atom(std::string predicate, std::vector<Term> args, SourceSpan span) {
  auto f = std::make_shared<Formula>();
  f->kind = Connective::Atom;
  f->label = std::move(predicate);
  f->args = std::move(args);
  f->span = span;
  return f;
}

FormulaPtr Formula::negation(FormulaPtr inner, SourceSpan span) {
  assert(inner);
  auto f = std::make_shared<Formula>();
  f->kind = Connective::Not;
  f->lhs = std::move(inner);
  f->span = span;
  return f;
}

FormulaPtr Formula::binary(Connective kind, FormulaPtr lhs, FormulaPtr rhs, SourceSpan span) {
  assert(is_binary(kind) && lhs && rhs);
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  f->span = span;
  return f;
}

FormulaPtr Formula::quantifier(Connective kind, std::string var, FormulaPtr body, SourceSpan span) {
  assert(is_quantifier(kind) && body);
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->label = std::move(var);
  f->lhs = std::move(body);
  f->span = span;
  return f;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.label != b.label || a.args != b.args) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  return structurally_equal(*a, *b);
}

namespace {

struct Lexemes {
  std::string_view forall, exists, neg, conj, disj, implies, iff, exclusive;
  bool keyword_quantifiers;  // "all x" needs a separating space
};

constexpr Lexemes kUnicode{"∀", "∃", "¬", "∧", "∨",
                           "→", "↔", "⊕", false};
constexpr Lexemes kAscii{"all", "exists", "-", "&", "|", "->", "<->", "xor", true};

std::string_view op_lexeme(Connective c, const Lexemes& lx) {
  switch (c) {
    case Connective::And: return lx.conj;
    case Connective::Or: return lx.disj;
    case Connective::Implies: return lx.implies;
    case Connective::Iff: return lx.iff;
    case Connective::Xor: return lx.exclusive;
    default: return "?";
  }
}

void render_node(const Formula& f, const Lexemes& lx, std::string& out);

// Operands of binary connectives keep atoms and negations bare; everything
// else is wrapped so the output never depends on precedence.
void render_operand(const Formula& f, const Lexemes& lx, std::string& out) {
  const bool bare = f.kind == Connective::Atom || f.kind == Connective::Not;
  if (bare) {
    render_node(f, lx, out);
  } else {
    out += '(';
    render_node(f, lx, out);
    out += ')';
  }
}

void render_node(const Formula& f, const Lexemes& lx, std::string& out) {
  switch (f.kind) {
    case Connective::Atom:
      out += f.label;
      if (!f.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ", ";
          out += f.args[i].name;
        }
        out += ')';
      }
      return;
    case Connective::Not:
      out += lx.neg;
      if (f.lhs->kind == Connective::Atom) {
        render_node(*f.lhs, lx, out);
      } else {
        out += '(';
        render_node(*f.lhs, lx, out);
        out += ')';
      }
      return;
    case Connective::ForAll:
    case Connective::Exists:
      out += (f.kind == Connective::ForAll) ? lx.forall : lx.exists;
      if (lx.keyword_quantifiers) out += ' ';
      out += f.label;
      out += " (";
      render_node(*f.lhs, lx, out);
      out += ')';
      return;
    default:
      render_operand(*f.lhs, lx, out);
      out += ' ';
      out += op_lexeme(f.kind, lx);
      out += ' ';
      render_operand(*f.rhs, lx, out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f, Dialect dialect) {
  std::string out;
  render_node(f, dialect == Dialect::Unicode ? kUnicode : kAscii, out);
  return out;
}

std::string render(const FormulaPtr& f, Dialect dialect) {
  assert(f);
  return render(*f, dialect);
}

std::string render(const Term& t) { return t.name; }

}  // namespace folpipe::fol
