#include "folpipe/pipeline/prompt.hpp"

namespace folpipe::pipeline {

std::string_view to_string(PromptMode mode) {
  switch (mode) {
    case PromptMode::Standard: return "standard";
    case PromptMode::PredicatesOnly: return "predicates";
    case PromptMode::FolGivenPredicates: return "fol";
    case PromptMode::Verifier: return "verifier";
  }
  return "?";
}

std::string join_premises(const std::vector<std::string>& premises_nl) {
  std::string out;
  for (std::size_t i = 0; i < premises_nl.size(); ++i) {
    if (i) out += ' ';
    out += premises_nl[i];
  }
  return out;
}

std::string PromptTemplate::user_turn(const std::string& premises_nl,
                                      const std::string& conclusion_nl,
                                      const std::string& predicates_line) const {
  std::string out = "Premises:\n" + premises_nl + "\nConclusion:\n" + conclusion_nl;
  if (mode == PromptMode::FolGivenPredicates || mode == PromptMode::Verifier) {
    out += "\nPredicates:\n" + predicates_line;
  }
  return out;
}

std::vector<ChatMessage> PromptTemplate::render(const ReasoningProblem& problem,
                                                const std::string& predicates_line) const {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", system_text});
  for (const auto& shot : shots) {
    messages.push_back(
        {"user", user_turn(shot.premises_nl, shot.conclusion_nl, shot.predicates_line)});
    messages.push_back({"assistant", shot.exemplar_output});
  }
  messages.push_back({"user", user_turn(join_premises(problem.premises_nl),
                                        problem.conclusion_nl, predicates_line)});
  return messages;
}

namespace {

constexpr const char* kTranslateSystem =
    "Given a set of premises and a conclusion, generate the predicates and "
    "first-order logic representation of both the premises and the conclusion.";

constexpr const char* kPredicatesSystem =
    "Given a set of premises and a conclusion, generate the predicates needed "
    "to represent them in first-order logic. Output only the Predicates "
    "section.";

constexpr const char* kFolSystem =
    "Given a set of premises, a conclusion, and the predicates to use, "
    "generate the first-order logic representation of the premises and the "
    "conclusion.";

constexpr const char* kVerifierSystem =
    "You are given a premise, a conclusion, and a list of predicates. Check if "
    "the predicates correctly represent the premise and conclusion.\n"
    "Rules: Watch for arity errors: this happens when the same predicate "
    "symbol is used with different numbers of arguments.\n"
    "Example: Parent(x, y) (2 arguments) vs. Parent(x) (1 argument) -> arity "
    "error.\n"
    "If all predicates are correct, output:\"correct\"\n"
    "If there are errors, output the corrected list of predicates only";

// Small worked example shared by the generation templates.
constexpr const char* kShotPremises =
    "Milo is a cat. Rex is a dog. Every cat chases some toy. If a cat chases "
    "a toy then it purrs.";
constexpr const char* kShotConclusion = "Milo purrs.";

constexpr const char* kShotFullOutput =
    "Predicates:\n"
    "Cat(x) ::: x is a cat\n"
    "Dog(x) ::: x is a dog\n"
    "Chases(x, y) ::: x chases y\n"
    "Toy(x) ::: x is a toy\n"
    "Purrs(x) ::: x purrs\n"
    "Premises:\n"
    "Cat(Milo) ::: Milo is a cat.\n"
    "Dog(Rex) ::: Rex is a dog.\n"
    "∀x (Cat(x) → ∃y (Toy(y) ∧ Chases(x, y))) ::: Every cat chases some toy.\n"
    "∀x (Cat(x) ∧ ∃y (Toy(y) ∧ Chases(x, y)) → Purrs(x)) ::: If a cat chases a toy then it purrs.\n"
    "Conclusion:\n"
    "Purrs(Milo) ::: Milo purrs.";

constexpr const char* kShotPredicatesOutput =
    "Predicates:\n"
    "Cat(x) ::: x is a cat\n"
    "Dog(x) ::: x is a dog\n"
    "Chases(x, y) ::: x chases y\n"
    "Toy(x) ::: x is a toy\n"
    "Purrs(x) ::: x purrs";

constexpr const char* kShotFolOutput =
    "Premises:\n"
    "Cat(Milo) ::: Milo is a cat.\n"
    "Dog(Rex) ::: Rex is a dog.\n"
    "∀x (Cat(x) → ∃y (Toy(y) ∧ Chases(x, y))) ::: Every cat chases some toy.\n"
    "∀x (Cat(x) ∧ ∃y (Toy(y) ∧ Chases(x, y)) → Purrs(x)) ::: If a cat chases a toy then it purrs.\n"
    "Conclusion:\n"
    "Purrs(Milo) ::: Milo purrs.";

}  // namespace

PromptTemplate default_template(PromptMode mode) {
  PromptTemplate t;
  t.mode = mode;
  switch (mode) {
    case PromptMode::Standard:
      t.system_text = kTranslateSystem;
      t.shots = {{kShotPremises, kShotConclusion, "", kShotFullOutput}};
      t.stop = {"###"};
      return t;
    case PromptMode::PredicatesOnly:
      t.system_text = kPredicatesSystem;
      t.shots = {{kShotPremises, kShotConclusion, "", kShotPredicatesOutput}};
      // Early stopping: cut generation at the premises-section header.
      t.stop = {"\nPremises:", "\nPremise_First-order:", "\nPremise:", "###"};
      return t;
    case PromptMode::FolGivenPredicates:
      t.system_text = kFolSystem;
      t.shots = {{kShotPremises, kShotConclusion,
                  "Cat(x); Dog(x); Chases(x, y); Toy(x); Purrs(x)", kShotFolOutput}};
      t.stop = {"###"};
      return t;
    case PromptMode::Verifier: {
      t.system_text = kVerifierSystem;
      // 3-shot: one correct set, two arity perturbations (an extra variable
      // inserted into an existing predicate).
      t.shots = {
          {"Ada teaches logic. Logic is a course.", "Ada teaches a course.",
           "Teaches(x, y); Course(x); Person(x)", "correct"},
          {"Milo is a cat. Every cat chases some toy.", "Milo chases a toy.",
           "Cat(x); Cat(x, y); Chases(x, y); Toy(x)",
           "Predicates:\nCat(x); Chases(x, y); Toy(x)"},
          {"All staff badge in. Visitors sign a register.", "Staff badge in.",
           "Staff(x); BadgesIn(x); Visitor(x); SignsRegister(x); SignsRegister(x, y)",
           "Predicates:\nStaff(x); BadgesIn(x); Visitor(x); SignsRegister(x)"},
      };
      t.stop = {"###"};
      return t;
    }
  }
  return t;
}

}  // namespace folpipe::pipeline
