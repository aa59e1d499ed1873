#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fixtures {

using folpipe::datasynth::CandidateRecord;
using folpipe::pipeline::ReasoningProblem;
using folpipe::reasoner::TruthLabel;
using folpipe::taxonomy::ErrorGroup;
using folpipe::taxonomy::ErrorKind;

namespace {

const char* kPredicatesSection =
    "Quiet(x) ::: x is quiet\n"
    "Furry(x) ::: x is furry\n"
    "Green(x) ::: x is green\n"
    "Red(x) ::: x is red\n"
    "Rough(x) ::: x is rough\n"
    "White(x) ::: x is white\n"
    "Young(x) ::: x is young\n";

const char* kPremisesSection =
    "Quiet(Anne) ::: Anne is quiet.\n"
    "Furry(Erin) ::: Erin is furry.\n"
    "Green(Erin) ::: Erin is green.\n"
    "Furry(Fiona) ::: Fiona is furry.\n"
    "Quiet(Fiona) ::: Fiona is quiet.\n"
    "Red(Fiona) ::: Fiona is red.\n"
    "Rough(Fiona) ::: Fiona is rough.\n"
    "White(Fiona) ::: Fiona is white.\n"
    "Furry(Harry) ::: Harry is furry.\n"
    "Quiet(Harry) ::: Harry is quiet.\n"
    "White(Harry) ::: Harry is white.\n"
    "∀x (Young(x) → Furry(x)) ::: Young people are furry.\n"
    "Quiet(Anne) → ¬Red(Anne) ::: If Anne is quiet then Anne is not red.\n"
    "∀x (Young(x) ∧ Green(x) → Rough(x)) ::: Young, green people are rough.\n"
    "∀x (Green(x) → White(x)) ::: If someone is green then they are white.\n"
    "∀x (Furry(x) ∧ Quiet(x) → ¬White(x)) ::: If someone is furry and quiet "
    "then they are not white.\n"
    "∀x (Young(x) ∧ White(x) → Rough(x)) ::: If someone is young and white they "
    "are rough.\n"
    "∀x (Red(x) → Young(x)) ::: All red people are young.\n";

const char* kConclusionSection = "White(Anne) ::: Anne is white.\n";

}  // namespace

std::string example_block() {
  return std::string("Predicates:\n") + kPredicatesSection + "Premises:\n" +
         kPremisesSection + "Conclusion:\n" + kConclusionSection;
}

std::string example_predicates_response() {
  return std::string("Predicates:\n") + kPredicatesSection;
}

std::string example_fol_response() {
  return std::string("Premises:\n") + kPremisesSection + "Conclusion:\n" +
         kConclusionSection;
}

ReasoningProblem example_problem() {
  ReasoningProblem p;
  p.id = "pw-anne-white";
  p.premises_nl = {
      "Anne is quiet.", "Erin is furry.", "Erin is green.", "Fiona is furry.",
      "Fiona is quiet.", "Fiona is red.", "Fiona is rough.", "Fiona is white.",
      "Harry is furry.", "Harry is quiet.", "Harry is white.",
      "Young people are furry.", "If Anne is quiet then Anne is red.",
      "Young, green people are rough.", "If someone is green then they are white.",
      "If someone is furry and quiet then they are white.",
      "If someone is young and white then they are rough.", "All red people are young."};
  p.conclusion_nl = "Anne is white.";
  return p;
}

std::vector<TaxonomyCase> golden_cases() {
  return {
      {"missing-quantifier",
       {"BerkeleyCollege(x) ∧ ResidentialCollegeAt(x, yaleUniversity)"},
       ErrorGroup::Parsing, ErrorKind::MissingQuantifier},
      {"parenthesis-error",
       {"BeneficialTo(cherry, people) ⊕ On(cherry, warningList)) → "
        "¬RedFruit(cherry)"},
       ErrorGroup::Parsing, ErrorKind::ParenthesisError},
      {"completion-error",
       {"∀x (Athlete(x) → ¬NeverExercises(x)) Never: does not exist a time"},
       ErrorGroup::Parsing, ErrorKind::CompletionError},
      {"quantifier-location",
       {"∃y (Own(emily, y) ∧ Roommate(y)) → ∃y (Own(emily, y) ∧ "
        "LiveIn(emily, apartment))"},
       ErrorGroup::Type, ErrorKind::QuantifierLocation},
      {"missing-variable",
       {"∀x ∃y (In(indonesia) ∧ Prosecutor(x) ∧ SpecialCrime(y) → "
        "InvestigatePersonally(x, y))"},
       ErrorGroup::Type, ErrorKind::MissingVariable},
      {"special-token",
       {"Endowment(yale, 42.3 billion)"},
       ErrorGroup::Token, ErrorKind::SpecialToken},
      {"unknown-operator",
       {"∀x (Rating(x, y) ∧ y > 4 → Listed(x))"},
       ErrorGroup::Token, ErrorKind::UnknownOperator},
      {"arity-mismatch",
       {"Sees(Tiger, Mouse)",
        "∀x (((Visits(x, Rabbit)) ∧ (Sees(Mouse))) → (Visits(x, Tiger)))"},
       ErrorGroup::Predicate, ErrorKind::ArityMismatch},
      {"subject-predicate-conflict",
       {"Platypus(platypus) ∧ ¬Teeth(platypus) ∧ Mammal(platypus)"},
       ErrorGroup::Predicate, ErrorKind::SubjectPredicateConflict},
  };
}

std::vector<std::pair<std::string, ErrorGroup>> feedback_cases() {
  return {
      {"'NoneType' object has no attribute 'rstrip'", ErrorGroup::Type},
      {"The following symbols are used with multiple arities", ErrorGroup::Predicate},
      {"A term cannot be constructed from the marked string", ErrorGroup::Parsing},
      {"Unexpected token:'-'", ErrorGroup::Token},
  };
}

std::string loop_output(int repetitions) {
  std::string out;
  for (int i = 0; i < repetitions; ++i) out += "IsFavorite(x, y)\n";
  return out;
}

folpipe::fol::BlockParseResult make_record(const std::vector<std::string>& premises,
                                           const std::string& conclusion) {
  std::string block = "Predicates:\nPlaceholder\nPremises:\n";
  for (const auto& p : premises) block += p + "\n";
  block += "Conclusion:\n" + conclusion + "\n";
  return folpipe::fol::parse_translation_block(block);
}

namespace {

ReasoningProblem mini_problem(std::string id, std::vector<std::string> premises,
                              std::string conclusion, TruthLabel label) {
  ReasoningProblem p;
  p.id = std::move(id);
  p.premises_nl = std::move(premises);
  p.conclusion_nl = std::move(conclusion);
  p.gold_label = label;
  return p;
}

const char* kEntailedBlock =
    "Predicates:\n"
    "Quiet(x) ::: x is quiet\n"
    "Red(x) ::: x is red\n"
    "Premises:\n"
    "Quiet(Anne) ::: Anne is quiet.\n"
    "∀x (Quiet(x) → Red(x)) ::: All quiet people are red.\n"
    "Conclusion:\n"
    "Red(Anne) ::: Anne is red.\n";

const char* kFlippedBlock =
    "Predicates:\n"
    "Quiet(x) ::: x is quiet\n"
    "Red(x) ::: x is red\n"
    "Premises:\n"
    "Quiet(Anne) ::: Anne is quiet.\n"
    "∀x (Quiet(x) → Red(x)) ::: All quiet people are red.\n"
    "Conclusion:\n"
    "¬Red(Anne) ::: Anne is not red.\n";

const char* kUncertainBlock =
    "Predicates:\n"
    "Quiet(x) ::: x is quiet\n"
    "Red(x) ::: x is red\n"
    "Premises:\n"
    "Quiet(Anne) ::: Anne is quiet.\n"
    "Conclusion:\n"
    "Red(Anne) ::: Anne is red.\n";

const char* kFreeVariableBlock =
    "Predicates:\n"
    "Quiet(x) ::: x is quiet\n"
    "Red(x) ::: x is red\n"
    "Premises:\n"
    "Quiet(Anne) ::: Anne is quiet.\n"
    "Red(x) ::: someone is red.\n"
    "Conclusion:\n"
    "Red(Anne) ::: Anne is red.\n";

const char* kRefutedBlock =
    "Predicates:\n"
    "Quiet(x) ::: x is quiet\n"
    "Red(x) ::: x is red\n"
    "Premises:\n"
    "Quiet(Anne) ::: Anne is quiet.\n"
    "∀x (Quiet(x) → ¬Red(x)) ::: Quiet people are not red.\n"
    "Conclusion:\n"
    "Red(Anne) ::: Anne is red.\n";

}  // namespace

std::vector<CandidateRecord> synthesis_fixture() {
  const auto entailed =
      mini_problem("s1", {"Anne is quiet.", "All quiet people are red."}, "Anne is red.",
                   TruthLabel::True);
  const auto uncertain =
      mini_problem("s2", {"Anne is quiet."}, "Anne is red.", TruthLabel::Uncertain);
  return {
      {entailed, kEntailedBlock},                                     // good, True
      {uncertain, kUncertainBlock},                                   // good, Uncertain
      {mini_problem("s3", {"Anne is quiet.", "All quiet people are red."},
                    "Anne is red.", TruthLabel::True),
       kFlippedBlock},                                                // semantic-bad
      {mini_problem("s4", {"Anne is quiet.", "Someone is red."}, "Anne is red.",
                    TruthLabel::True),
       kFreeVariableBlock},                                           // syntax-bad
      {mini_problem("s5", {"Anne is quiet."}, "Anne is red.", TruthLabel::True),
       loop_output(40)},                                              // format-bad
      {mini_problem("s6", {"Anne is quiet."}, "Anne is red.", TruthLabel::True),
       "Predicates:\nQuiet(x)\nPremises:\nQuiet(Anne)\n"},            // format-bad
  };
}

std::vector<CandidateRecord> balanced_synthesis_fixture() {
  return {
      {mini_problem("b1", {"Anne is quiet.", "All quiet people are red."}, "Anne is red.",
                    TruthLabel::True),
       kEntailedBlock},
      {mini_problem("b2", {"Anne is quiet.", "All quiet people are red."}, "Anne is red.",
                    TruthLabel::True),
       kEntailedBlock},
      {mini_problem("b3", {"Anne is quiet.", "Quiet people are not red."}, "Anne is red.",
                    TruthLabel::False),
       kRefutedBlock},
      {mini_problem("b4", {"Anne is quiet."}, "Anne is red.", TruthLabel::Uncertain),
       kUncertainBlock},
  };
}

std::vector<ArityFixture> arity_perturbation_fixtures(int count) {
  std::vector<ArityFixture> out;
  for (int i = 0; i < count; ++i) {
    const std::string id = "arity-" + std::to_string(i);
    ArityFixture f;
    f.problem = mini_problem(
        id, {"Teachers have a long vacation.", "Sam is a teacher."},
        "Sam has a long vacation.", TruthLabel::True);
    // The correct unary form is declared twice, the perturbed 0-ary and
    // binary forms once each, so the majority repair keeps arity 1.
    f.stage1 =
        "Predicates:\n"
        "Teacher(x) ::: x is a teacher\n"
        "HaveLongVacation(x) ::: x has a long vacation\n"
        "HaveLongVacation ::: someone has a long vacation\n"
        "HaveLongVacation(x) ::: x has a long vacation\n"
        "HaveLongVacation(x, y) ::: x has a long vacation y\n";
    f.stage2 =
        "Premises:\n"
        "∀x (Teacher(x) → HaveLongVacation(x)) ::: Teachers have a long vacation.\n"
        "Teacher(Sam) ::: Sam is a teacher.\n"
        "Conclusion:\n"
        "HaveLongVacation(Sam) ::: Sam has a long vacation.\n";
    out.push_back(std::move(f));
  }
  return out;
}

std::string temp_dir() {
  static const std::string dir = [] {
    auto base = std::filesystem::temp_directory_path() / "folpipe-tests";
    std::filesystem::create_directories(base);
    return base.string();
  }();
  return dir;
}

std::string write_temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::path(temp_dir()) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write temp file " + path.string());
  out << content;
  return path.string();
}

}  // namespace fixtures
