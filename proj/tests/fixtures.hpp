#pragma once

#include <string>
#include <utility>
#include <vector>

#include "folpipe/datasynth/datasynth.hpp"
#include "folpipe/fol/block.hpp"
#include "folpipe/pipeline/problem.hpp"
#include "folpipe/taxonomy/category.hpp"

// Shared test inputs: the worked ProofWriter example used across the suites,
// the taxonomy golden rows, and small constructed corpora.
namespace fixtures {

// Full translation block: 7 predicates, 18 premises, 1 conclusion.
std::string example_block();
// The same content split as the incremental pipeline sees it.
std::string example_predicates_response();
std::string example_fol_response();
folpipe::pipeline::ReasoningProblem example_problem();

struct TaxonomyCase {
  std::string name;
  std::vector<std::string> statements;  // premises of a minimal record
  folpipe::taxonomy::ErrorGroup group;
  folpipe::taxonomy::ErrorKind kind;
};
// The golden classification rows, one per error kind.
std::vector<TaxonomyCase> golden_cases();

// Tool feedback strings and the groups they map to.
std::vector<std::pair<std::string, folpipe::taxonomy::ErrorGroup>> feedback_cases();

// Degenerate generation stuck repeating one atom; never reaches the tool.
std::string loop_output(int repetitions = 200);

// Wraps statements into a record for classification tests. A neutral 0-ary
// conclusion is appended.
folpipe::fol::BlockParseResult make_record(const std::vector<std::string>& premises,
                                           const std::string& conclusion = "Placeholder");

// Six candidates: 2 format-bad, 1 syntax-bad, 1 semantic-bad, 2 good.
// Filter chain survivor counts: 4 / 3 / 2.
std::vector<folpipe::datasynth::CandidateRecord> synthesis_fixture();

// Four clean candidates with labels True x2, False x1, Uncertain x1.
std::vector<folpipe::datasynth::CandidateRecord> balanced_synthesis_fixture();

// Incremental replay fixture whose stage 1 declares conflicting arities
// (an extra-variable perturbation); stage 2 uses the majority arity.
struct ArityFixture {
  folpipe::pipeline::ReasoningProblem problem;
  std::string stage1;
  std::string stage2;
};
std::vector<ArityFixture> arity_perturbation_fixtures(int count);

// Unique temp directory for CLI tests; created on first use.
std::string temp_dir();
std::string write_temp_file(const std::string& name, const std::string& content);

}  // namespace fixtures
