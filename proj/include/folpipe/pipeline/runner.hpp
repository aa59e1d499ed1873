#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folpipe/fol/block.hpp"
#include "folpipe/pipeline/client.hpp"
#include "folpipe/pipeline/prompt.hpp"
#include "folpipe/predicates/predicates.hpp"
#include "folpipe/reasoner/oracle.hpp"
#include "folpipe/reasoner/prover.hpp"
#include "folpipe/taxonomy/classify.hpp"

namespace folpipe::pipeline {

enum class RunMode { Standard, Incremental };
enum class VerifierKind { None, Deterministic, Model };

// V(P̂): either the original set is fine or a corrected, conflict-free set
// replaces it.
struct VerifierOutcome {
  enum class Provenance { Deterministic, ModelBased };

  bool corrected = false;
  predicates::PredicateSet predicates;  // final set either way
  Provenance provenance = Provenance::Deterministic;
  bool warning = false;  // model reply unusable; original set kept
};

struct StageStats {
  std::chrono::milliseconds latency{0};
  int tokens = 0;
};

struct RunResult {
  std::string problem_id;
  std::string mode_label;  // Standard | Incremental | Incremental+Verifier | custom
  std::vector<std::string> generations;  // raw text per stage
  std::optional<fol::BlockParseResult> parsed;
  std::vector<taxonomy::ErrorReport> reports;
  std::optional<predicates::PredicateMetrics> metrics;
  std::optional<reasoner::ProofResult> proof;  // present only when executed
  std::optional<bool> correct;                 // defined only with a gold label
  std::vector<StageStats> stages;
  bool transport_error = false;
  std::optional<VerifierOutcome> verifier;

  bool executed() const { return proof.has_value(); }
  nlohmann::json to_json() const;
};

struct RunnerOptions {
  reasoner::ProofLimits limits;
  double stage1_token_ratio = 0.20;  // share of the budget stage 1 gets
  VerifierKind verifier = VerifierKind::None;
  bool verifier_fallback_deterministic = true;  // on verifier transport failure
  predicates::MatchMode metrics_match = predicates::MatchMode::NameAndArity;
  std::string run_label_override;
};

// Single generation call; the output block carries its own predicate
// declarations, which become Px.
RunResult run_standard(const ReasoningProblem& problem, ChatClient& client,
                       const GeneratorConfig& config, const PromptTemplate& tmpl,
                       const RunnerOptions& options = {});

// Two-stage inference: predicates first (early-stopped), optional verifier,
// then FOL conditioned on the (possibly corrected) predicate line. The output
// token budget is split so both stages together spend the standard budget.
RunResult run_incremental(const ReasoningProblem& problem, ChatClient& client,
                          const GeneratorConfig& config, const PromptTemplate& tmpl_pred,
                          const PromptTemplate& tmpl_fol, const RunnerOptions& options = {},
                          const PromptTemplate* tmpl_verifier = nullptr);

// Arity-consistency check with majority repair: for each conflicted name the
// most-declared arity survives (ties pick the smaller one).
VerifierOutcome verify_predicates_deterministic(
    const std::vector<predicates::PredicateSignature>& declarations);

VerifierOutcome verify_predicates_model(
    const ReasoningProblem& problem,
    const std::vector<predicates::PredicateSignature>& declarations, ChatClient& client,
    const GeneratorConfig& config, const PromptTemplate& tmpl_verifier,
    bool fallback_deterministic);

// "Name(x, y)" placeholder form, semicolon-joined, as embedded in stage-2
// prompts.
std::string predicates_line(const std::vector<predicates::PredicateSignature>& decls);
std::string placeholder_form(const predicates::PredicateSignature& sig);

struct BatchOptions {
  RunMode mode = RunMode::Standard;
  RunnerOptions runner;
  int jobs = 1;
};

// Worker-pool map over the dataset; result order always matches input order.
std::vector<RunResult> run_batch(const std::vector<ReasoningProblem>& problems,
                                 ChatClient& client, const GeneratorConfig& config,
                                 const PromptTemplate& tmpl_standard,
                                 const PromptTemplate& tmpl_pred,
                                 const PromptTemplate& tmpl_fol,
                                 const PromptTemplate& tmpl_verifier,
                                 const BatchOptions& options);

}  // namespace folpipe::pipeline
