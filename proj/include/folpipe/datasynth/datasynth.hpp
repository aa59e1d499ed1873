#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "folpipe/fol/block.hpp"
#include "folpipe/pipeline/problem.hpp"
#include "folpipe/pipeline/prompt.hpp"
#include "folpipe/reasoner/prover.hpp"

namespace folpipe::datasynth {

// A labeled problem plus the raw generator output for it.
struct CandidateRecord {
  pipeline::ReasoningProblem problem;
  std::string raw_output;
};

struct Normalization {
  std::string text;
  std::vector<std::string> steps;  // log of the mechanical fixes applied
};

// Strips markdown fences and separator lines, canonicalizes section headers,
// collapses duplicate blank lines.
Normalization normalize_generation(const std::string& raw);

struct FormatOutcome {
  bool pass = false;
  std::string reason;
  Normalization normalization;
  fol::BlockParseResult parsed;
};

FormatOutcome filter_format(const CandidateRecord& candidate);

struct SyntaxOutcome {
  bool pass = false;
  std::string reason;
  std::vector<taxonomy::ErrorReport> reports;
};

// Passes when every formula clausifies and no defect of the Parsing, Type,
// Token or Predicate groups is present.
SyntaxOutcome filter_syntax(const fol::TranslationRecord& record);

struct SemanticOutcome {
  bool pass = false;
  std::string reason;  // "semantic-mismatch" or "semantic-timeout" on failure
  reasoner::ProofResult proof;
};

// Passes when the prover verdict equals the gold label. An Uncertain verdict
// under exhausted limits against a decided gold label fails as a timeout.
SemanticOutcome filter_semantic(const fol::TranslationRecord& record,
                                reasoner::TruthLabel gold,
                                const reasoner::ProofLimits& limits);

struct CorpusRecord {
  std::string id;
  std::string input;   // the NL side
  std::string target;  // predicates + FOL in the exact block format
  reasoner::TruthLabel label = reasoner::TruthLabel::Uncertain;

  nlohmann::json to_json() const;
  static CorpusRecord from_json(const nlohmann::json& j);
};

// Downsamples to equal per-label counts (the minimum class size over the
// three labels) with a seeded shuffle; deterministic for a fixed seed, input
// order preserved among survivors.
std::vector<CorpusRecord> balance_labels(const std::vector<CorpusRecord>& records,
                                         std::uint64_t seed);

struct RejectionEntry {
  std::string id;
  std::string stage;  // format | syntax | semantic
  std::string reason;
};

struct SynthStats {
  std::size_t input = 0;
  std::size_t format = 0;    // survivors after the format filter
  std::size_t syntax = 0;
  std::size_t semantic = 0;
  std::size_t normalized = 0;  // candidates that needed mechanical fixes
};

struct AuditReport {
  std::size_t records = 0;
  std::size_t arity_conflicts = 0;
  std::size_t duplicate_declarations = 0;

  nlohmann::json to_json() const;
};

struct SynthesisResult {
  std::vector<CorpusRecord> corpus;
  std::vector<RejectionEntry> rejections;
  SynthStats stats;
  AuditReport audit;
};

// Format -> syntax -> semantic filter chain over all candidates.
SynthesisResult run_synthesis(const std::vector<CandidateRecord>& candidates,
                              const reasoner::ProofLimits& limits, int jobs = 1);

// One chat-completions request line for batch generation of FOL targets.
nlohmann::json batch_request(const pipeline::ReasoningProblem& problem,
                             const std::string& model, double temperature,
                             int max_tokens);

}  // namespace folpipe::datasynth
