#include "folpipe/pipeline/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>
#include <thread>

namespace folpipe::pipeline {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> merged_stop(const PromptTemplate& tmpl,
                                     const GeneratorConfig& config) {
  std::vector<std::string> stop = tmpl.stop;
  stop.insert(stop.end(), config.stop.begin(), config.stop.end());
  return stop;
}

// Drops an optional leading "Predicates:" header and splits the remainder
// into declaration lines.
std::vector<std::string> predicate_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    const std::string folded = lower(t);
    if (folded.rfind("predicates:", 0) == 0 || folded.rfind("predicate:", 0) == 0) {
      const auto rest = trim(t.substr(t.find(':') + 1));
      if (!rest.empty()) lines.push_back(rest);
      continue;
    }
    lines.push_back(std::move(t));
  }
  return lines;
}

bool executable(const fol::TranslationRecord& record,
                const std::vector<taxonomy::ErrorReport>& reports) {
  if (!record.all_statements_parse()) return false;
  for (const auto& r : reports) {
    const auto group = r.category.group();
    // Parsing, Type and Token defects all abort the tool; an arity mismatch
    // raises inside it. Subject-predicate conflicts still execute.
    if (group == taxonomy::ErrorGroup::Parsing || group == taxonomy::ErrorGroup::Type ||
        group == taxonomy::ErrorGroup::Token) {
      return false;
    }
    if (r.category.kind == taxonomy::ErrorKind::ArityMismatch) return false;
  }
  return true;
}

// Classification, metrics, proving: everything downstream of the generation.
void analyze(RunResult& result, const ReasoningProblem& problem,
             const predicates::PredicateSet& px, const RunnerOptions& options) {
  if (!result.parsed) return;
  result.reports = taxonomy::classify(*result.parsed);
  if (!result.parsed->ok()) return;
  const fol::TranslationRecord& record = *result.parsed->record;

  const auto statements = record.parsed_statements();
  const auto py = predicates::extract_used_predicates(statements);
  const bool valid = record.all_statements_parse() &&
                     record.premises.size() == problem.premises_nl.size();
  result.metrics = predicates::compute_metrics(px, py, valid, options.metrics_match);

  if (executable(record, result.reports)) {
    result.proof = reasoner::prove(record.parsed_premises(), record.conclusion.formula,
                                   options.limits);
  }
  if (problem.gold_label) {
    result.correct = result.proof.has_value() &&
                     result.proof->verdict.matches(*problem.gold_label);
  }
}

StageStats stage_stats(const Completion& completion) {
  return {completion.latency, completion.completion_tokens};
}

}  // namespace

std::string placeholder_form(const predicates::PredicateSignature& sig) {
  static const char* kVars[] = {"x", "y", "z", "u", "v", "w"};
  std::string out = sig.name;
  if (sig.arity == 0) return out;
  out += '(';
  for (int i = 0; i < sig.arity; ++i) {
    if (i) out += ", ";
    if (i < 6) out += kVars[i];
    else out += "v" + std::to_string(i);
  }
  out += ')';
  return out;
}

std::string predicates_line(const std::vector<predicates::PredicateSignature>& decls) {
  std::string out;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (i) out += "; ";
    out += placeholder_form(decls[i]);
  }
  return out;
}

RunResult run_standard(const ReasoningProblem& problem, ChatClient& client,
                       const GeneratorConfig& config, const PromptTemplate& tmpl,
                       const RunnerOptions& options) {
  RunResult result;
  result.problem_id = problem.id;
  result.mode_label =
      options.run_label_override.empty() ? "Standard" : options.run_label_override;

  ChatRequest request{problem.id, "standard", tmpl.render(problem),
                      config.max_output_tokens, merged_stop(tmpl, config)};
  const ClientResult response = client.complete(request);
  if (!response.ok()) {
    result.transport_error = true;
    return result;
  }
  result.generations.push_back(response.completion->text);
  result.stages.push_back(stage_stats(*response.completion));
  result.parsed = fol::parse_translation_block(response.completion->text);

  predicates::PredicateSet px;
  if (result.parsed->ok()) px = result.parsed->record->declared_set();
  analyze(result, problem, px, options);
  return result;
}

VerifierOutcome verify_predicates_deterministic(
    const std::vector<predicates::PredicateSignature>& declarations) {
  VerifierOutcome outcome;
  outcome.provenance = VerifierOutcome::Provenance::Deterministic;
  const auto conflicts = predicates::arity_conflicts(declarations);
  if (conflicts.empty()) {
    outcome.predicates =
        predicates::PredicateSet(declarations.begin(), declarations.end());
    return outcome;
  }
  outcome.corrected = true;
  for (const auto& conflict : conflicts) {
    // Majority arity wins; ties keep the smaller arity. occurrences is
    // keyed ascending, so a strict '>' does both.
    int best_arity = -1, best_count = 0;
    for (const auto& [arity, count] : conflict.occurrences) {
      if (count > best_count) {
        best_count = count;
        best_arity = arity;
      }
    }
    outcome.predicates.insert({conflict.name, best_arity});
  }
  for (const auto& sig : declarations) {
    const bool conflicted =
        std::any_of(conflicts.begin(), conflicts.end(),
                    [&](const auto& c) { return c.name == sig.name; });
    if (!conflicted) outcome.predicates.insert(sig);
  }
  return outcome;
}

VerifierOutcome verify_predicates_model(
    const ReasoningProblem& problem,
    const std::vector<predicates::PredicateSignature>& declarations, ChatClient& client,
    const GeneratorConfig& config, const PromptTemplate& tmpl_verifier,
    bool fallback_deterministic) {
  const predicates::PredicateSet original(declarations.begin(), declarations.end());

  ChatRequest request{problem.id, "verifier",
                      tmpl_verifier.render(problem, predicates_line(declarations)),
                      config.max_output_tokens, merged_stop(tmpl_verifier, config)};
  const ClientResult response = client.complete(request);
  if (!response.ok()) {
    if (fallback_deterministic) return verify_predicates_deterministic(declarations);
    VerifierOutcome outcome;
    outcome.provenance = VerifierOutcome::Provenance::ModelBased;
    outcome.predicates = original;
    outcome.warning = true;
    return outcome;
  }

  VerifierOutcome outcome;
  outcome.provenance = VerifierOutcome::Provenance::ModelBased;
  const std::string reply = trim(response.completion->text);
  if (lower(reply) == "correct") {
    outcome.predicates = original;
    return outcome;
  }
  const auto parsed = predicates::parse_predicate_decls(predicate_lines(reply));
  // An unusable or still-conflicted correction never corrupts the original
  // set; fall back to Correct with a warning.
  if (parsed.declarations.empty() ||
      !predicates::arity_conflicts(parsed.declarations).empty()) {
    outcome.predicates = original;
    outcome.warning = true;
    return outcome;
  }
  outcome.corrected = true;
  outcome.predicates = parsed.unique();
  return outcome;
}

RunResult run_incremental(const ReasoningProblem& problem, ChatClient& client,
                          const GeneratorConfig& config, const PromptTemplate& tmpl_pred,
                          const PromptTemplate& tmpl_fol, const RunnerOptions& options,
                          const PromptTemplate* tmpl_verifier) {
  RunResult result;
  result.problem_id = problem.id;
  if (!options.run_label_override.empty()) {
    result.mode_label = options.run_label_override;
  } else {
    result.mode_label = options.verifier == VerifierKind::None
                            ? "Incremental"
                            : "Incremental+Verifier";
  }

  const int total_budget = config.max_output_tokens;
  const int stage1_budget = std::max(
      1, static_cast<int>(std::lround(total_budget * options.stage1_token_ratio)));
  const int stage2_budget = std::max(1, total_budget - stage1_budget);

  // Stage 1: predicates only, early-stopped at the premises header.
  ChatRequest stage1{problem.id, "predicates", tmpl_pred.render(problem), stage1_budget,
                     merged_stop(tmpl_pred, config)};
  const ClientResult response1 = client.complete(stage1);
  if (!response1.ok()) {
    result.transport_error = true;
    result.parsed = fol::BlockParseResult{
        std::nullopt,
        fol::FormattingFailure{fol::FormattingCause::MissingSection,
                               "stage 1 failed: " + response1.error}};
    result.reports = taxonomy::classify(*result.parsed);
    return result;
  }
  result.generations.push_back(response1.completion->text);
  result.stages.push_back(stage_stats(*response1.completion));

  auto decls = predicates::parse_predicate_decls(
      predicate_lines(response1.completion->text));
  if (decls.declarations.empty()) {
    result.parsed = fol::BlockParseResult{
        std::nullopt,
        fol::FormattingFailure{fol::FormattingCause::EmptySection,
                               "stage 1 produced no predicate declarations"}};
    result.reports = taxonomy::classify(*result.parsed);
    return result;
  }

  if (options.verifier != VerifierKind::None) {
    VerifierOutcome outcome;
    if (options.verifier == VerifierKind::Model && tmpl_verifier) {
      outcome = verify_predicates_model(problem, decls.declarations, client, config,
                                        *tmpl_verifier,
                                        options.verifier_fallback_deterministic);
    } else {
      outcome = verify_predicates_deterministic(decls.declarations);
    }
    if (outcome.corrected) {
      decls.declarations.assign(outcome.predicates.begin(), outcome.predicates.end());
    }
    result.verifier = std::move(outcome);
  }

  // Stage 2: FOL given the (possibly corrected) predicate line.
  const std::string line = predicates_line(decls.declarations);
  ChatRequest stage2{problem.id, "fol", tmpl_fol.render(problem, line), stage2_budget,
                     merged_stop(tmpl_fol, config)};
  const ClientResult response2 = client.complete(stage2);
  if (!response2.ok()) {
    result.transport_error = true;
    result.parsed = fol::BlockParseResult{
        std::nullopt,
        fol::FormattingFailure{fol::FormattingCause::MissingSection,
                               "stage 2 failed: " + response2.error}};
    result.reports = taxonomy::classify(*result.parsed);
    return result;
  }
  result.generations.push_back(response2.completion->text);
  result.stages.push_back(stage_stats(*response2.completion));

  fol::BlockOptions block_options;
  block_options.require_predicates_section = false;
  auto parsed = fol::parse_translation_block(response2.completion->text, block_options);
  if (parsed.ok()) {
    // The record's declared predicates are the stage-1 (post-verifier) set;
    // a Predicates section the model repeated in stage 2 is ignored.
    parsed.record->declared.declarations = decls.declarations;
    parsed.record->declared.defects = decls.defects;
  }
  result.parsed = std::move(parsed);

  const predicates::PredicateSet px(decls.declarations.begin(), decls.declarations.end());
  analyze(result, problem, px, options);
  return result;
}

nlohmann::json RunResult::to_json() const {
  nlohmann::json j;
  j["id"] = problem_id;
  j["mode"] = mode_label;
  j["generations"] = generations;
  j["transport_error"] = transport_error;
  if (parsed && !parsed->ok()) {
    j["formatting_failure"] = {{"cause", std::string(to_string(parsed->failure->cause))},
                               {"detail", parsed->failure->detail}};
  } else {
    j["formatting_failure"] = nullptr;
  }
  j["valid"] = metrics ? metrics->valid : false;
  j["executed"] = executed();
  auto& reports_json = j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json rj{{"group", std::string(to_string(r.category.group()))},
                      {"kind", std::string(to_string(r.category.kind))},
                      {"detail", r.detail}};
    if (r.statement) {
      rj["section"] = std::string(to_string(r.statement->section));
      rj["index"] = r.statement->index;
    }
    reports_json.push_back(std::move(rj));
  }
  if (metrics) {
    j["metrics"] = {{"coverage", metrics->coverage()}, {"usage", metrics->usage()},
                    {"intersection", metrics->intersection}, {"px", metrics->px_size},
                    {"py", metrics->py_size}, {"valid", metrics->valid},
                    {"degenerate", metrics->degenerate}};
  } else {
    j["metrics"] = nullptr;
  }
  if (proof) {
    j["verdict"] = std::string(to_string(proof->verdict.state));
    j["premises_inconsistent"] = proof->premises_inconsistent;
    j["limit_hit"] = proof->limit_hit;
  } else {
    j["verdict"] = nullptr;
  }
  if (correct) j["correct"] = *correct;
  else j["correct"] = nullptr;
  auto& stages_json = j["stages"] = nlohmann::json::array();
  for (const auto& s : stages) {
    stages_json.push_back({{"latency_ms", s.latency.count()}, {"tokens", s.tokens}});
  }
  if (verifier) {
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& sig : verifier->predicates) preds.push_back(sig.to_string());
    j["verifier"] = {
        {"outcome", verifier->corrected ? "corrected" : "correct"},
        {"provenance", verifier->provenance == VerifierOutcome::Provenance::ModelBased
                           ? "ModelBased"
                           : "Deterministic"},
        {"warning", verifier->warning},
        {"predicates", std::move(preds)}};
  } else {
    j["verifier"] = nullptr;
  }
  return j;
}

std::vector<RunResult> run_batch(const std::vector<ReasoningProblem>& problems,
                                 ChatClient& client, const GeneratorConfig& config,
                                 const PromptTemplate& tmpl_standard,
                                 const PromptTemplate& tmpl_pred,
                                 const PromptTemplate& tmpl_fol,
                                 const PromptTemplate& tmpl_verifier,
                                 const BatchOptions& options) {
  std::vector<RunResult> results(problems.size());
  if (problems.empty()) return results;

  const int jobs = std::max(1, std::min<int>(options.jobs, problems.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= problems.size()) return;
      if (options.mode == RunMode::Standard) {
        results[i] = run_standard(problems[i], client, config, tmpl_standard,
                                  options.runner);
      } else {
        results[i] = run_incremental(problems[i], client, config, tmpl_pred, tmpl_fol,
                                     options.runner, &tmpl_verifier);
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace folpipe::pipeline
