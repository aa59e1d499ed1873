#include "folpipe/datasynth/datasynth.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "folpipe/reasoner/clausify.hpp"
#include "folpipe/taxonomy/classify.hpp"

namespace folpipe::datasynth {

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

struct HeaderAlias {
  const char* alias;
  const char* canonical;
};

constexpr HeaderAlias kHeaderAliases[] = {
    {"premises_first-order", "Premises:"},
    {"premise_first-order", "Premises:"},
    {"conclusion_first-order", "Conclusion:"},
    {"predicates", "Predicates:"},
    {"predicate", "Predicates:"},
    {"premises", "Premises:"},
    {"premise", "Premises:"},
    {"conclusion", "Conclusion:"},
};

// Rewrites "<alias> :" line starts into the canonical header; returns
// nothing when the line is not a header.
std::optional<std::string> canonical_header(const std::string& line) {
  const std::string folded = lower(line);
  for (const auto& h : kHeaderAliases) {
    const std::string alias = h.alias;
    if (folded.rfind(alias, 0) != 0) continue;
    std::size_t i = alias.size();
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == ':') {
      std::string rest = trim(line.substr(i + 1));
      std::string out = h.canonical;
      if (!rest.empty()) out += " " + rest;
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

Normalization normalize_generation(const std::string& raw) {
  Normalization out;
  std::vector<std::string> lines;
  std::istringstream in(raw);
  std::string line;
  bool stripped_fence = false, dropped_separator = false, fixed_header = false,
       collapsed_blank = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.rfind("```", 0) == 0) {
      stripped_fence = true;
      continue;
    }
    if (t == "###" || t == "---") {
      dropped_separator = true;
      continue;
    }
    if (auto header = canonical_header(t)) {
      if (*header != t) fixed_header = true;
      lines.push_back(*header);
      continue;
    }
    if (t.empty() && !lines.empty() && lines.back().empty()) {
      collapsed_blank = true;
      continue;
    }
    lines.push_back(std::move(t));
  }
  if (stripped_fence) out.steps.push_back("stripped markdown fences");
  if (dropped_separator) out.steps.push_back("dropped separator lines");
  if (fixed_header) out.steps.push_back("normalized section headers");
  if (collapsed_blank) out.steps.push_back("collapsed duplicate blank lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.text += '\n';
    out.text += lines[i];
  }
  return out;
}

FormatOutcome filter_format(const CandidateRecord& candidate) {
  FormatOutcome out;
  out.normalization = normalize_generation(candidate.raw_output);
  out.parsed = fol::parse_translation_block(out.normalization.text);
  if (out.parsed.ok()) {
    out.pass = true;
  } else {
    out.reason = out.parsed.failure->detail.empty()
                     ? std::string(to_string(out.parsed.failure->cause))
                     : out.parsed.failure->detail;
  }
  return out;
}

SyntaxOutcome filter_syntax(const fol::TranslationRecord& record) {
  SyntaxOutcome out;
  const fol::BlockParseResult wrapped{record, std::nullopt};
  out.reports = taxonomy::classify(wrapped);
  for (const auto& r : out.reports) {
    out.reason = std::string(taxonomy::to_string(r.category.kind));
    return out;
  }
  // classify() already rejects open formulas; clausify everything anyway so
  // "clausifies without error" holds by construction.
  try {
    reasoner::SymbolPool pool;
    auto formulas = record.parsed_premises();
    formulas.push_back(record.conclusion.formula);
    reasoner::clausify_set(formulas, pool);
  } catch (const reasoner::FreeVariableError& e) {
    out.reason = e.what();
    return out;
  }
  out.pass = true;
  return out;
}

SemanticOutcome filter_semantic(const fol::TranslationRecord& record,
                                reasoner::TruthLabel gold,
                                const reasoner::ProofLimits& limits) {
  SemanticOutcome out;
  out.proof = reasoner::prove(record.parsed_premises(), record.conclusion.formula, limits);
  if (out.proof.verdict.matches(gold)) {
    out.pass = true;
    return out;
  }
  const bool timed_out = out.proof.limit_hit &&
                         out.proof.verdict.state == reasoner::Verdict::State::Uncertain;
  out.reason = timed_out ? "semantic-timeout" : "semantic-mismatch";
  return out;
}

nlohmann::json CorpusRecord::to_json() const {
  return nlohmann::json{{"id", id},
                        {"input", input},
                        {"target", target},
                        {"label", std::string(reasoner::to_string(label))}};
}

CorpusRecord CorpusRecord::from_json(const nlohmann::json& j) {
  CorpusRecord r;
  r.id = j.value("id", "");
  r.input = j.at("input").get<std::string>();
  r.target = j.at("target").get<std::string>();
  const auto label = reasoner::parse_truth_label(j.at("label").get<std::string>());
  if (!label) throw std::invalid_argument("bad corpus label");
  r.label = *label;
  return r;
}

std::vector<CorpusRecord> balance_labels(const std::vector<CorpusRecord>& records,
                                         std::uint64_t seed) {
  std::map<reasoner::TruthLabel, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_label[records[i].label].push_back(i);
  }
  const reasoner::TruthLabel all_labels[] = {reasoner::TruthLabel::True,
                                             reasoner::TruthLabel::False,
                                             reasoner::TruthLabel::Uncertain};
  std::size_t min_count = records.size();
  for (const auto label : all_labels) {
    const auto it = by_label.find(label);
    min_count = std::min(min_count, it == by_label.end() ? 0 : it->second.size());
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (const auto label : all_labels) {
    auto& indices = by_label[label];
    std::shuffle(indices.begin(), indices.end(), rng);
    keep.insert(keep.end(), indices.begin(), indices.begin() + min_count);
  }
  std::sort(keep.begin(), keep.end());
  std::vector<CorpusRecord> out;
  out.reserve(keep.size());
  for (const auto i : keep) out.push_back(records[i]);
  return out;
}

namespace {

std::string corpus_input(const pipeline::ReasoningProblem& problem) {
  return "Context:\n" + pipeline::join_premises(problem.premises_nl) + "\nQuestion:\n" +
         problem.conclusion_nl;
}

struct CandidateOutcome {
  bool kept = false;
  CorpusRecord record;
  RejectionEntry rejection;
  bool has_conflict = false;
  bool was_normalized = false;
  std::size_t duplicate_decls = 0;
};

CandidateOutcome process_candidate(const CandidateRecord& candidate,
                                   const reasoner::ProofLimits& limits) {
  CandidateOutcome out;
  const FormatOutcome format = filter_format(candidate);
  out.was_normalized = !format.normalization.steps.empty();
  if (!format.pass) {
    out.rejection = {candidate.problem.id, "format", format.reason};
    return out;
  }
  const fol::TranslationRecord& record = *format.parsed.record;

  const SyntaxOutcome syntax = filter_syntax(record);
  if (!syntax.pass) {
    out.rejection = {candidate.problem.id, "syntax", syntax.reason};
    return out;
  }

  if (!candidate.problem.gold_label) {
    out.rejection = {candidate.problem.id, "semantic", "missing gold label"};
    return out;
  }
  const SemanticOutcome semantic =
      filter_semantic(record, *candidate.problem.gold_label, limits);
  if (!semantic.pass) {
    out.rejection = {candidate.problem.id, "semantic", semantic.reason};
    return out;
  }

  out.kept = true;
  out.record.id = candidate.problem.id;
  out.record.input = corpus_input(candidate.problem);
  out.record.target = format.normalization.text;
  out.record.label = *candidate.problem.gold_label;

  // Audit inputs.
  const auto used = predicates::extract_used_predicates(record.parsed_statements());
  out.has_conflict =
      !predicates::check_arity_consistency(record.declared_set(), used).empty();
  std::map<predicates::PredicateSignature, int> decl_counts;
  for (const auto& sig : record.declared.declarations) ++decl_counts[sig];
  for (const auto& [sig, n] : decl_counts) {
    if (n > 1) out.duplicate_decls += n - 1;
  }
  return out;
}

}  // namespace

nlohmann::json AuditReport::to_json() const {
  return nlohmann::json{{"records", records},
                        {"arity_conflicts", arity_conflicts},
                        {"duplicate_declarations", duplicate_declarations}};
}

SynthesisResult run_synthesis(const std::vector<CandidateRecord>& candidates,
                              const reasoner::ProofLimits& limits, int jobs) {
  SynthesisResult result;
  result.stats.input = candidates.size();

  std::vector<CandidateOutcome> outcomes(candidates.size());
  const int workers = std::max(1, std::min<int>(jobs, candidates.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= candidates.size()) return;
      outcomes[i] = process_candidate(candidates[i], limits);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (const auto& o : outcomes) {
    if (o.was_normalized) ++result.stats.normalized;
    if (o.kept) {
      ++result.stats.format;
      ++result.stats.syntax;
      ++result.stats.semantic;
      result.corpus.push_back(o.record);
      ++result.audit.records;
      if (o.has_conflict) ++result.audit.arity_conflicts;
      result.audit.duplicate_declarations += o.duplicate_decls;
      continue;
    }
    if (o.rejection.stage == "syntax") {
      ++result.stats.format;
    } else if (o.rejection.stage == "semantic") {
      ++result.stats.format;
      ++result.stats.syntax;
    }
    result.rejections.push_back(o.rejection);
  }
  return result;
}

nlohmann::json batch_request(const pipeline::ReasoningProblem& problem,
                             const std::string& model, double temperature,
                             int max_tokens) {
  const std::string instruction =
      "You are an expert who works with theorem provers. Given some context "
      "and a question, generate the predicates and the first-order logic "
      "formula for contexts and question.";
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", instruction}});
  messages.push_back({{"role", "user"}, {"content", corpus_input(problem)}});
  return nlohmann::json{{"custom_id", problem.id},
                        {"method", "POST"},
                        {"url", "/v1/chat/completions"},
                        {"body",
                         {{"model", model},
                          {"temperature", temperature},
                          {"max_tokens", max_tokens},
                          {"messages", std::move(messages)}}}};
}

}  // namespace folpipe::datasynth
