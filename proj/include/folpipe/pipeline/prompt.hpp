#pragma once

#include <string>
#include <vector>

#include "folpipe/pipeline/client.hpp"
#include "folpipe/pipeline/problem.hpp"

namespace folpipe::pipeline {

enum class PromptMode { Standard, PredicatesOnly, FolGivenPredicates, Verifier };

std::string_view to_string(PromptMode mode);

struct FewShotExample {
  std::string premises_nl;       // space-joined sentences
  std::string conclusion_nl;
  std::string predicates_line;   // candidate predicates (verifier / stage 2 shots)
  std::string exemplar_output;   // assistant turn
};

// Deterministic chat-prompt builder: system text, few-shot user/assistant
// pairs, then the problem's user turn.
struct PromptTemplate {
  PromptMode mode = PromptMode::Standard;
  std::string system_text;
  std::vector<FewShotExample> shots;
  std::vector<std::string> stop;  // default stop sequences for this mode

  std::string user_turn(const std::string& premises_nl, const std::string& conclusion_nl,
                        const std::string& predicates_line) const;
  std::vector<ChatMessage> render(const ReasoningProblem& problem,
                                  const std::string& predicates_line = "") const;
};

std::string join_premises(const std::vector<std::string>& premises_nl);

// Built-in templates matching the block format the parser reads back.
PromptTemplate default_template(PromptMode mode);

}  // namespace folpipe::pipeline
