#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folpipe/reasoner/prover.hpp"

namespace folpipe::pipeline {

// One NL reasoning problem: premises, a conclusion, and (for evaluation and
// synthesis) the gold label.
struct ReasoningProblem {
  std::string id;
  std::vector<std::string> premises_nl;
  std::string conclusion_nl;
  std::optional<reasoner::TruthLabel> gold_label;
  std::vector<std::string> gold_fol;

  nlohmann::json to_json() const;
  static ReasoningProblem from_json(const nlohmann::json& j);
};

// JSONL: one problem per line, fields {id, premises, conclusion, label?,
// gold_fol?}. Blank lines are skipped; malformed lines throw with the line
// number in the message.
std::vector<ReasoningProblem> load_problems_jsonl(std::istream& in);
std::vector<ReasoningProblem> load_problems_file(const std::string& path);

}  // namespace folpipe::pipeline
