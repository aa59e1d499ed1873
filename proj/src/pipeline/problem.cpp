#include "folpipe/pipeline/problem.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace folpipe::pipeline {

nlohmann::json ReasoningProblem::to_json() const {
  nlohmann::json j{{"id", id}, {"premises", premises_nl}, {"conclusion", conclusion_nl}};
  if (gold_label) j["label"] = std::string(reasoner::to_string(*gold_label));
  if (!gold_fol.empty()) j["gold_fol"] = gold_fol;
  return j;
}

ReasoningProblem ReasoningProblem::from_json(const nlohmann::json& j) {
  ReasoningProblem p;
  p.id = j.at("id").get<std::string>();
  p.premises_nl = j.at("premises").get<std::vector<std::string>>();
  p.conclusion_nl = j.at("conclusion").get<std::string>();
  if (p.premises_nl.empty()) {
    throw std::invalid_argument("problem '" + p.id + "' has no premises");
  }
  if (j.contains("label") && !j.at("label").is_null()) {
    const auto raw = j.at("label").get<std::string>();
    const auto label = reasoner::parse_truth_label(raw);
    if (!label) throw std::invalid_argument("problem '" + p.id + "': bad label '" + raw + "'");
    p.gold_label = label;
  }
  if (j.contains("gold_fol")) p.gold_fol = j.at("gold_fol").get<std::vector<std::string>>();
  return p;
}

std::vector<ReasoningProblem> load_problems_jsonl(std::istream& in) {
  std::vector<ReasoningProblem> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ReasoningProblem::from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ReasoningProblem> load_problems_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  return load_problems_jsonl(in);
}

}  // namespace folpipe::pipeline
