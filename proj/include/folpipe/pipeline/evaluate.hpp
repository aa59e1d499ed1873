#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "folpipe/pipeline/runner.hpp"
#include "folpipe/taxonomy/heatmap.hpp"

namespace folpipe::pipeline {

struct EvaluationSummary {
  std::size_t total = 0;
  std::size_t executed = 0;
  std::size_t correct = 0;
  std::size_t valid = 0;
  std::size_t with_metrics = 0;
  std::size_t with_gold = 0;
  std::size_t total_reports = 0;

  double execution_rate = 0.0;
  double accuracy = 0.0;  // correct / total, so accuracy <= execution_rate always
  double mean_coverage = 0.0;
  double mean_usage = 0.0;
  double valid_rate = 0.0;
  bool degenerate = false;  // empty input

  taxonomy::ErrorHeatmap heatmap;

  nlohmann::json to_json() const;
  // One aggregate row in the Coverage / Usage / Validity (%) layout.
  std::string to_metrics_csv(const std::string& dataset,
                             const std::string& run_label) const;
};

// Execution rate = records whose formulas all ran through the prover;
// accuracy counts verdict == gold over all records (non-executed records are
// wrong); coverage/usage are averaged over records with metrics.
EvaluationSummary evaluate(const std::vector<RunResult>& results,
                           const std::string& dataset_name);

void write_results_jsonl(const std::string& path, const std::vector<RunResult>& results);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace folpipe::pipeline
