#include "folpipe/pipeline/evaluate.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace folpipe::pipeline {

EvaluationSummary evaluate(const std::vector<RunResult>& results,
                           const std::string& dataset_name) {
  EvaluationSummary s;
  s.total = results.size();
  if (results.empty()) {
    s.degenerate = true;
    return s;
  }
  double coverage_sum = 0.0;
  double usage_sum = 0.0;
  std::vector<taxonomy::TaggedReport> tagged;
  for (const auto& r : results) {
    if (r.executed()) ++s.executed;
    if (r.correct && *r.correct) ++s.correct;
    if (r.correct.has_value()) ++s.with_gold;
    if (r.metrics) {
      ++s.with_metrics;
      coverage_sum += r.metrics->coverage();
      usage_sum += r.metrics->usage();
      if (r.metrics->valid) ++s.valid;
    }
    s.total_reports += r.reports.size();
    for (const auto& report : r.reports) {
      tagged.push_back({dataset_name, r.mode_label, report});
    }
  }
  s.heatmap = taxonomy::aggregate(tagged);
  s.execution_rate = double(s.executed) / double(s.total);
  s.accuracy = double(s.correct) / double(s.total);
  s.valid_rate = double(s.valid) / double(s.total);
  if (s.with_metrics > 0) {
    s.mean_coverage = coverage_sum / double(s.with_metrics);
    s.mean_usage = usage_sum / double(s.with_metrics);
  }
  return s;
}

nlohmann::json EvaluationSummary::to_json() const {
  return nlohmann::json{{"records", total},
                        {"executed", executed},
                        {"correct", correct},
                        {"valid", valid},
                        {"with_metrics", with_metrics},
                        {"with_gold", with_gold},
                        {"total_error_reports", total_reports},
                        {"execution_rate", execution_rate},
                        {"accuracy", accuracy},
                        {"mean_coverage", mean_coverage},
                        {"mean_usage", mean_usage},
                        {"valid_rate", valid_rate},
                        {"degenerate", degenerate},
                        {"heatmap", heatmap.to_json()}};
}

std::string EvaluationSummary::to_metrics_csv(const std::string& dataset,
                                              const std::string& run_label) const {
  char row[256];
  std::snprintf(row, sizeof(row), "%s,%s,%.2f,%.2f,%.2f\n", dataset.c_str(),
                run_label.c_str(), mean_coverage * 100.0, mean_usage * 100.0,
                valid_rate * 100.0);
  return std::string("dataset,run_label,coverage_pct,usage_pct,validity_pct\n") + row;
}

void write_results_jsonl(const std::string& path, const std::vector<RunResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& r : results) out << r.to_json().dump() << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace folpipe::pipeline
