#include "folpipe/taxonomy/heatmap.hpp"

namespace folpipe::taxonomy {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void ErrorHeatmap::add(const std::string& dataset, const std::string& run_label,
                       ErrorKind kind, std::uint64_t n) {
  counts_[{dataset, run_label, kind}] += n;
}

void ErrorHeatmap::merge(const ErrorHeatmap& other) {
  for (const auto& [key, n] : other.counts_) counts_[key] += n;
}

std::uint64_t ErrorHeatmap::at(const std::string& dataset, const std::string& run_label,
                               ErrorKind kind) const {
  const auto it = counts_.find({dataset, run_label, kind});
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t ErrorHeatmap::total(const std::string& dataset,
                                  const std::string& run_label) const {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts_) {
    if (std::get<0>(key) == dataset && std::get<1>(key) == run_label) sum += n;
  }
  return sum;
}

std::uint64_t ErrorHeatmap::total() const {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts_) sum += n;
  return sum;
}

std::string ErrorHeatmap::to_csv() const {
  std::string out = "dataset,run_label,group,kind,count\n";
  for (const auto& [key, n] : counts_) {
    const auto& [dataset, run_label, kind] = key;
    out += csv_field(dataset);
    out += ',';
    out += csv_field(run_label);
    out += ',';
    out += to_string(group_of(kind));
    out += ',';
    out += to_string(kind);
    out += ',';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

nlohmann::json ErrorHeatmap::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, n] : counts_) {
    const auto& [dataset, run_label, kind] = key;
    rows.push_back({{"dataset", dataset},
                    {"run_label", run_label},
                    {"group", to_string(group_of(kind))},
                    {"kind", to_string(kind)},
                    {"count", n}});
  }
  return rows;
}

ErrorHeatmap aggregate(const std::vector<TaggedReport>& reports) {
  ErrorHeatmap heatmap;
  for (const auto& r : reports) heatmap.add(r.dataset, r.run_label, r.report.category.kind);
  return heatmap;
}

}  // namespace folpipe::taxonomy
