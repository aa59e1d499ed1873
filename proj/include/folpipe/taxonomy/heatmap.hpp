#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "folpipe/taxonomy/category.hpp"

namespace folpipe::taxonomy {

// Error counts keyed by (dataset, run label, kind). Merging is associative
// and commutative, so partial heatmaps from parallel workers can be folded
// in any order.
class ErrorHeatmap {
 public:
  using Key = std::tuple<std::string, std::string, ErrorKind>;

  void add(const std::string& dataset, const std::string& run_label, ErrorKind kind,
           std::uint64_t n = 1);
  void merge(const ErrorHeatmap& other);

  std::uint64_t at(const std::string& dataset, const std::string& run_label,
                   ErrorKind kind) const;
  std::uint64_t total(const std::string& dataset, const std::string& run_label) const;
  std::uint64_t total() const;
  bool empty() const { return counts_.empty(); }

  const std::map<Key, std::uint64_t>& counts() const { return counts_; }

  // Columns: dataset, run_label, group, kind, count; rows sorted by key.
  std::string to_csv() const;
  nlohmann::json to_json() const;

 private:
  std::map<Key, std::uint64_t> counts_;
};

struct TaggedReport {
  std::string dataset;
  std::string run_label;
  ErrorReport report;
};

ErrorHeatmap aggregate(const std::vector<TaggedReport>& reports);

}  // namespace folpipe::taxonomy
