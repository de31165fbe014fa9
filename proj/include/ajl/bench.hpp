#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ajl/predicate_transfer.hpp"
#include "ajl/runner.hpp"

namespace ajl {

struct BenchConfig {
  std::vector<Strategy> strategies;
  std::vector<std::filesystem::path> instances;  // directories holding query.cq and the CSVs
  std::size_t repetitions = 3;
  BloomParams bloom;
};

struct BenchRow {
  std::string instance;
  Strategy strategy = Strategy::hashjoin;
  std::size_t output_size = 0;
  OpStats stats;
  double median_ms = 0.0;
  std::optional<double> work_ratio;  // total counters / hashjoin total counters
  std::optional<double> time_ratio;  // median time / hashjoin median time
};

struct BenchReport {
  std::size_t repetitions = 0;
  std::vector<BenchRow> rows;

  nlohmann::ordered_json to_json() const;
  void print_table(std::ostream& out) const;
};

/// Times every (instance, strategy) cell `repetitions` times (at least 3) and reports the median.
/// The hashjoin baseline is always measured for the ratios but only listed when requested.
BenchReport bench(const BenchConfig& cfg);

}  // namespace ajl
