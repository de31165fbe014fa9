#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ajl/join_tree.hpp"
#include "ajl/op_stats.hpp"
#include "ajl/predicate_transfer.hpp"
#include "ajl/query.hpp"

namespace ajl {

enum class Strategy { oracle, hashjoin, ya, ya2, yaplus, pt, rpt, ttj, nested };

Strategy parse_strategy(std::string_view name);
std::string strategy_name(Strategy s);
const std::vector<Strategy>& all_strategies();

enum class AggregateKind { count, sum, min };

struct AggregateSpec {
  AggregateKind kind = AggregateKind::count;
  std::optional<std::string> attribute;

  /// "count", "sum:<attr>" or "min:<attr>".
  static AggregateSpec parse(std::string_view text);
  /// Name of the result column holding the aggregate.
  std::string column() const;
};

struct Execution {
  Relation output;
  OpStats stats;
  double reduce_ms = 0.0;
  double join_ms = 0.0;
  std::optional<JoinTree> tree;
  JoinOrder order;
  bool zero_ma = false;
};

/// Runs one strategy on bound atom relations. Every strategy except oracle needs an acyclic query.
Execution execute(Strategy s, const Query& q, std::span<const Relation> atoms, const BloomParams& bloom = {});

/// Grouped aggregate; the result has the group-by columns followed by the aggregate column.
/// Uses the dominating-atom shortcut whenever it applies. Supports oracle, ya, ya2 and yaplus.
Execution execute_aggregate(Strategy s, const Query& q, std::span<const Relation> atoms, const AggregateSpec& agg,
                            std::span<const std::string> groupby);

nlohmann::ordered_json stats_json(Strategy s, const Execution& e, std::uint64_t seed);

struct RunConfig {
  std::filesystem::path query;
  std::filesystem::path data;
  Strategy strategy = Strategy::ya;
  std::uint64_t seed = 0;
  BloomParams bloom;
  std::optional<AggregateSpec> aggregate;
  std::vector<std::string> groupby;
  std::optional<std::filesystem::path> output;  // result CSV; stdout when absent
  std::optional<std::filesystem::path> stats;   // stats JSON; not written when absent
};

/// Exit codes: 0 success, 1 usage or data errors, 2 cyclic query, 3 I/O errors.
int run(const RunConfig& cfg);

}  // namespace ajl
