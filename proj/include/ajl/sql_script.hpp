#pragma once

#include <map>
#include <string>
#include <vector>

#include "ajl/join_tree.hpp"
#include "ajl/query.hpp"

namespace ajl {

enum class SqlMode { three_pass, two_phase };

struct SqlScript {
  std::vector<std::string> statements;

  /// Statements separated by blank lines.
  std::string text() const;
};

/// Column names of each base table, when they differ from the atom variables.
using BaseColumns = std::map<std::string, std::vector<std::string>, std::less<>>;

/// Semijoin statements (`CREATE TEMP TABLE ... WHERE EXISTS`) in the order the algorithm runs them,
/// then the joins; the last statement is the final `SELECT DISTINCT` over the head.
/// Three-pass joins subtrees leaves-first; two-phase joins in the tree's BFS order.
SqlScript emit_sql_script(const Query& q, const JoinTree& t, SqlMode mode, const BaseColumns& columns = {});

}  // namespace ajl
