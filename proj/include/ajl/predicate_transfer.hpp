#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ajl/bloom_filter.hpp"
#include "ajl/join_tree.hpp"
#include "ajl/query.hpp"

namespace ajl {

struct BloomParams {
  double bits_per_key = 8.0;
  std::uint32_t hashes = 6;
  std::uint64_t seed = 0;
};

/// Build a filter on `source` over `attributes`, then filter `target` with it.
struct Transfer {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::string> attributes;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct TransferSchedule {
  std::vector<Transfer> forward;
  std::vector<Transfer> backward;

  /// Backward pass is the forward pass reversed, with each transfer's direction flipped.
  static TransferSchedule mirrored(std::vector<Transfer> forward);
};

/// Transfers along join-tree edges from the smaller endpoint to the larger, ordered by source
/// cardinality. Edges whose atoms share no variable are skipped.
TransferSchedule small_to_large_schedule(const Query& q, const JoinTree& t, std::span<const Relation> atoms);

/// Leaf-to-root transfers (post-order) followed by root-to-leaf transfers.
TransferSchedule rooted_schedule(const Query& q, const JoinTree& rooted);

/// Applies forward then backward transfers to private copies of the atom relations. Each result
/// is a superset of the fully semijoin-reduced relation. Throws ContractError for transfers
/// between atoms that do not share the listed attributes.
std::vector<Relation> predicate_transfer(const Query& q, std::span<const Relation> atoms,
                                         const TransferSchedule& schedule, const BloomParams& params,
                                         OpStats& stats);
std::vector<Relation> predicate_transfer(const Query& q, const Database& db, const TransferSchedule& schedule,
                                         const BloomParams& params, OpStats& stats);

/// Root of the join-tree shape whose two Bloom passes leave the fewest tuples (lowest index on ties).
std::size_t rpt_select_root(const Query& q, std::span<const Relation> atoms, const JoinTree& shape,
                            const BloomParams& params, OpStats& stats);

struct RptResult {
  Relation output;
  JoinTree tree;
  JoinOrder order;
  std::vector<Relation> filtered;
};

/// Root selection, two Bloom passes on the chosen rooted tree, then a pipelined hash join in a
/// monotone order (`order`, or the tree's BFS order).
RptResult rpt(const Query& q, std::span<const Relation> atoms, const BloomParams& params, OpStats& stats,
              const std::optional<JoinOrder>& order = std::nullopt);
RptResult rpt(const Query& q, const Database& db, const BloomParams& params, OpStats& stats,
              const std::optional<JoinOrder>& order = std::nullopt);

}  // namespace ajl
