#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ajl/join_tree.hpp"
#include "ajl/op_stats.hpp"
#include "ajl/query.hpp"

namespace ajl {

/// Both shapes scan `order[0]` and build hash tables on every other atom. A right-deep plan runs
/// the whole build phase leaves-first before any probe; a left-deep plan is what TreeTracker
/// prunes during probing.
enum class PlanShape { left_deep, right_deep };

struct PlanStep {
  std::size_t atom = 0;           // build-side atom probed at this step
  std::size_t key_level = 0;      // earlier position in the order whose tuple supplies the key
  std::vector<std::string> keys;  // shared variables with that atom
};

struct Plan {
  PlanShape shape = PlanShape::left_deep;
  JoinOrder order;
  std::vector<PlanStep> steps;  // steps[k - 1] probes order[k]
  JoinTree tree;                // source join tree, rooted at order[0]
};

/// Plan for a monotone `order` of `t`. Throws ContractError for non-monotone orders.
Plan make_plan(const Query& q, const JoinTree& t, JoinOrder order, PlanShape shape);

/// Throws ContractError unless `p` is derived from a join tree of `q`.
void validate_plan(const Plan& p, const Query& q);

/// Baseline pipelined hash join.
Relation hash_join_plan(const Plan& p, const Query& q, std::span<const Relation> atoms, OpStats& stats);
Relation hash_join_plan(const Plan& p, const Query& q, const Database& db, OpStats& stats);

struct TtjDeletion {
  std::size_t atom = 0;
  Tuple tuple;
};

/// TreeTracker join over a left-deep plan. A failed lookup deletes the tuple of the atom that
/// supplied the key and resumes at that atom's iterator.
Relation ttj(const Plan& p, const Query& q, std::span<const Relation> atoms, OpStats& stats,
             std::vector<TtjDeletion>* deletions = nullptr);
Relation ttj(const Plan& p, const Query& q, const Database& db, OpStats& stats,
             std::vector<TtjDeletion>* deletions = nullptr);

/// A relation whose surviving tuples each point at one non-empty block of matches per child slot.
class NestedRelation {
 public:
  using Block = std::vector<std::uint32_t>;  // row ids into the child's base relation

  struct Slot {
    std::shared_ptr<const NestedRelation> child;
    std::vector<std::string> keys;
  };

  explicit NestedRelation(Relation base);

  const Relation& base() const noexcept { return base_; }
  /// Row ids of surviving tuples.
  std::span<const std::uint32_t> kept() const noexcept { return kept_; }
  std::size_t size() const noexcept { return kept_.size(); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  /// Match block of surviving tuple `k` (position in kept()) for slot `s`.
  const Block* match(std::size_t k, std::size_t s) const { return refs_[k][s]; }

  /// Hash table over the surviving tuples, keyed on `keys`. Counts one insert per tuple.
  void build_index(std::vector<std::string> keys, OpStats& stats);
  bool has_index() const noexcept { return indexed_; }
  const std::vector<std::string>& index_keys() const noexcept { return index_keys_; }
  /// Block for `key`, or nullptr.
  const Block* lookup(const Tuple& key) const;

  friend NestedRelation nested_semijoin(NestedRelation parent, std::shared_ptr<const NestedRelation> child,
                                        OpStats& stats);

 private:
  Relation base_;
  std::vector<std::uint32_t> kept_;
  std::vector<Slot> slots_;
  std::vector<std::vector<const Block*>> refs_;
  bool indexed_ = false;
  std::vector<std::string> index_keys_;
  std::unordered_map<Tuple, Block, TupleHash> index_;
};

/// Probes `child`'s hash table (built on the shared variables) for every surviving parent tuple;
/// tuples with matches keep a pointer to their block, the rest are dropped. If `parent` is itself
/// indexed its table loses the dropped entries.
NestedRelation nested_semijoin(NestedRelation parent, std::shared_ptr<const NestedRelation> child,
                               OpStats& stats);

/// Expands every surviving tuple with all combinations of its match blocks, recursively.
/// Counts exactly one materialized tuple per output tuple.
Relation unnest(const NestedRelation& n, OpStats& stats);

/// Nested semijoins leaves-to-root along `t` (hash tables built on the full non-root atoms),
/// then the nesting tree rooted at t.root().
std::shared_ptr<const NestedRelation> nest_bottom_up(const Query& q, std::span<const Relation> atoms,
                                                     const JoinTree& t, OpStats& stats);

Relation nested_ya(const Query& q, std::span<const Relation> atoms, const JoinTree& t, OpStats& stats);
Relation nested_ya(const Query& q, const Database& db, const JoinTree& t, OpStats& stats);

}  // namespace ajl
