#pragma once

#include <span>
#include <vector>

#include "ajl/algebra.hpp"
#include "ajl/join_tree.hpp"
#include "ajl/op_stats.hpp"
#include "ajl/query.hpp"

namespace ajl {

/// Leaves upward: every node is replaced by its semijoin with each child.
std::vector<Relation> bottom_up_pass(const JoinTree& t, std::vector<Relation> atoms, OpStats& stats);
/// Root downward: every child is replaced by its semijoin with its parent.
std::vector<Relation> top_down_pass(const JoinTree& t, std::vector<Relation> atoms, OpStats& stats);

/// Both semijoin passes; every surviving tuple participates in some output tuple.
std::vector<Relation> full_reduce(const Query& q, std::span<const Relation> atoms, const JoinTree& t,
                                  OpStats& stats);

/// Final pass of the three-pass algorithm: joins subtrees leaves-first, projecting each subtree
/// result onto the head variables plus the variables its parent still needs.
Relation join_along_tree(const Query& q, const JoinTree& t, std::span<const Relation> reduced, OpStats& stats);

/// Joins in order `o`, keeping head variables and variables of atoms not joined yet.
Relation join_in_order(const Query& q, const JoinOrder& o, std::span<const Relation> reduced, OpStats& stats);

Relation ya_classic(const Query& q, std::span<const Relation> atoms, const JoinTree& t, OpStats& stats);
Relation ya_classic(const Query& q, const Database& db, const JoinTree& t, OpStats& stats);

/// Bottom-up pass only, then joins along `o`. `o` must be monotone and start at the root.
Relation ya_two_phase(const Query& q, std::span<const Relation> atoms, const JoinTree& t, const JoinOrder& o,
                      OpStats& stats);
Relation ya_two_phase(const Query& q, const Database& db, const JoinTree& t, const JoinOrder& o, OpStats& stats);

/// Cardinality of every atom after the bottom-up pass on `t`.
std::vector<std::size_t> measure_reduced_sizes(const JoinTree& t, std::span<const Relation> atoms);
std::vector<std::size_t> measure_reduced_sizes(const JoinTree& t, const Query& q, const Database& db);

struct YaPlusChoice {
  JoinTree tree;
  JoinOrder order;
  std::size_t total_reduced_size = 0;
};

/// Enumerates every join tree and keeps the one with the smallest total size after its
/// bottom-up pass (first in serialization order on ties). The order is the tree's BFS order.
YaPlusChoice ya_plus_select(const Query& q, std::span<const Relation> atoms,
                            std::size_t max_atoms = kDefaultEnumerationBound);
YaPlusChoice ya_plus_select(const Query& q, const Database& db, std::size_t max_atoms = kDefaultEnumerationBound);

}  // namespace ajl
