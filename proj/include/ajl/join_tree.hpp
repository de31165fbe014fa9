#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ajl/query.hpp"

namespace ajl {

/// Vertices are query variables; edge i is the variable set of atom i.
struct Hypergraph {
  std::vector<std::string> vertices;
  std::vector<std::vector<std::size_t>> edges;

  static Hypergraph of(const Query& q);
};

/// Outcome of a GYO reduction. `links` are the (removed edge, containing edge) pairs; they form
/// a join forest. On failure `residue` holds the vertex sets of the edges that remained.
struct GyoResult {
  bool acyclic = false;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> residue_edges;
  std::vector<std::vector<std::size_t>> residue;
};

GyoResult gyo_reduce(const Hypergraph& h);
bool is_acyclic(const Hypergraph& h);

/// Rooted tree over atom indices. `parent[root] == -1`.
class JoinTree {
 public:
  JoinTree() = default;
  /// Throws ContractError unless `parent` describes a single tree rooted at `root`.
  JoinTree(std::size_t root, std::vector<int> parent);

  static JoinTree from_edges(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                             std::size_t root);

  std::size_t root() const noexcept { return root_; }
  std::size_t size() const noexcept { return parent_.size(); }
  int parent(std::size_t node) const { return parent_[node]; }
  const std::vector<int>& parents() const noexcept { return parent_; }
  const std::vector<std::size_t>& children(std::size_t node) const { return children_[node]; }
  std::vector<std::size_t> neighbors(std::size_t node) const;
  bool adjacent(std::size_t a, std::size_t b) const;

  std::vector<std::size_t> pre_order() const;
  std::vector<std::size_t> post_order() const;
  std::vector<std::size_t> bfs_order() const;
  /// Undirected (parent, child) edges.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  JoinTree rerooted(std::size_t new_root) const;

  friend bool operator==(const JoinTree& a, const JoinTree& b) {
    return a.root_ == b.root_ && a.parent_ == b.parent_;
  }
  /// Serialization order: root first, then the parent array.
  friend auto operator<=>(const JoinTree& a, const JoinTree& b) {
    if (auto c = a.root_ <=> b.root_; c != 0) return c;
    return a.parent_ <=> b.parent_;
  }

 private:
  std::size_t root_ = 0;
  std::vector<int> parent_;
  std::vector<std::vector<std::size_t>> children_;
};

using JoinOrder = std::vector<std::size_t>;

/// For every variable, the atoms containing it induce a connected subtree.
bool satisfies_connectedness(const JoinTree& t, const Query& q);
/// Throws ContractError if `t` is not a join tree of `q`.
void validate_join_tree(const JoinTree& t, const Query& q);

/// GYO-derived join tree rooted at atom 0. Throws AcyclicityError with the residue.
JoinTree build_join_tree(const Query& q);

inline constexpr std::size_t kDefaultEnumerationBound = 8;

/// Every rooted join tree of `q`, ordered by (root, parent array). Empty for cyclic queries.
std::vector<JoinTree> enumerate_join_trees(const Query& q, std::size_t max_atoms = kDefaultEnumerationBound);

/// Every prefix of `o` is connected in `t`. Throws ContractError if `o` is not a permutation.
bool is_monotone_order(const JoinTree& t, const JoinOrder& o);
/// All monotone orders of `t`, lexicographically.
std::vector<JoinOrder> monotone_orders(const JoinTree& t);

}  // namespace ajl
