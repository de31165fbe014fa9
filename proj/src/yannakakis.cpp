#include "ajl/yannakakis.hpp"

#include <algorithm>
#include <limits>

#include "ajl/errors.hpp"

namespace ajl {

namespace {

void check_atoms(const Query& q, std::span<const Relation> atoms) {
  if (atoms.size() != q.size()) throw ContractError("atom relation count does not match the query");
}

// Attributes of `rel` that are in the head or in `needed`, in `rel` order.
std::vector<std::string> keep_columns(const Query& q, const Relation& rel, const std::vector<std::string>& needed) {
  std::vector<std::string> keep;
  for (const auto& a : rel.schema().names()) {
    if (q.in_head(a) || std::find(needed.begin(), needed.end(), a) != needed.end()) keep.push_back(a);
  }
  return keep;
}

Relation project_if_narrower(const Relation& rel, const std::vector<std::string>& keep) {
  if (keep.size() == rel.schema().arity()) return rel;
  return project(rel, keep);
}

}  // namespace

std::vector<Relation> bottom_up_pass(const JoinTree& t, std::vector<Relation> atoms, OpStats& stats) {
  for (auto node : t.post_order()) {
    for (auto child : t.children(node)) atoms[node] = semijoin(atoms[node], atoms[child], &stats);
  }
  return atoms;
}

std::vector<Relation> top_down_pass(const JoinTree& t, std::vector<Relation> atoms, OpStats& stats) {
  for (auto node : t.pre_order()) {
    for (auto child : t.children(node)) atoms[child] = semijoin(atoms[child], atoms[node], &stats);
  }
  return atoms;
}

std::vector<Relation> full_reduce(const Query& q, std::span<const Relation> atoms, const JoinTree& t,
                                  OpStats& stats) {
  check_atoms(q, atoms);
  validate_join_tree(t, q);
  auto reduced = bottom_up_pass(t, std::vector<Relation>(atoms.begin(), atoms.end()), stats);
  return top_down_pass(t, std::move(reduced), stats);
}

Relation join_along_tree(const Query& q, const JoinTree& t, std::span<const Relation> reduced, OpStats& stats) {
  std::vector<Relation> subtree(reduced.begin(), reduced.end());
  for (auto node : t.post_order()) {
    Relation acc = subtree[node];
    for (auto child : t.children(node)) acc = natural_join(acc, subtree[child], &stats);
    if (t.parent(node) >= 0) {
      const auto& parent_vars = q.atom(static_cast<std::size_t>(t.parent(node))).vars;
      subtree[node] = project_if_narrower(acc, keep_columns(q, acc, parent_vars));
    } else {
      subtree[node] = project(acc, q.head());
    }
  }
  return subtree[t.root()];
}

Relation join_in_order(const Query& q, const JoinOrder& o, std::span<const Relation> reduced, OpStats& stats) {
  Relation acc = reduced[o.front()];
  for (std::size_t k = 1; k <= o.size(); ++k) {
    if (k < o.size()) acc = natural_join(acc, reduced[o[k]], &stats);
    std::vector<std::string> later;
    for (std::size_t j = k + 1; j < o.size(); ++j) {
      for (const auto& v : q.atom(o[j]).vars) later.push_back(v);
    }
    acc = project_if_narrower(acc, keep_columns(q, acc, later));
  }
  return project(acc, q.head());
}

Relation ya_classic(const Query& q, std::span<const Relation> atoms, const JoinTree& t, OpStats& stats) {
  auto reduced = full_reduce(q, atoms, t, stats);
  auto out = join_along_tree(q, t, reduced, stats);
  stats.output_tuples += out.size();
  return out;
}

Relation ya_classic(const Query& q, const Database& db, const JoinTree& t, OpStats& stats) {
  return ya_classic(q, bind_atoms(q, db), t, stats);
}

Relation ya_two_phase(const Query& q, std::span<const Relation> atoms, const JoinTree& t, const JoinOrder& o,
                      OpStats& stats) {
  check_atoms(q, atoms);
  validate_join_tree(t, q);
  if (!is_monotone_order(t, o)) throw ContractError("join order is not monotone for the join tree");
  if (o.front() != t.root()) throw ContractError("two-phase join order must start at the join tree root");
  auto reduced = bottom_up_pass(t, std::vector<Relation>(atoms.begin(), atoms.end()), stats);
  auto out = join_in_order(q, o, reduced, stats);
  stats.output_tuples += out.size();
  return out;
}

Relation ya_two_phase(const Query& q, const Database& db, const JoinTree& t, const JoinOrder& o, OpStats& stats) {
  return ya_two_phase(q, bind_atoms(q, db), t, o, stats);
}

std::vector<std::size_t> measure_reduced_sizes(const JoinTree& t, std::span<const Relation> atoms) {
  OpStats scratch;
  auto reduced = bottom_up_pass(t, std::vector<Relation>(atoms.begin(), atoms.end()), scratch);
  std::vector<std::size_t> sizes;
  for (const auto& r : reduced) sizes.push_back(r.size());
  return sizes;
}

std::vector<std::size_t> measure_reduced_sizes(const JoinTree& t, const Query& q, const Database& db) {
  validate_join_tree(t, q);
  return measure_reduced_sizes(t, bind_atoms(q, db));
}

YaPlusChoice ya_plus_select(const Query& q, std::span<const Relation> atoms, std::size_t max_atoms) {
  check_atoms(q, atoms);
  auto trees = enumerate_join_trees(q, max_atoms);
  if (trees.empty()) {
    build_join_tree(q);  // throws with the GYO residue
    throw AcyclicityError("query is cyclic", {});
  }
  std::size_t best = 0;
  std::size_t best_total = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < trees.size(); ++i) {
    auto sizes = measure_reduced_sizes(trees[i], atoms);
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    if (total < best_total) {
      best_total = total;
      best = i;
    }
  }
  YaPlusChoice choice{trees[best], trees[best].bfs_order(), best_total};
  return choice;
}

YaPlusChoice ya_plus_select(const Query& q, const Database& db, std::size_t max_atoms) {
  return ya_plus_select(q, bind_atoms(q, db), max_atoms);
}

}  // namespace ajl
