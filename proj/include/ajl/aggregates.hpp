#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ajl/algebra.hpp"
#include "ajl/errors.hpp"
#include "ajl/join_tree.hpp"
#include "ajl/op_stats.hpp"
#include "ajl/query.hpp"
#include "ajl/semiring.hpp"

namespace ajl {

/// How each tuple's initial annotation is chosen: the semiring one, or a lifted integer attribute.
struct AnnotationRule {
  std::optional<std::string> lift;

  static AnnotationRule constant_one() { return {}; }
  static AnnotationRule lift_attribute(std::string attr) { return AnnotationRule{std::move(attr)}; }
};

template <Semiring S>
struct AnnotatedRelation {
  Relation relation;
  std::vector<typename S::value_type> annotations;

  std::size_t size() const noexcept { return relation.size(); }

  /// Row (in `columns` order) -> annotation.
  std::map<Tuple, typename S::value_type> as_map(std::span<const std::string> columns) const {
    auto pos = relation.schema().positions(columns);
    std::map<Tuple, typename S::value_type> out;
    for (std::size_t i = 0; i < relation.size(); ++i) out.emplace(key_of(relation[i], pos), annotations[i]);
    return out;
  }
  std::map<Tuple, typename S::value_type> as_map() const { return as_map(relation.schema().names()); }
};

template <Semiring S>
AnnotatedRelation<S> annotate(const Relation& rel, const AnnotationRule& rule) {
  AnnotatedRelation<S> out{rel, {}};
  out.annotations.reserve(rel.size());
  if (!rule.lift) {
    out.annotations.assign(rel.size(), S::one());
    return out;
  }
  const auto c = rel.schema().index_of(*rule.lift);
  for (const auto& t : rel) {
    const auto* v = std::get_if<std::int64_t>(&t[c]);
    if (!v) throw SchemaError("attribute '" + *rule.lift + "' holds a non-integer value");
    out.annotations.push_back(S::lift(*v));
  }
  return out;
}

/// Groups `in` on `attrs` (in that order), combining annotations with plus.
template <Semiring S>
AnnotatedRelation<S> aggregate_onto(const AnnotatedRelation<S>& in, std::span<const std::string> attrs,
                                    OpStats& stats) {
  auto pos = in.relation.schema().positions(attrs);
  std::unordered_map<Tuple, std::size_t, TupleHash> group;
  std::vector<Tuple> rows;
  std::vector<typename S::value_type> ann;
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto key = key_of(in.relation[i], pos);
    auto [it, fresh] = group.try_emplace(key, rows.size());
    if (fresh) {
      rows.push_back(std::move(key));
      ann.push_back(in.annotations[i]);
    } else {
      ann[it->second] = S::plus(ann[it->second], in.annotations[i]);
    }
  }
  stats.hash_build_inserts += in.size();
  return AnnotatedRelation<S>{
      Relation::from_unique(Schema(std::vector<std::string>(attrs.begin(), attrs.end())), std::move(rows)),
      std::move(ann)};
}

/// Multiplies each parent tuple by its matching child annotations. When the child brings no new
/// attributes this is an annotated semijoin; otherwise it is a join and its output is counted as
/// materialized.
template <Semiring S>
AnnotatedRelation<S> absorb_child(const AnnotatedRelation<S>& parent, const AnnotatedRelation<S>& child,
                                  OpStats& stats) {
  const auto& ps = parent.relation.schema();
  const auto& cs = child.relation.schema();
  auto shared = shared_attributes(ps, cs);
  auto ppos = ps.positions(shared);
  auto index = build_index(child.relation, cs.positions(shared), &stats);

  std::vector<std::string> names = ps.names();
  std::vector<std::size_t> extra;
  for (std::size_t i = 0; i < cs.arity(); ++i) {
    if (!ps.contains(cs[i])) {
      names.push_back(cs[i]);
      extra.push_back(i);
    }
  }

  std::vector<Tuple> rows;
  std::vector<typename S::value_type> ann;
  std::uint64_t misses = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    ++stats.hash_probes;
    auto it = index.find(key_of(parent.relation[i], ppos));
    if (it == index.end()) {
      ++misses;
      continue;
    }
    if (extra.empty()) {
      // Grouped on the shared attributes, so at most one match.
      rows.push_back(parent.relation[i]);
      ann.push_back(S::times(parent.annotations[i], child.annotations[it->second.front()]));
      continue;
    }
    for (auto r : it->second) {
      Tuple t = parent.relation[i];
      for (auto e : extra) t.push_back(child.relation[r][e]);
      rows.push_back(std::move(t));
      ann.push_back(S::times(parent.annotations[i], child.annotations[r]));
      ++stats.tuples_materialized;
    }
  }
  stats.probe_misses += misses;
  stats.semijoin_drops += misses;
  ++stats.semijoin_ops;
  return AnnotatedRelation<S>{Relation::from_unique(Schema(std::move(names)), std::move(rows)), std::move(ann)};
}

namespace detail {

inline void check_groupby(const Query& q, std::span<const std::string> groupby) {
  for (const auto& g : groupby) {
    if (!q.in_head(g)) throw ContractError("group-by variable '" + g + "' is not a head variable");
  }
}

/// Annotation rule per atom: the lowest-index atom containing the lifted variable carries it.
inline std::vector<AnnotationRule> atom_rules(const Query& q, const AnnotationRule& rule) {
  std::vector<AnnotationRule> rules(q.size());
  if (!rule.lift) return rules;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& vs = q.atom(i).vars;
    if (std::find(vs.begin(), vs.end(), *rule.lift) != vs.end()) {
      rules[i] = rule;
      return rules;
    }
  }
  throw SchemaError("aggregate attribute '" + *rule.lift + "' does not occur in the query");
}

template <Semiring S>
AnnotatedRelation<S> aggregate_bottom_up(const Query& q, std::span<const Relation> atoms, const JoinTree& t,
                                         std::span<const std::string> groupby, const AnnotationRule& rule,
                                         OpStats& stats) {
  validate_join_tree(t, q);
  if (atoms.size() != q.size()) throw ContractError("atom relation count does not match the query");
  auto rules = atom_rules(q, rule);
  std::vector<AnnotatedRelation<S>> cur;
  cur.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) cur.push_back(annotate<S>(atoms[i], rules[i]));

  for (auto x : t.post_order()) {
    for (auto c : t.children(x)) {
      std::vector<std::string> keep;
      for (const auto& a : cur[c].relation.schema().names()) {
        const bool in_parent = cur[x].relation.schema().contains(a);
        const bool grouped = std::find(groupby.begin(), groupby.end(), a) != groupby.end();
        if (in_parent || grouped) keep.push_back(a);
      }
      auto agg = aggregate_onto<S>(cur[c], keep, stats);
      cur[x] = absorb_child<S>(cur[x], agg, stats);
    }
  }
  return aggregate_onto<S>(cur[t.root()], groupby, stats);
}

}  // namespace detail

/// Two-phase aggregation: one annotation-carrying bottom-up pass along `t`, then a group-by on
/// `groupby` at the root. Children are summed onto the variables they share with their parent plus
/// any group-by variables they hold.
template <Semiring S>
AnnotatedRelation<S> ya_aggregate(const Query& q, std::span<const Relation> atoms, const JoinTree& t,
                                  std::span<const std::string> groupby, OpStats& stats,
                                  const AnnotationRule& rule = {}) {
  detail::check_groupby(q, groupby);
  return detail::aggregate_bottom_up<S>(q, atoms, t, groupby, rule, stats);
}

template <Semiring S>
AnnotatedRelation<S> ya_aggregate(const Query& q, const Database& db, const JoinTree& t,
                                  std::span<const std::string> groupby, OpStats& stats,
                                  const AnnotationRule& rule = {}) {
  return ya_aggregate<S>(q, bind_atoms(q, db), t, groupby, stats, rule);
}

/// Lowest-index atom whose variables contain every group-by variable.
inline std::optional<std::size_t> dominating_atom(const Query& q, std::span<const std::string> groupby) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& vs = q.atom(i).vars;
    const bool all = std::all_of(groupby.begin(), groupby.end(),
                                 [&](const std::string& g) { return std::find(vs.begin(), vs.end(), g) != vs.end(); });
    if (all) return i;
  }
  return std::nullopt;
}

/// Relation-dominated aggregation: rooted at the dominating atom, the bottom-up pass alone yields
/// the answer and no join is materialized. Throws NotZeroMaError when no atom dominates.
template <Semiring S>
AnnotatedRelation<S> zero_ma_aggregate(const Query& q, std::span<const Relation> atoms, const JoinTree& t,
                                       std::span<const std::string> groupby, OpStats& stats,
                                       const AnnotationRule& rule = {}) {
  detail::check_groupby(q, groupby);
  auto dom = dominating_atom(q, groupby);
  if (!dom) {
    throw NotZeroMaError("group-by variables are not contained in a single atom; use ya_aggregate instead");
  }
  validate_join_tree(t, q);
  return detail::aggregate_bottom_up<S>(q, atoms, t.rerooted(*dom), groupby, rule, stats);
}

template <Semiring S>
AnnotatedRelation<S> zero_ma_aggregate(const Query& q, const Database& db, const JoinTree& t,
                                       std::span<const std::string> groupby, OpStats& stats,
                                       const AnnotationRule& rule = {}) {
  return zero_ma_aggregate<S>(q, bind_atoms(q, db), t, groupby, stats, rule);
}

/// Reference aggregate: group-by over the full oracle join, one annotation product per join tuple.
template <Semiring S>
AnnotatedRelation<S> oracle_aggregate(const Query& q, std::span<const Relation> atoms,
                                      std::span<const std::string> groupby, const AnnotationRule& rule = {}) {
  detail::check_groupby(q, groupby);
  auto full = oracle_join(q.full(), atoms);
  if (rule.lift && !full.schema().contains(*rule.lift)) {
    throw SchemaError("aggregate attribute '" + *rule.lift + "' does not occur in the query");
  }
  auto annotated = annotate<S>(full, rule);
  OpStats scratch;
  return aggregate_onto<S>(annotated, groupby, scratch);
}

}  // namespace ajl
