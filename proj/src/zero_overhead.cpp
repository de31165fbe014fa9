#include "ajl/zero_overhead.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

#include "ajl/algebra.hpp"
#include "ajl/errors.hpp"

namespace ajl {

Plan make_plan(const Query& q, const JoinTree& t, JoinOrder order, PlanShape shape) {
  validate_join_tree(t, q);
  if (!is_monotone_order(t, order)) throw ContractError("plan order is not monotone for the join tree");
  Plan p;
  p.shape = shape;
  p.tree = t.rerooted(order.front());
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto parent = static_cast<std::size_t>(p.tree.parent(order[k]));
    const auto level = static_cast<std::size_t>(std::find(order.begin(), order.end(), parent) - order.begin());
    p.steps.push_back(PlanStep{order[k], level, shared_vars(q.atom(order[k]), q.atom(parent))});
  }
  p.order = std::move(order);
  return p;
}

void validate_plan(const Plan& p, const Query& q) {
  validate_join_tree(p.tree, q);
  if (p.order.empty() || p.tree.root() != p.order.front()) {
    throw ContractError("plan is not derived from a join tree rooted at its scan atom");
  }
  if (!is_monotone_order(p.tree, p.order)) throw ContractError("plan order is not monotone for its join tree");
  if (p.steps.size() + 1 != p.order.size()) throw ContractError("plan has the wrong number of steps");
  for (std::size_t k = 1; k < p.order.size(); ++k) {
    const auto& step = p.steps[k - 1];
    const auto parent = p.tree.parent(p.order[k]);
    if (step.atom != p.order[k] || step.key_level >= k || static_cast<int>(p.order[step.key_level]) != parent ||
        step.keys != shared_vars(q.atom(p.order[k]), q.atom(static_cast<std::size_t>(parent)))) {
      throw ContractError("plan step " + std::to_string(k) + " does not follow its join tree");
    }
  }
}

namespace {

// Hash table over one build-side atom with per-row liveness, so TreeTracker can delete rows
// while iterators are open on their buckets.
struct BuildTable {
  std::vector<std::size_t> build_pos;
  std::vector<std::size_t> probe_pos;
  std::unordered_map<Tuple, std::uint32_t, TupleHash> bucket_of_key;
  std::vector<std::vector<std::uint32_t>> buckets;
  std::vector<std::uint32_t> live;
  std::vector<char> alive;

  std::int64_t find(const Tuple& key) const {
    auto it = bucket_of_key.find(key);
    return it == bucket_of_key.end() ? -1 : static_cast<std::int64_t>(it->second);
  }
};

class Pipeline {
 public:
  Pipeline(const Plan& p, const Query& q, std::span<const Relation> atoms, OpStats& stats)
      : plan_(p), query_(q), stats_(stats) {
    validate_plan(p, q);
    if (atoms.size() != q.size()) throw ContractError("atom relation count does not match the query");
    const auto n = p.order.size();
    for (auto a : p.order) rels_.push_back(&atoms[a]);
    tables_.resize(n);

    std::vector<std::size_t> build_levels(n - 1);
    for (std::size_t k = 1; k < n; ++k) build_levels[k - 1] = k;
    // Right-deep plans complete the build phase leaves-first.
    if (p.shape == PlanShape::right_deep) std::reverse(build_levels.begin(), build_levels.end());
    for (auto k : build_levels) build(k);
    scan_alive_.assign(rels_[0]->size(), 1);

    for (const auto& h : q.head()) {
      for (std::size_t k = 0; k < n; ++k) {
        if (auto c = rels_[k]->schema().find(h)) {
          head_src_.emplace_back(k, *c);
          break;
        }
      }
    }
  }

  Relation run(bool tree_tracker, std::vector<TtjDeletion>* log) {
    const auto n = plan_.order.size();
    std::vector<std::int64_t> cur(n, -1);
    std::vector<std::int64_t> bucket(n, -1);
    std::vector<std::int64_t> pos(n, -1);
    std::unordered_set<Tuple, TupleHash> out;

    std::size_t level = 0;
    bool descend = false;
    while (true) {
      if (!descend) {
        // Move this level's iterator to its next live row.
        if (level == 0) {
          do {
            ++pos[0];
          } while (pos[0] < static_cast<std::int64_t>(rels_[0]->size()) && !scan_alive_[pos[0]]);
          if (pos[0] >= static_cast<std::int64_t>(rels_[0]->size())) break;
          cur[0] = pos[0];
        } else {
          const auto& tab = tables_[level];
          const auto& rows = tab.buckets[bucket[level]];
          do {
            ++pos[level];
          } while (pos[level] < static_cast<std::int64_t>(rows.size()) && !tab.alive[rows[pos[level]]]);
          if (pos[level] >= static_cast<std::int64_t>(rows.size())) {
            --level;
            continue;
          }
          cur[level] = rows[pos[level]];
          ++stats_.tuples_materialized;
        }
        if (level + 1 == n) {
          emit(cur, out);
          continue;
        }
        ++level;
        descend = true;
        continue;
      }

      // Probe the hash table of this level with the key from its tree parent.
      descend = false;
      const auto& step = plan_.steps[level - 1];
      auto& tab = tables_[level];
      const auto key = key_of((*rels_[step.key_level])[cur[step.key_level]], tab.probe_pos);
      ++stats_.hash_probes;
      const auto b = tab.find(key);
      if (b >= 0 && tab.live[b] > 0) {
        bucket[level] = b;
        pos[level] = -1;
        continue;
      }
      ++stats_.probe_misses;
      if (!tree_tracker) {
        --level;
        continue;
      }
      // The row that supplied the failing key is dangling: delete it and resume at its level.
      auto guilty = step.key_level;
      while (true) {
        remove_current(guilty, cur, bucket, log);
        if (guilty > 0 && tables_[guilty].live[bucket[guilty]] == 0) {
          // Its bucket is now empty, so the lookup that led here fails too.
          guilty = plan_.steps[guilty - 1].key_level;
          continue;
        }
        break;
      }
      level = guilty;
    }

    stats_.output_tuples += out.size();
    return Relation::from_unique(Schema(query_.head()), std::vector<Tuple>(out.begin(), out.end()));
  }

 private:
  void build(std::size_t k) {
    const auto& step = plan_.steps[k - 1];
    auto& tab = tables_[k];
    tab.build_pos = rels_[k]->schema().positions(step.keys);
    tab.probe_pos = rels_[step.key_level]->schema().positions(step.keys);
    tab.alive.assign(rels_[k]->size(), 1);
    for (std::uint32_t r = 0; r < rels_[k]->size(); ++r) {
      auto key = key_of((*rels_[k])[r], tab.build_pos);
      auto [it, fresh] = tab.bucket_of_key.try_emplace(std::move(key), static_cast<std::uint32_t>(tab.buckets.size()));
      if (fresh) {
        tab.buckets.emplace_back();
        tab.live.push_back(0);
      }
      tab.buckets[it->second].push_back(r);
      ++tab.live[it->second];
    }
    stats_.hash_build_inserts += rels_[k]->size();
  }

  void remove_current(std::size_t level, const std::vector<std::int64_t>& cur,
                      const std::vector<std::int64_t>& bucket, std::vector<TtjDeletion>* log) {
    if (level == 0) {
      scan_alive_[cur[0]] = 0;
    } else {
      tables_[level].alive[cur[level]] = 0;
      --tables_[level].live[bucket[level]];
    }
    ++stats_.ttj_deletions;
    if (log) log->push_back(TtjDeletion{plan_.order[level], (*rels_[level])[cur[level]]});
  }

  void emit(const std::vector<std::int64_t>& cur, std::unordered_set<Tuple, TupleHash>& out) const {
    Tuple row;
    row.reserve(head_src_.size());
    for (auto [k, c] : head_src_) row.push_back((*rels_[k])[cur[k]][c]);
    out.insert(std::move(row));
  }

  const Plan& plan_;
  const Query& query_;
  OpStats& stats_;
  std::vector<const Relation*> rels_;
  std::vector<BuildTable> tables_;
  std::vector<char> scan_alive_;
  std::vector<std::pair<std::size_t, std::size_t>> head_src_;
};

}  // namespace

Relation hash_join_plan(const Plan& p, const Query& q, std::span<const Relation> atoms, OpStats& stats) {
  return Pipeline(p, q, atoms, stats).run(false, nullptr);
}

Relation hash_join_plan(const Plan& p, const Query& q, const Database& db, OpStats& stats) {
  return hash_join_plan(p, q, bind_atoms(q, db), stats);
}

Relation ttj(const Plan& p, const Query& q, std::span<const Relation> atoms, OpStats& stats,
             std::vector<TtjDeletion>* deletions) {
  if (p.shape != PlanShape::left_deep) throw ContractError("TreeTracker join requires a left-deep plan");
  return Pipeline(p, q, atoms, stats).run(true, deletions);
}

Relation ttj(const Plan& p, const Query& q, const Database& db, OpStats& stats, std::vector<TtjDeletion>* deletions) {
  return ttj(p, q, bind_atoms(q, db), stats, deletions);
}

// ---------------------------------------------------------------------------------------------
// Nested semijoin

NestedRelation::NestedRelation(Relation base) : base_(std::move(base)) {
  kept_.resize(base_.size());
  for (std::uint32_t i = 0; i < kept_.size(); ++i) kept_[i] = i;
  refs_.assign(kept_.size(), {});
}

void NestedRelation::build_index(std::vector<std::string> keys, OpStats& stats) {
  auto pos = base_.schema().positions(keys);
  index_.clear();
  for (auto row : kept_) index_[key_of(base_[row], pos)].push_back(row);
  stats.hash_build_inserts += kept_.size();
  index_keys_ = std::move(keys);
  indexed_ = true;
}

const NestedRelation::Block* NestedRelation::lookup(const Tuple& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &it->second;
}

NestedRelation nested_semijoin(NestedRelation parent, std::shared_ptr<const NestedRelation> child, OpStats& stats) {
  auto shared = shared_attributes(parent.base_.schema(), child->base_.schema());
  if (!child->indexed_) throw ContractError("nested semijoin needs the child's hash table");
  {
    auto a = shared;
    auto b = child->index_keys_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ContractError("child hash table is not keyed on the shared attributes");
  }
  const auto probe_pos = parent.base_.schema().positions(child->index_keys_);

  std::vector<std::uint32_t> kept;
  std::vector<std::vector<const NestedRelation::Block*>> refs;
  kept.reserve(parent.kept_.size());
  refs.reserve(parent.kept_.size());
  std::uint64_t dropped = 0;
  for (std::size_t k = 0; k < parent.kept_.size(); ++k) {
    const auto row = parent.kept_[k];
    ++stats.hash_probes;
    const auto* block = child->lookup(key_of(parent.base_[row], probe_pos));
    if (!block) {
      ++dropped;
      continue;
    }
    kept.push_back(row);
    refs.push_back(std::move(parent.refs_[k]));
    refs.back().push_back(block);
  }
  stats.probe_misses += dropped;
  stats.semijoin_drops += dropped;
  ++stats.semijoin_ops;

  if (parent.indexed_ && dropped > 0) {
    std::vector<char> survives(parent.base_.size(), 0);
    for (auto row : kept) survives[row] = 1;
    for (auto it = parent.index_.begin(); it != parent.index_.end();) {
      auto& block = it->second;
      std::erase_if(block, [&](std::uint32_t r) { return !survives[r]; });
      it = block.empty() ? parent.index_.erase(it) : std::next(it);
    }
  }
  parent.kept_ = std::move(kept);
  parent.refs_ = std::move(refs);
  parent.slots_.push_back(NestedRelation::Slot{std::move(child), std::move(shared)});
  return parent;
}

namespace {

struct Unnester {
  std::vector<std::string> columns;
  std::map<const NestedRelation*, std::vector<std::int64_t>> column_map;  // -1: already bound
  std::map<const NestedRelation*, std::vector<std::int64_t>> kept_pos;
  std::vector<Tuple> out;

  void plan(const NestedRelation& n) {
    std::vector<std::int64_t> map;
    for (const auto& a : n.base().schema().names()) {
      if (std::find(columns.begin(), columns.end(), a) == columns.end()) {
        map.push_back(static_cast<std::int64_t>(columns.size()));
        columns.push_back(a);
      } else {
        map.push_back(-1);
      }
    }
    column_map[&n] = std::move(map);
    std::vector<std::int64_t> kp(n.base().size(), -1);
    for (std::size_t k = 0; k < n.kept().size(); ++k) kp[n.kept()[k]] = static_cast<std::int64_t>(k);
    kept_pos[&n] = std::move(kp);
    for (const auto& s : n.slots()) {
      if (!s.child) throw InternalError("nested relation has an empty child slot");
      plan(*s.child);
    }
  }

  struct Pending {
    const NestedRelation* node;
    const NestedRelation::Block* block;
  };

  void write(const NestedRelation& n, std::uint32_t row, Tuple& t) {
    const auto& map = column_map.at(&n);
    for (std::size_t c = 0; c < map.size(); ++c) {
      if (map[c] >= 0) t[static_cast<std::size_t>(map[c])] = n.base()[row][c];
    }
  }

  std::size_t push_children(const NestedRelation& n, std::size_t k, std::vector<Pending>& pending) {
    for (std::size_t s = 0; s < n.slots().size(); ++s) {
      const auto* block = n.match(k, s);
      if (!block || block->empty()) throw InternalError("dangling match reference during unnest");
      pending.push_back(Pending{n.slots()[s].child.get(), block});
    }
    return n.slots().size();
  }

  void expand(std::vector<Pending>& pending, Tuple& t) {
    if (pending.empty()) {
      out.push_back(t);
      return;
    }
    const auto item = pending.back();
    pending.pop_back();
    const auto& kp = kept_pos.at(item.node);
    for (auto row : *item.block) {
      if (row >= kp.size() || kp[row] < 0) throw InternalError("match block references a dropped tuple");
      write(*item.node, row, t);
      const auto added = push_children(*item.node, static_cast<std::size_t>(kp[row]), pending);
      expand(pending, t);
      pending.resize(pending.size() - added);
    }
    pending.push_back(item);
  }
};

}  // namespace

Relation unnest(const NestedRelation& n, OpStats& stats) {
  Unnester u;
  u.plan(n);
  Tuple t(u.columns.size());
  std::vector<Unnester::Pending> pending;
  for (std::size_t k = 0; k < n.kept().size(); ++k) {
    u.write(n, n.kept()[k], t);
    u.push_children(n, k, pending);
    u.expand(pending, t);
    pending.clear();
  }
  stats.tuples_materialized += u.out.size();
  return Relation::from_unique(Schema(u.columns), std::move(u.out));
}

std::shared_ptr<const NestedRelation> nest_bottom_up(const Query& q, std::span<const Relation> atoms,
                                                     const JoinTree& t, OpStats& stats) {
  validate_join_tree(t, q);
  if (atoms.size() != q.size()) throw ContractError("atom relation count does not match the query");
  std::vector<std::shared_ptr<const NestedRelation>> nodes(q.size());
  for (auto x : t.post_order()) {
    NestedRelation nx(atoms[x]);
    if (t.parent(x) >= 0) {
      nx.build_index(shared_vars(q.atom(x), q.atom(static_cast<std::size_t>(t.parent(x)))), stats);
    }
    for (auto c : t.children(x)) nx = nested_semijoin(std::move(nx), nodes[c], stats);
    nodes[x] = std::make_shared<const NestedRelation>(std::move(nx));
  }
  return nodes[t.root()];
}

Relation nested_ya(const Query& q, std::span<const Relation> atoms, const JoinTree& t, OpStats& stats) {
  auto root = nest_bottom_up(q, atoms, t, stats);
  auto out = project(unnest(*root, stats), q.head());
  stats.output_tuples += out.size();
  return out;
}

Relation nested_ya(const Query& q, const Database& db, const JoinTree& t, OpStats& stats) {
  return nested_ya(q, bind_atoms(q, db), t, stats);
}

}  // namespace ajl
