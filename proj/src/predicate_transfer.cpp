#include "ajl/predicate_transfer.hpp"

#include <algorithm>
#include <limits>

#include "ajl/errors.hpp"
#include "ajl/zero_overhead.hpp"

namespace ajl {

TransferSchedule TransferSchedule::mirrored(std::vector<Transfer> forward) {
  TransferSchedule s;
  s.backward.reserve(forward.size());
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
    s.backward.push_back(Transfer{it->target, it->source, it->attributes});
  }
  s.forward = std::move(forward);
  return s;
}

TransferSchedule small_to_large_schedule(const Query& q, const JoinTree& t, std::span<const Relation> atoms) {
  std::vector<Transfer> forward;
  for (auto [a, b] : t.edges()) {
    auto shared = shared_vars(q.atom(a), q.atom(b));
    if (shared.empty()) continue;
    const bool a_first = atoms[a].size() < atoms[b].size() || (atoms[a].size() == atoms[b].size() && a < b);
    const auto src = a_first ? a : b;
    const auto dst = a_first ? b : a;
    forward.push_back(Transfer{src, dst, shared_vars(q.atom(src), q.atom(dst))});
  }
  std::stable_sort(forward.begin(), forward.end(), [&](const Transfer& x, const Transfer& y) {
    if (atoms[x.source].size() != atoms[y.source].size()) return atoms[x.source].size() < atoms[y.source].size();
    if (x.source != y.source) return x.source < y.source;
    return x.target < y.target;
  });
  return TransferSchedule::mirrored(std::move(forward));
}

TransferSchedule rooted_schedule(const Query& q, const JoinTree& rooted) {
  std::vector<Transfer> forward;
  for (auto node : rooted.post_order()) {
    if (rooted.parent(node) < 0) continue;
    const auto parent = static_cast<std::size_t>(rooted.parent(node));
    auto shared = shared_vars(q.atom(node), q.atom(parent));
    if (shared.empty()) continue;
    forward.push_back(Transfer{node, parent, std::move(shared)});
  }
  return TransferSchedule::mirrored(std::move(forward));
}

namespace {

void check_transfer(const Query& q, const Transfer& tr) {
  if (tr.source >= q.size() || tr.target >= q.size() || tr.source == tr.target) {
    throw ContractError("transfer references an invalid atom pair");
  }
  if (tr.attributes.empty()) throw ContractError("transfer has no shared attributes");
  const auto& s = q.atom(tr.source).vars;
  const auto& d = q.atom(tr.target).vars;
  for (const auto& a : tr.attributes) {
    if (std::find(s.begin(), s.end(), a) == s.end() || std::find(d.begin(), d.end(), a) == d.end()) {
      throw ContractError("transfer " + q.atom(tr.source).relation + " -> " + q.atom(tr.target).relation +
                          " uses attribute '" + a + "' not shared by both atoms");
    }
  }
}

}  // namespace

std::vector<Relation> predicate_transfer(const Query& q, std::span<const Relation> atoms,
                                         const TransferSchedule& schedule, const BloomParams& params,
                                         OpStats& stats) {
  if (atoms.size() != q.size()) throw ContractError("atom relation count does not match the query");
  for (const auto& tr : schedule.forward) check_transfer(q, tr);
  for (const auto& tr : schedule.backward) check_transfer(q, tr);

  std::vector<Relation> current(atoms.begin(), atoms.end());
  std::uint64_t step = 0;
  auto apply = [&](const Transfer& tr) {
    const auto& src = current[tr.source];
    const auto bits = BloomFilter::bits_for(src.size(), params.bits_per_key);
    auto filter = bloom_build(src, tr.attributes, bits, params.hashes, mix64(params.seed + step++), &stats);
    current[tr.target] = bloom_filter_relation(current[tr.target], tr.attributes, filter, stats);
  };
  for (const auto& tr : schedule.forward) apply(tr);
  for (const auto& tr : schedule.backward) apply(tr);
  return current;
}

std::vector<Relation> predicate_transfer(const Query& q, const Database& db, const TransferSchedule& schedule,
                                         const BloomParams& params, OpStats& stats) {
  return predicate_transfer(q, bind_atoms(q, db), schedule, params, stats);
}

std::size_t rpt_select_root(const Query& q, std::span<const Relation> atoms, const JoinTree& shape,
                            const BloomParams& params, OpStats& stats) {
  std::size_t best = 0;
  std::size_t best_total = std::numeric_limits<std::size_t>::max();
  for (std::size_t r = 0; r < shape.size(); ++r) {
    auto filtered = predicate_transfer(q, atoms, rooted_schedule(q, shape.rerooted(r)), params, stats);
    const auto total = total_size(filtered);
    if (total < best_total) {
      best_total = total;
      best = r;
    }
  }
  return best;
}

RptResult rpt(const Query& q, std::span<const Relation> atoms, const BloomParams& params, OpStats& stats,
              const std::optional<JoinOrder>& order) {
  auto shape = build_join_tree(q);
  const auto root = rpt_select_root(q, atoms, shape, params, stats);
  auto tree = shape.rerooted(root);
  auto filtered = predicate_transfer(q, atoms, rooted_schedule(q, tree), params, stats);
  JoinOrder o = order ? *order : tree.bfs_order();
  auto plan = make_plan(q, tree, o, PlanShape::left_deep);
  auto out = hash_join_plan(plan, q, filtered, stats);
  return RptResult{std::move(out), std::move(tree), std::move(o), std::move(filtered)};
}

RptResult rpt(const Query& q, const Database& db, const BloomParams& params, OpStats& stats,
              const std::optional<JoinOrder>& order) {
  return rpt(q, bind_atoms(q, db), params, stats, order);
}

}  // namespace ajl
