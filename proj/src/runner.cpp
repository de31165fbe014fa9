#include "ajl/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include "ajl/aggregates.hpp"
#include "ajl/algebra.hpp"
#include "ajl/csv.hpp"
#include "ajl/errors.hpp"
#include "ajl/query_parser.hpp"
#include "ajl/yannakakis.hpp"
#include "ajl/zero_overhead.hpp"

namespace ajl {

namespace {

const std::vector<std::pair<Strategy, std::string>>& strategy_names() {
  static const std::vector<std::pair<Strategy, std::string>> names{
      {Strategy::oracle, "oracle"}, {Strategy::hashjoin, "hashjoin"}, {Strategy::ya, "ya"},
      {Strategy::ya2, "ya2"},       {Strategy::yaplus, "yaplus"},     {Strategy::pt, "pt"},
      {Strategy::rpt, "rpt"},       {Strategy::ttj, "ttj"},           {Strategy::nested, "nested"}};
  return names;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Relation left_deep_join(const Query& q, const JoinTree& t, const JoinOrder& o, std::span<const Relation> atoms,
                        OpStats& stats) {
  return hash_join_plan(make_plan(q, t, o, PlanShape::left_deep), q, atoms, stats);
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  for (const auto& [s, n] : strategy_names()) {
    if (n == name) return s;
  }
  throw ContractError("unknown strategy '" + std::string(name) + "'");
}

std::string strategy_name(Strategy s) {
  for (const auto& [k, n] : strategy_names()) {
    if (k == s) return n;
  }
  return "?";
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all = [] {
    std::vector<Strategy> v;
    for (const auto& entry : strategy_names()) v.push_back(entry.first);
    return v;
  }();
  return all;
}

AggregateSpec AggregateSpec::parse(std::string_view text) {
  if (text == "count") return {};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos && colon + 1 < text.size()) {
    const auto kind = text.substr(0, colon);
    std::string attr(text.substr(colon + 1));
    if (kind == "sum") return {AggregateKind::sum, attr};
    if (kind == "min") return {AggregateKind::min, attr};
  }
  throw ContractError("aggregate must be count, sum:<attr> or min:<attr>, got '" + std::string(text) + "'");
}

std::string AggregateSpec::column() const {
  switch (kind) {
    case AggregateKind::count: return "count";
    case AggregateKind::sum: return "sum_" + attribute.value_or("");
    case AggregateKind::min: return "min_" + attribute.value_or("");
  }
  return "count";
}

Execution execute(Strategy s, const Query& q, std::span<const Relation> atoms, const BloomParams& bloom) {
  Execution e;
  Stopwatch clock;
  if (s == Strategy::oracle) {
    e.output = oracle_join(q, atoms);
    e.stats.output_tuples = e.output.size();
    e.join_ms = clock.lap();
    return e;
  }

  auto tree = build_join_tree(q);
  switch (s) {
    case Strategy::oracle:
      break;
    case Strategy::hashjoin:
    case Strategy::ttj: {
      e.order = tree.bfs_order();
      auto plan = make_plan(q, tree, e.order, PlanShape::left_deep);
      e.reduce_ms = clock.lap();
      e.output = s == Strategy::ttj ? ttj(plan, q, atoms, e.stats) : hash_join_plan(plan, q, atoms, e.stats);
      e.join_ms = clock.lap();
      break;
    }
    case Strategy::ya: {
      auto reduced = full_reduce(q, atoms, tree, e.stats);
      e.reduce_ms = clock.lap();
      e.output = join_along_tree(q, tree, reduced, e.stats);
      e.stats.output_tuples += e.output.size();
      e.join_ms = clock.lap();
      e.order = tree.post_order();
      break;
    }
    case Strategy::ya2:
    case Strategy::yaplus: {
      if (s == Strategy::yaplus) {
        auto choice = ya_plus_select(q, atoms);
        tree = choice.tree;
        e.order = choice.order;
      } else {
        e.order = tree.bfs_order();
      }
      auto reduced = bottom_up_pass(tree, std::vector<Relation>(atoms.begin(), atoms.end()), e.stats);
      e.reduce_ms = clock.lap();
      e.output = join_in_order(q, e.order, reduced, e.stats);
      e.stats.output_tuples += e.output.size();
      e.join_ms = clock.lap();
      break;
    }
    case Strategy::pt: {
      auto filtered = predicate_transfer(q, atoms, small_to_large_schedule(q, tree, atoms), bloom, e.stats);
      e.reduce_ms = clock.lap();
      e.order = tree.bfs_order();
      e.output = left_deep_join(q, tree, e.order, filtered, e.stats);
      e.join_ms = clock.lap();
      break;
    }
    case Strategy::rpt: {
      tree = tree.rerooted(rpt_select_root(q, atoms, tree, bloom, e.stats));
      auto filtered = predicate_transfer(q, atoms, rooted_schedule(q, tree), bloom, e.stats);
      e.reduce_ms = clock.lap();
      e.order = tree.bfs_order();
      e.output = left_deep_join(q, tree, e.order, filtered, e.stats);
      e.join_ms = clock.lap();
      break;
    }
    case Strategy::nested: {
      auto root = nest_bottom_up(q, atoms, tree, e.stats);
      e.reduce_ms = clock.lap();
      e.output = project(unnest(*root, e.stats), q.head());
      e.stats.output_tuples += e.output.size();
      e.join_ms = clock.lap();
      e.order = tree.pre_order();
      break;
    }
  }
  e.tree = tree;
  return e;
}

namespace {

template <Semiring S>
Relation to_relation(const AnnotatedRelation<S>& a, const std::string& column) {
  auto names = a.relation.schema().names();
  names.push_back(column);
  std::vector<Tuple> rows;
  rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Tuple t = a.relation[i];
    t.push_back(static_cast<std::int64_t>(a.annotations[i]));
    rows.push_back(std::move(t));
  }
  return Relation::from_unique(Schema(std::move(names)), std::move(rows));
}

template <Semiring S>
Relation aggregate_with(Strategy s, const Query& q, std::span<const Relation> atoms, const AnnotationRule& rule,
                        std::span<const std::string> groupby, const std::string& column, Execution& e) {
  if (s == Strategy::oracle) return to_relation(oracle_aggregate<S>(q, atoms, groupby, rule), column);
  auto tree = s == Strategy::yaplus ? ya_plus_select(q, atoms).tree : build_join_tree(q);
  if (dominating_atom(q, groupby)) {
    e.zero_ma = true;
    auto out = zero_ma_aggregate<S>(q, atoms, tree, groupby, e.stats, rule);
    e.tree = tree.rerooted(*dominating_atom(q, groupby));
    return to_relation(out, column);
  }
  e.tree = tree;
  return to_relation(ya_aggregate<S>(q, atoms, tree, groupby, e.stats, rule), column);
}

}  // namespace

Execution execute_aggregate(Strategy s, const Query& q, std::span<const Relation> atoms, const AggregateSpec& agg,
                            std::span<const std::string> groupby) {
  if (s != Strategy::oracle && s != Strategy::ya && s != Strategy::ya2 && s != Strategy::yaplus) {
    throw ContractError("aggregates run with the oracle, ya, ya2 or yaplus strategies only");
  }
  Execution e;
  Stopwatch clock;
  const auto rule = agg.attribute ? AnnotationRule::lift_attribute(*agg.attribute) : AnnotationRule::constant_one();
  switch (agg.kind) {
    case AggregateKind::count:
      e.output = aggregate_with<CountingSemiring>(s, q, atoms, rule, groupby, agg.column(), e);
      break;
    case AggregateKind::sum:
      e.output = aggregate_with<SumProductSemiring>(s, q, atoms, rule, groupby, agg.column(), e);
      break;
    case AggregateKind::min:
      e.output = aggregate_with<MinPlusSemiring>(s, q, atoms, rule, groupby, agg.column(), e);
      break;
  }
  e.stats.output_tuples = e.output.size();
  e.reduce_ms = clock.lap();
  if (e.tree) e.order = e.tree->bfs_order();
  return e;
}

nlohmann::ordered_json stats_json(Strategy s, const Execution& e, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["strategy"] = strategy_name(s);
  j["output_size"] = e.output.size();
  j["counters"] = {{"hash_build_inserts", e.stats.hash_build_inserts},
                   {"hash_probes", e.stats.hash_probes},
                   {"probe_misses", e.stats.probe_misses},
                   {"tuples_materialized", e.stats.tuples_materialized},
                   {"semijoin_drops", e.stats.semijoin_drops},
                   {"ttj_deletions", e.stats.ttj_deletions}};
  j["total_work"] = e.stats.total();
  j["phase_ms"] = {{"reduce", e.reduce_ms}, {"join", e.join_ms}};
  if (e.tree) {
    j["join_tree"] = {{"root", e.tree->root()}, {"parent", e.tree->parents()}};
  } else {
    j["join_tree"] = nullptr;
  }
  j["join_order"] = e.order;
  j["seed"] = seed;
  if (e.zero_ma) j["zero_ma"] = true;
  return j;
}

int run(const RunConfig& cfg) {
  try {
    const auto q = load_query(cfg.query);
    const auto db = load_csv(cfg.data, q);
    const auto atoms = bind_atoms(q, db);
    auto bloom = cfg.bloom;
    bloom.seed = cfg.seed;
    const auto e = cfg.aggregate ? execute_aggregate(cfg.strategy, q, atoms, *cfg.aggregate, cfg.groupby)
                                 : execute(cfg.strategy, q, atoms, bloom);
    if (cfg.output) {
      write_relation_csv(*cfg.output, e.output);
    } else {
      write_relation_csv(std::cout, e.output);
    }
    if (cfg.stats) {
      std::ofstream out(*cfg.stats);
      if (!out) throw IoError("cannot write " + cfg.stats->string());
      out << stats_json(cfg.strategy, e, cfg.seed).dump(2) << '\n';
    }
    return 0;
  } catch (const AcyclicityError& err) {
    std::cerr << "error: " << err.what() << '\n';
    for (const auto& edge : err.residue()) {
      std::cerr << "  residue edge {";
      for (std::size_t i = 0; i < edge.size(); ++i) std::cerr << (i ? "," : "") << edge[i];
      std::cerr << "}\n";
    }
    return 2;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}

}  // namespace ajl
