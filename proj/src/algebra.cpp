#include "ajl/algebra.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "ajl/errors.hpp"

namespace ajl {

KeyIndex build_index(const Relation& rel, std::span<const std::size_t> positions, OpStats* stats) {
  KeyIndex index;
  index.reserve(rel.size());
  for (std::uint32_t i = 0; i < rel.size(); ++i) {
    index[key_of(rel[i], positions)].push_back(i);
  }
  if (stats) stats->hash_build_inserts += rel.size();
  return index;
}

Relation project(const Relation& rel, std::span<const std::string> attrs) {
  auto pos = rel.schema().positions(attrs);
  std::vector<Tuple> rows;
  rows.reserve(rel.size());
  for (const auto& t : rel) rows.push_back(key_of(t, pos));
  return Relation(Schema(std::vector<std::string>(attrs.begin(), attrs.end())), std::move(rows));
}

Relation semijoin(const Relation& left, const Relation& right, OpStats* stats) {
  auto shared = shared_attributes(left.schema(), right.schema());
  auto lpos = left.schema().positions(shared);
  auto rpos = right.schema().positions(shared);

  std::unordered_set<Tuple, TupleHash> keys;
  keys.reserve(right.size());
  for (const auto& t : right) keys.insert(key_of(t, rpos));

  std::vector<Tuple> kept;
  kept.reserve(left.size());
  std::uint64_t misses = 0;
  for (const auto& t : left) {
    if (keys.contains(key_of(t, lpos))) {
      kept.push_back(t);
    } else {
      ++misses;
    }
  }
  if (stats) {
    ++stats->semijoin_ops;
    stats->hash_build_inserts += right.size();
    stats->hash_probes += left.size();
    stats->probe_misses += misses;
    stats->semijoin_drops += misses;
  }
  return Relation::from_unique(left.schema(), std::move(kept));
}

Relation natural_join(const Relation& left, const Relation& right, OpStats* stats) {
  auto shared = shared_attributes(left.schema(), right.schema());
  auto lpos = left.schema().positions(shared);
  auto rpos = right.schema().positions(shared);

  std::vector<std::string> names = left.schema().names();
  std::vector<std::size_t> extra;
  for (std::size_t i = 0; i < right.schema().arity(); ++i) {
    if (!left.schema().contains(right.schema()[i])) {
      names.push_back(right.schema()[i]);
      extra.push_back(i);
    }
  }

  auto index = build_index(right, rpos, stats);
  std::vector<Tuple> rows;
  std::uint64_t misses = 0;
  for (const auto& l : left) {
    auto it = index.find(key_of(l, lpos));
    if (it == index.end()) {
      ++misses;
      continue;
    }
    for (auto r : it->second) {
      Tuple out = l;
      for (auto e : extra) out.push_back(right[r][e]);
      rows.push_back(std::move(out));
    }
  }
  if (stats) {
    stats->hash_probes += left.size();
    stats->probe_misses += misses;
    stats->tuples_materialized += rows.size();
  }
  // Distinct left rows combined with distinct right rows stay distinct.
  return Relation::from_unique(Schema(std::move(names)), std::move(rows));
}

namespace {

struct OracleState {
  std::vector<std::vector<std::size_t>> var_of_column;  // per atom: variable id per column
  std::vector<std::optional<Value>> binding;
  std::vector<std::size_t> head_ids;
  std::vector<Tuple> out;
};

void oracle_extend(std::span<const Relation> atoms, std::size_t level, OracleState& st) {
  if (level == atoms.size()) {
    Tuple row;
    row.reserve(st.head_ids.size());
    for (auto id : st.head_ids) row.push_back(*st.binding[id]);
    st.out.push_back(std::move(row));
    return;
  }
  const auto& cols = st.var_of_column[level];
  std::vector<std::size_t> newly_bound;
  for (const auto& t : atoms[level]) {
    bool consistent = true;
    newly_bound.clear();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto& slot = st.binding[cols[c]];
      if (slot) {
        if (*slot != t[c]) {
          consistent = false;
          break;
        }
      } else {
        slot = t[c];
        newly_bound.push_back(cols[c]);
      }
    }
    if (consistent) oracle_extend(atoms, level + 1, st);
    for (auto id : newly_bound) st.binding[id].reset();
  }
}

}  // namespace

Relation oracle_join(const Query& q, std::span<const Relation> atoms) {
  if (atoms.size() != q.size()) throw ContractError("oracle_join: atom count mismatch");
  const auto& vars = q.variables();
  auto id_of = [&](const std::string& v) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  };
  OracleState st;
  st.binding.resize(vars.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<std::size_t> cols;
    for (const auto& v : q.atom(i).vars) cols.push_back(id_of(v));
    st.var_of_column.push_back(std::move(cols));
  }
  for (const auto& h : q.head()) st.head_ids.push_back(id_of(h));
  oracle_extend(atoms, 0, st);
  return Relation(Schema(q.head()), std::move(st.out));
}

Relation oracle_join(const Query& q, const Database& db) { return oracle_join(q, bind_atoms(q, db)); }

}  // namespace ajl
