#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ajl/generator.hpp"
#include "ajl/query.hpp"
#include "ajl/relation.hpp"

namespace ajl::test {

inline Relation rel(std::vector<std::string> schema, std::vector<Tuple> rows) {
  return Relation(Schema(std::move(schema)), std::move(rows));
}

inline Query path_query() {
  return Query({"i", "j", "k", "l", "m"},
               {{"R", {"i", "j"}}, {"S", {"j", "k"}}, {"T", {"k", "l"}}, {"U", {"l", "m"}}});
}

// The desk instance D1.
inline Database d1() {
  Database db;
  db.emplace("R", rel({"a", "b"}, {{1, 1}, {2, 2}}));
  db.emplace("S", rel({"a", "b"}, {{1, 10}, {2, 20}}));
  db.emplace("T", rel({"a", "b"}, {{10, 100}, {20, 200}, {30, 300}}));
  db.emplace("U", rel({"a", "b"}, {{100, 7}}));
  return db;
}

inline Query triangle_query() {
  return Query({"a", "b", "c"}, {{"R", {"a", "b"}}, {"S", {"b", "c"}}, {"T", {"c", "a"}}});
}

inline Query star_query() {
  return Query({"a", "b", "c", "d"}, {{"R", {"a", "b"}}, {"S", {"a", "c"}}, {"T", {"a", "d"}}});
}

/// Row set in the given column order.
inline std::set<Tuple> rows_of(const Relation& r, const std::vector<std::string>& columns) {
  std::set<Tuple> out;
  std::vector<std::size_t> pos;
  for (const auto& c : columns) pos.push_back(r.schema().index_of(c));
  for (const auto& t : r) {
    Tuple x;
    for (auto p : pos) x.push_back(t[p]);
    out.insert(std::move(x));
  }
  return out;
}

/// Naive reference: left-to-right fold of nested-loop joins, then a projection on the head.
/// Deliberately shares no code with the library's join operators.
inline std::set<Tuple> reference_join(const Query& q, const std::vector<Relation>& atoms) {
  std::vector<std::string> vars;
  std::vector<Tuple> acc{Tuple{}};
  for (std::size_t a = 0; a < q.size(); ++a) {
    const auto& av = q.atom(a).vars;
    std::vector<std::pair<std::size_t, std::size_t>> same;  // (acc column, atom column)
    std::vector<std::size_t> fresh;
    for (std::size_t c = 0; c < av.size(); ++c) {
      auto it = std::find(vars.begin(), vars.end(), av[c]);
      if (it == vars.end()) {
        fresh.push_back(c);
      } else {
        same.emplace_back(static_cast<std::size_t>(it - vars.begin()), c);
      }
    }
    std::vector<Tuple> next;
    for (const auto& left : acc) {
      for (const auto& right : atoms[a]) {
        bool ok = true;
        for (auto [l, r] : same) ok = ok && left[l] == right[r];
        if (!ok) continue;
        Tuple t = left;
        for (auto c : fresh) t.push_back(right[c]);
        next.push_back(std::move(t));
      }
    }
    for (auto c : fresh) vars.push_back(av[c]);
    acc = std::move(next);
  }
  std::set<Tuple> out;
  for (const auto& t : acc) {
    Tuple h;
    for (const auto& v : q.head()) h.push_back(t[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin())]);
    out.insert(std::move(h));
  }
  return out;
}

inline std::set<Tuple> reference_join(const Query& q, const Database& db) { return reference_join(q, bind_atoms(q, db)); }

inline std::size_t input_size(const std::vector<Relation>& atoms) {
  std::size_t n = 0;
  for (const auto& a : atoms) n += a.size();
  return n;
}

/// Instances used by the property tests: shape cycles path/star/snowflake.
inline GenConfig random_config(std::uint64_t seed, std::size_t max_tuples = 120) {
  static const Shape shapes[] = {Shape::path, Shape::star, Shape::snowflake};
  static const double dangling[] = {0.0, 0.3, 0.7};
  GenConfig g;
  g.shape = shapes[seed % 3];
  g.atoms = 2 + (seed / 3) % 4;
  g.tuples = 10 + (seed * 37) % max_tuples;
  // Join fan-out stays around tuples / domain, at most 3.
  g.domain = std::max<std::int64_t>(4, static_cast<std::int64_t>(g.tuples / (1 + (seed / 4) % 3)));
  g.dangling = dangling[(seed / 12) % 3];
  g.seed = seed;
  return g;
}

}  // namespace ajl::test
