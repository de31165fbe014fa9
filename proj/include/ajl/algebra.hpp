#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ajl/op_stats.hpp"
#include "ajl/query.hpp"
#include "ajl/relation.hpp"

namespace ajl {

/// Hash index from a key (restriction to some positions) to row ids.
using KeyIndex = std::unordered_map<Tuple, std::vector<std::uint32_t>, TupleHash>;

KeyIndex build_index(const Relation& rel, std::span<const std::size_t> positions,
                     OpStats* stats = nullptr);

Relation project(const Relation& rel, std::span<const std::string> attrs);
inline Relation project(const Relation& rel, std::initializer_list<std::string> attrs) {
  return project(rel, std::span<const std::string>(attrs.begin(), attrs.size()));
}

/// Left tuples that agree with some right tuple on the shared attributes. With no shared
/// attributes the result is `left` when `right` is non-empty and empty otherwise.
Relation semijoin(const Relation& left, const Relation& right, OpStats* stats = nullptr);

/// Hash join building on `right`. Result schema is left's attributes followed by right's new ones.
Relation natural_join(const Relation& left, const Relation& right, OpStats* stats = nullptr);

/// Reference evaluation: backtracking nested loops over the atoms in body order, no indexes and
/// no join tree. Result columns follow the head.
Relation oracle_join(const Query& q, const Database& db);
Relation oracle_join(const Query& q, std::span<const Relation> atoms);

}  // namespace ajl
