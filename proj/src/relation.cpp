#include "ajl/relation.hpp"

#include <algorithm>
#include <unordered_set>

#include "ajl/errors.hpp"

namespace ajl {

Schema::Schema(std::initializer_list<std::string> names) : Schema(std::vector<std::string>(names)) {}

Schema::Schema(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw SchemaError("empty attribute name");
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw SchemaError("duplicate attribute '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw SchemaError("unknown attribute '" + std::string(name) + "'");
}

std::vector<std::size_t> Schema::positions(std::span<const std::string> attrs) const {
  std::vector<std::size_t> out;
  out.reserve(attrs.size());
  for (const auto& a : attrs) out.push_back(index_of(a));
  return out;
}

std::vector<std::string> shared_attributes(const Schema& left, const Schema& right) {
  std::vector<std::string> out;
  for (const auto& a : left.names()) {
    if (right.contains(a)) out.push_back(a);
  }
  return out;
}

Tuple key_of(const Tuple& t, std::span<const std::size_t> positions) {
  Tuple k;
  k.reserve(positions.size());
  for (auto p : positions) k.push_back(t[p]);
  return k;
}

Relation::Relation(Schema schema, std::vector<Tuple> rows) : schema_(std::move(schema)) {
  std::unordered_set<Tuple, TupleHash> seen;
  seen.reserve(rows.size());
  rows_.reserve(rows.size());
  for (auto& r : rows) {
    if (r.size() != schema_.arity()) {
      throw SchemaError("tuple arity " + std::to_string(r.size()) + " does not match schema arity " +
                        std::to_string(schema_.arity()));
    }
    if (seen.insert(r).second) rows_.push_back(std::move(r));
  }
}

Relation Relation::from_unique(Schema schema, std::vector<Tuple> rows) {
  Relation out(std::move(schema));
  out.rows_ = std::move(rows);
  return out;
}

Relation Relation::renamed(Schema schema) const& {
  Relation copy = *this;
  return std::move(copy).renamed(std::move(schema));
}

Relation Relation::renamed(Schema schema) && {
  if (schema.arity() != schema_.arity()) {
    throw SchemaError("cannot rename arity " + std::to_string(schema_.arity()) + " relation to arity " +
                      std::to_string(schema.arity()));
  }
  schema_ = std::move(schema);
  return std::move(*this);
}

std::vector<Tuple> Relation::sorted_rows(std::span<const std::string> column_order) const {
  auto pos = schema_.positions(column_order);
  std::vector<Tuple> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(key_of(r, pos));
  std::sort(out.begin(), out.end());
  return out;
}

bool same_contents(const Relation& a, const Relation& b) {
  if (a.schema().arity() != b.schema().arity() || a.size() != b.size()) return false;
  for (const auto& n : a.schema().names()) {
    if (!b.schema().contains(n)) return false;
  }
  return a.sorted_rows() == b.sorted_rows(a.schema().names());
}

}  // namespace ajl
