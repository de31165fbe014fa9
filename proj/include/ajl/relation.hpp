#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ajl/value.hpp"

namespace ajl {

/// Ordered, duplicate-free list of attribute names.
class Schema {
 public:
  Schema() = default;
  Schema(std::initializer_list<std::string> names);
  explicit Schema(std::vector<std::string> names);

  std::size_t arity() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& operator[](std::size_t i) const { return names_[i]; }

  std::optional<std::size_t> find(std::string_view name) const noexcept;
  bool contains(std::string_view name) const noexcept { return find(name).has_value(); }
  /// Throws SchemaError for unknown names.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::size_t> positions(std::span<const std::string> attrs) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<std::string> names_;
};

/// Attributes of `left` that also occur in `right`, in `left` order.
std::vector<std::string> shared_attributes(const Schema& left, const Schema& right);

Tuple key_of(const Tuple& t, std::span<const std::size_t> positions);

/// Set-semantics relation: a schema plus duplicate-free tuples kept in first-insertion order.
class Relation {
 public:
  Relation() = default;
  explicit Relation(Schema schema) : schema_(std::move(schema)) {}
  /// Validates arities and collapses duplicates.
  Relation(Schema schema, std::vector<Tuple> rows);

  /// Skips duplicate elimination; the caller guarantees `rows` is already a set.
  static Relation from_unique(Schema schema, std::vector<Tuple> rows);

  const Schema& schema() const noexcept { return schema_; }
  std::span<const Tuple> tuples() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const Tuple& operator[](std::size_t i) const { return rows_[i]; }

  auto begin() const noexcept { return rows_.begin(); }
  auto end() const noexcept { return rows_.end(); }

  /// Same tuples re-labelled with a new schema of equal arity.
  Relation renamed(Schema schema) const&;
  Relation renamed(Schema schema) &&;

  /// Rows reordered to `column_order` and sorted; used for set comparison and output.
  std::vector<Tuple> sorted_rows(std::span<const std::string> column_order) const;
  std::vector<Tuple> sorted_rows() const { return sorted_rows(schema_.names()); }

 private:
  Schema schema_;
  std::vector<Tuple> rows_;
};

/// Set equality up to column order. Relations over different attribute sets are never equal.
bool same_contents(const Relation& a, const Relation& b);

}  // namespace ajl
