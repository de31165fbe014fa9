#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ajl {

/// A single attribute value. Integers order before strings (variant index order).
using Value = std::variant<std::int64_t, std::string>;

/// Positional row aligned with a Schema.
using Tuple = std::vector<Value>;

std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t hash_value(const Value& v, std::uint64_t seed = 0) noexcept;
std::uint64_t hash_tuple(const Tuple& t, std::uint64_t seed = 0) noexcept;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept { return hash_tuple(t); }
};

std::string to_string(const Value& v);
std::string to_string(const Tuple& t);

/// Fields made only of decimal digits (and fitting in int64) become integers,
/// everything else stays a string.
Value parse_field(std::string_view field);

}  // namespace ajl
