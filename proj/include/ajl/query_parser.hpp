#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ajl/query.hpp"

namespace ajl {

/// Parses `HEAD(v1,...,vk) :- A1(...), A2(...), ... .` with `#` line comments.
/// Throws SyntaxError (with line/column) or SchemaError for semantic violations.
Query parse_query(std::string_view text);
Query load_query(const std::filesystem::path& path);

/// Inverse of parse_query (single line, trailing newline).
std::string format_query(const Query& q);

}  // namespace ajl
