#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ajl/query.hpp"

namespace ajl {

/// RFC 4180 style: comma separated, double quotes around fields containing `,`, `"` or newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Header row gives the schema; digit-only fields load as integers. Duplicates collapse.
Relation read_relation_csv(const std::filesystem::path& path);

/// Header plus rows sorted in value order.
void write_relation_csv(std::ostream& out, const Relation& rel);
void write_relation_csv(const std::filesystem::path& path, const Relation& rel);

/// Loads `dir/<name>.csv` for every distinct atom name. Throws IoError for missing files and
/// SchemaError when a header's arity differs from an atom using it.
Database load_csv(const std::filesystem::path& dir, const Query& q);

}  // namespace ajl
