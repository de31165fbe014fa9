#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ajl/query.hpp"

namespace ajl {

enum class Shape { path, star, snowflake, fanout, quadratic_adversarial };

/// Accepts "path", "star", "snowflake", "fanout", "quadratic-adversarial" (or "quadratic").
Shape parse_shape(std::string_view name);
std::string shape_name(Shape s);

struct GenConfig {
  Shape shape = Shape::path;
  std::size_t atoms = 4;
  std::size_t tuples = 100;
  std::int64_t domain = 50;
  double dangling = 0.0;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Query query;
  Database db;
  nlohmann::json manifest;
};

/// Deterministic in the config. Tuples are generated top-down along the GYO join tree: each
/// non-root atom first covers every key its parent's joining tuples use, and
/// round(dangling * tuples) of its tuples take keys from a range no parent tuple uses.
/// The quadratic-adversarial shape ignores `atoms`, `domain` and `dangling`.
GeneratedInstance generate_instance(const GenConfig& cfg);

/// Writes `<name>.csv` per relation, `query.cq` and `manifest.json` into `dir` (created if needed).
void write_instance(const std::filesystem::path& dir, const GeneratedInstance& inst);

}  // namespace ajl
