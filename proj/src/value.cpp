#include "ajl/value.hpp"

#include <charconv>
#include <limits>

namespace ajl {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_value(const Value& v, std::uint64_t seed) noexcept {
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    return mix64(static_cast<std::uint64_t>(*i) ^ mix64(seed));
  }
  const auto& s = std::get<std::string>(v);
  std::uint64_t h = 0xcbf29ce484222325ULL ^ mix64(seed ^ 0x5bd1e995ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h ^ 0xa0761d6478bd642fULL);
}

std::uint64_t hash_tuple(const Tuple& t, std::uint64_t seed) noexcept {
  std::uint64_t h = mix64(seed ^ t.size());
  for (const auto& v : t) h = mix64(h * 0x9fb21c651e98df25ULL + hash_value(v, seed));
  return h;
}

std::string to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += to_string(t[i]);
  }
  return out + ")";
}

Value parse_field(std::string_view field) {
  if (field.empty()) return std::string(field);
  for (char c : field) {
    if (c < '0' || c > '9') return std::string(field);
  }
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::string(field);
  return out;
}

}  // namespace ajl
