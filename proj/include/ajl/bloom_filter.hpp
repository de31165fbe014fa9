#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ajl/op_stats.hpp"
#include "ajl/relation.hpp"

namespace ajl {

/// m-bit, k-hash Bloom filter over key tuples. Positions come from double hashing
/// g_i = h1 + i * h2 (mod m) with two seeded 64-bit hashes; m is a power of two.
class BloomFilter {
 public:
  BloomFilter(std::uint64_t bits, std::uint32_t hashes, std::uint64_t seed, std::size_t key_arity);

  /// Smallest power of two >= bits_per_key * keys (at least 1).
  static std::uint64_t bits_for(std::size_t keys, double bits_per_key);

  void insert(const Tuple& key);
  /// Never false for an inserted key. Throws ContractError on key arity mismatch.
  bool may_contain(const Tuple& key) const;

  std::uint64_t bits() const noexcept { return bits_; }
  std::uint32_t hashes() const noexcept { return hashes_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t key_arity() const noexcept { return key_arity_; }
  std::uint64_t popcount() const noexcept;

 private:
  void check_arity(const Tuple& key) const;

  std::uint64_t bits_;
  std::uint32_t hashes_;
  std::uint64_t seed_;
  std::size_t key_arity_;
  std::vector<std::uint64_t> words_;
};

/// Filter holding the projection of `rel` onto `attrs`.
BloomFilter bloom_build(const Relation& rel, std::span<const std::string> attrs, std::uint64_t bits,
                        std::uint32_t hashes, std::uint64_t seed, OpStats* stats = nullptr);

inline bool bloom_probe(const BloomFilter& f, const Tuple& key) { return f.may_contain(key); }

/// Tuples of `rel` whose `attrs` projection probes true.
Relation bloom_filter_relation(const Relation& rel, std::span<const std::string> attrs, const BloomFilter& f,
                               OpStats& stats);

}  // namespace ajl
