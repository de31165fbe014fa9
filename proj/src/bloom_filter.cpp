#include "ajl/bloom_filter.hpp"

#include <bit>
#include <cmath>

#include "ajl/errors.hpp"

namespace ajl {

namespace {
constexpr std::uint64_t kSecondHashSalt = 0x6a09e667f3bcc909ULL;
}

BloomFilter::BloomFilter(std::uint64_t bits, std::uint32_t hashes, std::uint64_t seed, std::size_t key_arity)
    : bits_(bits), hashes_(hashes), seed_(seed), key_arity_(key_arity) {
  if (bits_ == 0 || !std::has_single_bit(bits_)) throw ContractError("Bloom filter size must be a power of two");
  if (hashes_ == 0) throw ContractError("Bloom filter needs at least one hash function");
  words_.assign((bits_ + 63) / 64, 0);
}

std::uint64_t BloomFilter::bits_for(std::size_t keys, double bits_per_key) {
  const double want = std::ceil(bits_per_key * static_cast<double>(keys));
  std::uint64_t m = 1;
  while (static_cast<double>(m) < want) m <<= 1;
  return m;
}

void BloomFilter::check_arity(const Tuple& key) const {
  if (key.size() != key_arity_) {
    throw ContractError("Bloom key arity " + std::to_string(key.size()) + " does not match filter arity " +
                        std::to_string(key_arity_));
  }
}

void BloomFilter::insert(const Tuple& key) {
  check_arity(key);
  const std::uint64_t h1 = hash_tuple(key, seed_);
  const std::uint64_t h2 = hash_tuple(key, seed_ ^ kSecondHashSalt) | 1;
  for (std::uint32_t i = 0; i < hashes_; ++i) {
    const std::uint64_t bit = (h1 + i * h2) & (bits_ - 1);
    words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }
}

bool BloomFilter::may_contain(const Tuple& key) const {
  check_arity(key);
  const std::uint64_t h1 = hash_tuple(key, seed_);
  const std::uint64_t h2 = hash_tuple(key, seed_ ^ kSecondHashSalt) | 1;
  for (std::uint32_t i = 0; i < hashes_; ++i) {
    const std::uint64_t bit = (h1 + i * h2) & (bits_ - 1);
    if (!(words_[bit >> 6] & (std::uint64_t{1} << (bit & 63)))) return false;
  }
  return true;
}

std::uint64_t BloomFilter::popcount() const noexcept {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

BloomFilter bloom_build(const Relation& rel, std::span<const std::string> attrs, std::uint64_t bits,
                        std::uint32_t hashes, std::uint64_t seed, OpStats* stats) {
  auto pos = rel.schema().positions(attrs);
  BloomFilter f(bits, hashes, seed, attrs.size());
  for (const auto& t : rel) f.insert(key_of(t, pos));
  if (stats) stats->hash_build_inserts += rel.size();
  return f;
}

Relation bloom_filter_relation(const Relation& rel, std::span<const std::string> attrs, const BloomFilter& f,
                               OpStats& stats) {
  auto pos = rel.schema().positions(attrs);
  if (pos.size() != f.key_arity()) throw ContractError("filter attributes do not match the filter's key arity");
  std::vector<Tuple> kept;
  kept.reserve(rel.size());
  for (const auto& t : rel) {
    if (f.may_contain(key_of(t, pos))) kept.push_back(t);
  }
  const auto dropped = rel.size() - kept.size();
  stats.hash_probes += rel.size();
  stats.probe_misses += dropped;
  stats.semijoin_drops += dropped;
  return Relation::from_unique(rel.schema(), std::move(kept));
}

}  // namespace ajl
