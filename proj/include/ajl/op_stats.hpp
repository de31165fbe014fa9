#pragma once

#include <cstdint>

namespace ajl {

/// Work counters; the cost model shared by every strategy.
struct OpStats {
  std::uint64_t hash_build_inserts = 0;
  std::uint64_t hash_probes = 0;
  std::uint64_t probe_misses = 0;
  std::uint64_t tuples_materialized = 0;
  std::uint64_t semijoin_drops = 0;
  std::uint64_t ttj_deletions = 0;
  std::uint64_t output_tuples = 0;
  // Number of semijoin operators applied. Not part of total().
  std::uint64_t semijoin_ops = 0;

  /// Misses are a subset of probes and outputs are already materialized, so neither is added.
  std::uint64_t total() const noexcept {
    return hash_build_inserts + hash_probes + tuples_materialized + semijoin_drops + ttj_deletions;
  }

  OpStats& operator+=(const OpStats& o) noexcept {
    hash_build_inserts += o.hash_build_inserts;
    hash_probes += o.hash_probes;
    probe_misses += o.probe_misses;
    tuples_materialized += o.tuples_materialized;
    semijoin_drops += o.semijoin_drops;
    ttj_deletions += o.ttj_deletions;
    output_tuples += o.output_tuples;
    semijoin_ops += o.semijoin_ops;
    return *this;
  }

  friend bool operator==(const OpStats&, const OpStats&) = default;
};

}  // namespace ajl
