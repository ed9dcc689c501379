#pragma once

#include <cstdint>
#include <vector>

namespace grec {

enum class RemainderPolicy { drop, error };

// Seeded disjoint grouping of interned label ids. The groups cover every
// label except `dropped_labels`, and every group holds exactly `group_size`
// labels. Building is pure integer arithmetic, so identical
// (label_count, group_size, seed) inputs produce a byte-identical partition
// on any platform.
struct GroupPartition {
  std::vector<std::vector<std::uint32_t>> groups;
  std::uint32_t group_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> dropped_labels;
};

// Shuffles the canonical label order (interned id order: 0 .. label_count-1)
// with a stream derived from `seed` and chunks the result into consecutive
// blocks of `group_size`. The final partial block (label_count mod group_size
// ids) is dropped or rejected per policy. Group members and dropped ids are
// reported in ascending order.
GroupPartition build_partition(std::uint32_t label_count, std::uint32_t group_size,
                               std::uint64_t seed, RemainderPolicy policy);

}  // namespace grec
