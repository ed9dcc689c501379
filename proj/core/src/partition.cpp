#include "grec/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "grec/error.hpp"
#include "grec/rng.hpp"

namespace grec {

GroupPartition build_partition(std::uint32_t label_count, std::uint32_t group_size,
                               std::uint64_t seed, RemainderPolicy policy) {
  if (group_size == 0) throw Error(ErrorKind::invalid_argument, "group size must be >= 1");
  if (label_count == 0) throw Error(ErrorKind::empty_input, "no labels to partition");
  if (label_count < group_size) {
    throw Error(ErrorKind::invalid_argument,
                "cannot form one group: " + std::to_string(label_count) + " label(s) < group size " +
                    std::to_string(group_size));
  }
  const std::uint32_t remainder = label_count % group_size;
  if (remainder != 0 && policy == RemainderPolicy::error) {
    throw Error(ErrorKind::invalid_argument,
                "label count " + std::to_string(label_count) + " is not divisible by group size " +
                    std::to_string(group_size) + " (remainder " + std::to_string(remainder) + ")");
  }

  std::vector<std::uint32_t> order(label_count);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(derive_stream(seed, kStreamPartition));
  shuffle(order, rng);

  GroupPartition partition;
  partition.group_size = group_size;
  partition.seed = seed;
  const std::uint32_t group_count = label_count / group_size;
  partition.groups.reserve(group_count);
  for (std::uint32_t g = 0; g < group_count; ++g) {
    std::vector<std::uint32_t> group(order.begin() + std::size_t{g} * group_size,
                                     order.begin() + std::size_t{g + 1} * group_size);
    std::sort(group.begin(), group.end());
    partition.groups.push_back(std::move(group));
  }
  partition.dropped_labels.assign(order.begin() + std::size_t{group_count} * group_size,
                                  order.end());
  std::sort(partition.dropped_labels.begin(), partition.dropped_labels.end());
  return partition;
}

}  // namespace grec
