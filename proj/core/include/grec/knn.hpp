#pragma once

#include <cstdint>
#include <vector>

#include "grec/dataset.hpp"

namespace grec {

enum class Backend { brute_force, vp_tree };
enum class Distance { squared_euclidean, cosine };

// Exact nearest-neighbor index over an EmbeddingSet. Both backends return
// identical neighbor lists for any query: candidates are ordered by
// (distance, row id) with distances accumulated in double through one shared
// kernel, so ties resolve the same way everywhere. Cosine distance is
// squared Euclidean over an L2-normalized copy of the data.
//
// An index borrows the dataset; keep the EmbeddingSet alive while querying.
// Indexes are immutable after construction and safe for concurrent queries.
class NeighborIndex {
 public:
  // Throws on a zero-norm row under cosine distance (reports the row).
  NeighborIndex(const EmbeddingSet& dataset, Backend backend, Distance distance);

  // The k nearest rows to row `query_row`, ascending by (distance, row id).
  // With exclude_self the query row itself is never a candidate. Throws when
  // k exceeds the gallery size or k == 0; clamping is the caller's business.
  std::vector<std::uint32_t> query(std::uint32_t query_row, std::uint32_t k,
                                   bool exclude_self) const;

  // Squared distance (cosine: over normalized copies) between two rows.
  double pair_distance(std::uint32_t a, std::uint32_t b) const;

  Backend backend() const { return backend_; }
  Distance distance() const { return distance_; }
  std::size_t size() const { return rows_; }
  double build_ms() const { return build_ms_; }

 private:
  struct Node {
    std::uint32_t pivot = 0;
    double radius = 0.0;  // Euclidean (sqrt of the median squared distance)
    std::int32_t inner = -1;
    std::int32_t outer = -1;
    std::uint32_t leaf_begin = 0;
    std::uint32_t leaf_count = 0;  // > 0 marks a leaf
  };

  const float* row_ptr(std::uint32_t i) const { return values_ + std::size_t{i} * dim_; }
  std::int32_t build_node(std::uint32_t lo, std::uint32_t hi);

  Backend backend_;
  Distance distance_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  const float* values_ = nullptr;        // dataset storage or normalized copy
  std::vector<float> normalized_;        // owned when distance == cosine
  std::vector<std::uint32_t> tree_ids_;  // vp-tree leaf/row id arena
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  double build_ms_ = 0.0;
};

inline NeighborIndex build_index(const EmbeddingSet& dataset, Backend backend,
                                 Distance distance) {
  return NeighborIndex(dataset, backend, distance);
}

}  // namespace grec
