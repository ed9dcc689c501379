#include "grec/knn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace grec {

namespace {

constexpr std::uint32_t kLeafSize = 16;

// Shared distance kernel. Both backends call this one non-inlined function
// so a given row pair produces bit-identical doubles regardless of the
// traversal that asked for it.
__attribute__((noinline)) double squared_distance(const float* a, const float* b,
                                                  std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += diff * diff;
  }
  return acc;
}

using Candidate = std::pair<double, std::uint32_t>;  // (distance, row id), lexicographic

// Bounded worst-at-front heap implementing the canonical (distance, row id)
// order; ties on distance resolve toward the smaller row id.
class BoundedHeap {
 public:
  explicit BoundedHeap(std::size_t k) : k_(k) { heap_.reserve(k); }

  void offer(double distance, std::uint32_t id) {
    const Candidate candidate{distance, id};
    if (heap_.size() < k_) {
      heap_.push_back(candidate);
      std::push_heap(heap_.begin(), heap_.end());
      return;
    }
    if (candidate < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = candidate;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  bool full() const { return heap_.size() == k_; }
  const Candidate& worst() const { return heap_.front(); }

  std::vector<std::uint32_t> sorted_ids() && {
    std::sort(heap_.begin(), heap_.end());
    std::vector<std::uint32_t> ids;
    ids.reserve(heap_.size());
    for (const Candidate& c : heap_) ids.push_back(c.second);
    return ids;
  }

 private:
  std::size_t k_;
  std::vector<Candidate> heap_;
};

}  // namespace

NeighborIndex::NeighborIndex(const EmbeddingSet& dataset, Backend backend, Distance distance)
    : backend_(backend), distance_(distance), rows_(dataset.rows()), dim_(dataset.dim()) {
  const auto start = std::chrono::steady_clock::now();

  if (distance_ == Distance::cosine) {
    normalized_.resize(dataset.values().size());
    for (std::size_t r = 0; r < rows_; ++r) {
      const float* row = dataset.values().data() + r * dim_;
      double norm_sq = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        norm_sq += static_cast<double>(row[c]) * static_cast<double>(row[c]);
      }
      if (norm_sq == 0.0) {
        throw Error(ErrorKind::zero_norm_row,
                    "row " + std::to_string(r) + " has zero norm under cosine distance", r);
      }
      const double inv_norm = 1.0 / std::sqrt(norm_sq);
      for (std::size_t c = 0; c < dim_; ++c) {
        normalized_[r * dim_ + c] = static_cast<float>(static_cast<double>(row[c]) * inv_norm);
      }
    }
    values_ = normalized_.data();
  } else {
    values_ = dataset.values().data();
  }

  if (backend_ == Backend::vp_tree) {
    tree_ids_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) tree_ids_[i] = static_cast<std::uint32_t>(i);
    nodes_.reserve(rows_ / (kLeafSize / 2) + 8);
    root_ = build_node(0, static_cast<std::uint32_t>(rows_));
  }

  build_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
}

// Pivot = smallest row id in the range (canonical order), then a median
// split of the remainder under the (distance to pivot, id) order. Node
// structure is therefore deterministic for a given dataset row order.
std::int32_t NeighborIndex::build_node(std::uint32_t lo, std::uint32_t hi) {
  if (lo >= hi) return -1;
  const std::uint32_t count = hi - lo;
  const std::int32_t node_index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();

  if (count <= kLeafSize) {
    std::sort(tree_ids_.begin() + lo, tree_ids_.begin() + hi);
    Node& node = nodes_[node_index];
    node.leaf_begin = lo;
    node.leaf_count = count;
    return node_index;
  }

  auto pivot_it = std::min_element(tree_ids_.begin() + lo, tree_ids_.begin() + hi);
  std::iter_swap(tree_ids_.begin() + lo, pivot_it);
  const std::uint32_t pivot = tree_ids_[lo];

  std::vector<Candidate> scored;
  scored.reserve(count - 1);
  for (std::uint32_t i = lo + 1; i < hi; ++i) {
    scored.emplace_back(squared_distance(row_ptr(tree_ids_[i]), row_ptr(pivot), dim_),
                        tree_ids_[i]);
  }
  const std::size_t mid = (scored.size() - 1) / 2;
  std::nth_element(scored.begin(), scored.begin() + mid, scored.end());
  const double median_sq = scored[mid].first;
  for (std::size_t i = 0; i < scored.size(); ++i) tree_ids_[lo + 1 + i] = scored[i].second;

  {
    Node& node = nodes_[node_index];
    node.pivot = pivot;
    node.radius = std::sqrt(median_sq);
  }
  const std::uint32_t split = lo + 1 + static_cast<std::uint32_t>(mid) + 1;
  const std::int32_t inner = build_node(lo + 1, split);
  const std::int32_t outer = build_node(split, hi);
  nodes_[node_index].inner = inner;
  nodes_[node_index].outer = outer;
  return node_index;
}

double NeighborIndex::pair_distance(std::uint32_t a, std::uint32_t b) const {
  if (a >= rows_ || b >= rows_) throw Error(ErrorKind::out_of_range, "row id out of range");
  return squared_distance(row_ptr(a), row_ptr(b), dim_);
}

std::vector<std::uint32_t> NeighborIndex::query(std::uint32_t query_row, std::uint32_t k,
                                                bool exclude_self) const {
  if (query_row >= rows_) {
    throw Error(ErrorKind::out_of_range,
                "query row " + std::to_string(query_row) + " out of range for " +
                    std::to_string(rows_) + " rows");
  }
  const std::size_t gallery = rows_ - (exclude_self ? 1 : 0);
  if (k == 0) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  if (k > gallery) {
    throw Error(ErrorKind::out_of_range, "k=" + std::to_string(k) + " exceeds gallery size " +
                                             std::to_string(gallery));
  }

  const float* query = row_ptr(query_row);
  BoundedHeap heap(k);
  auto offer = [&](std::uint32_t id) {
    if (exclude_self && id == query_row) return;
    heap.offer(squared_distance(query, row_ptr(id), dim_), id);
  };

  if (backend_ == Backend::brute_force) {
    for (std::uint32_t id = 0; id < rows_; ++id) offer(id);
    return std::move(heap).sorted_ids();
  }

  // Vantage-point search. Ordering stays on squared distances; Euclidean
  // values appear only in the triangle-inequality bounds, padded with a
  // relative slack that absorbs sqrt rounding so no candidate the brute
  // force would keep is ever pruned.
  auto search = [&](auto&& self, std::int32_t node_index) -> void {
    if (node_index < 0) return;
    const Node& node = nodes_[static_cast<std::size_t>(node_index)];
    if (node.leaf_count > 0) {
      for (std::uint32_t i = 0; i < node.leaf_count; ++i) offer(tree_ids_[node.leaf_begin + i]);
      return;
    }
    offer(node.pivot);
    const double pivot_dist = std::sqrt(squared_distance(query, row_ptr(node.pivot), dim_));

    auto reachable = [&](double lower_bound) {
      const double tau =
          heap.full() ? std::sqrt(heap.worst().first) : std::numeric_limits<double>::infinity();
      const double slack = 1e-9 * (1.0 + pivot_dist + node.radius) + 1e-12;
      return lower_bound <= tau + slack;
    };
    auto visit_inner = [&] {
      if (reachable(pivot_dist - node.radius)) self(self, node.inner);
    };
    auto visit_outer = [&] {
      if (reachable(node.radius - pivot_dist)) self(self, node.outer);
    };

    if (pivot_dist <= node.radius) {
      visit_inner();
      visit_outer();
    } else {
      visit_outer();
      visit_inner();
    }
  };
  search(search, root_);
  return std::move(heap).sorted_ids();
}

}  // namespace grec
