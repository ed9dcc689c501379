#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grec/error.hpp"

namespace grec {

// Immutable labeled embedding matrix. Vectors are stored as 32-bit floats
// (matching the binary file format); distance and statistics arithmetic
// widens to double. Labels are interned to dense ids in order of first
// appearance; original names are kept for reporting and serialization.
//
// Instances are safe to share across concurrent readers.
class EmbeddingSet {
 public:
  // Validates and adopts per-row data. Throws Error on ragged rows,
  // non-finite values (including doubles that overflow float32 storage),
  // label/row count mismatch, or empty input.
  static EmbeddingSet validate(const std::vector<std::vector<double>>& rows,
                               const std::vector<std::string>& labels);

  // Same checks for data that is already packed row-major at a fixed
  // dimension.
  static EmbeddingSet validate_packed(std::vector<float> values, std::size_t dim,
                                      const std::vector<std::string>& labels);

  std::size_t rows() const { return label_ids_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t label_count() const { return label_names_.size(); }

  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  const std::vector<float>& values() const { return values_; }

  std::uint32_t label_id(std::size_t row) const { return label_ids_[row]; }
  const std::string& label_name(std::uint32_t id) const { return label_names_[id]; }
  const std::vector<std::uint32_t>& label_ids() const { return label_ids_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  // Samples per label id; computed once during validation.
  const std::vector<std::uint64_t>& label_histogram() const { return histogram_; }

  // New set holding the given rows in the given order. Label ids are
  // re-interned densely; names are preserved.
  EmbeddingSet subset(std::span<const std::uint32_t> row_ids) const;

 private:
  EmbeddingSet() = default;

  std::vector<float> values_;  // rows() x dim_, row-major
  std::size_t dim_ = 0;
  std::vector<std::uint32_t> label_ids_;
  std::vector<std::string> label_names_;
  std::vector<std::uint64_t> histogram_;
};

}  // namespace grec
