#include "grec/dataset.hpp"

#include <cmath>
#include <cstring>
#include <unordered_map>
#include <utility>

namespace grec {

namespace {

// Interns labels to dense ids in first-appearance order. Keeping the id
// order tied to row order (not name order) makes the partition of ids
// invariant under bijective label renaming.
void intern_labels(const std::vector<std::string>& labels, std::vector<std::uint32_t>& ids,
                   std::vector<std::string>& names, std::vector<std::uint64_t>& histogram) {
  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(labels.size());
  ids.reserve(labels.size());
  for (const std::string& label : labels) {
    auto [it, inserted] = index.try_emplace(label, static_cast<std::uint32_t>(names.size()));
    if (inserted) {
      names.push_back(label);
      histogram.push_back(0);
    }
    ids.push_back(it->second);
    ++histogram[it->second];
  }
}

}  // namespace

EmbeddingSet EmbeddingSet::validate(const std::vector<std::vector<double>>& rows,
                                    const std::vector<std::string>& labels) {
  if (rows.empty()) throw Error(ErrorKind::empty_input, "dataset has no rows");
  const std::size_t dim = rows.front().size();
  if (dim == 0) throw Error(ErrorKind::empty_input, "row 0 has no dimensions", 0);
  if (labels.size() != rows.size()) {
    throw Error(ErrorKind::label_mismatch,
                "label count " + std::to_string(labels.size()) + " does not match row count " +
                    std::to_string(rows.size()));
  }

  std::vector<float> packed;
  packed.reserve(rows.size() * dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) {
      throw Error(ErrorKind::dimension_mismatch,
                  "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                      " dims, expected " + std::to_string(dim),
                  r);
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const double value = rows[r][c];
      if (!std::isfinite(value)) {
        throw Error(ErrorKind::non_finite_value,
                    "non-finite value at (" + std::to_string(r) + ", " + std::to_string(c) + ")",
                    r, c);
      }
      const float narrowed = static_cast<float>(value);
      if (!std::isfinite(narrowed)) {
        throw Error(ErrorKind::non_finite_value,
                    "value at (" + std::to_string(r) + ", " + std::to_string(c) +
                        ") overflows 32-bit storage",
                    r, c);
      }
      packed.push_back(narrowed);
    }
  }
  return validate_packed(std::move(packed), dim, labels);
}

EmbeddingSet EmbeddingSet::validate_packed(std::vector<float> values, std::size_t dim,
                                           const std::vector<std::string>& labels) {
  if (values.empty() || labels.empty()) throw Error(ErrorKind::empty_input, "dataset has no rows");
  if (dim == 0) throw Error(ErrorKind::empty_input, "dimension is zero");
  if (values.size() % dim != 0) {
    throw Error(ErrorKind::dimension_mismatch,
                "packed value count " + std::to_string(values.size()) +
                    " is not a multiple of dim " + std::to_string(dim));
  }
  const std::size_t n = values.size() / dim;
  if (labels.size() != n) {
    throw Error(ErrorKind::label_mismatch,
                "label count " + std::to_string(labels.size()) + " does not match row count " +
                    std::to_string(n));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      const std::size_t r = i / dim;
      const std::size_t c = i % dim;
      throw Error(ErrorKind::non_finite_value,
                  "non-finite value at (" + std::to_string(r) + ", " + std::to_string(c) + ")", r,
                  c);
    }
  }

  EmbeddingSet set;
  set.values_ = std::move(values);
  set.dim_ = dim;
  intern_labels(labels, set.label_ids_, set.label_names_, set.histogram_);
  return set;
}

EmbeddingSet EmbeddingSet::subset(std::span<const std::uint32_t> row_ids) const {
  if (row_ids.empty()) throw Error(ErrorKind::empty_input, "subset selects no rows");

  EmbeddingSet out;
  out.dim_ = dim_;
  out.values_.resize(row_ids.size() * dim_);
  out.label_ids_.reserve(row_ids.size());

  // Keyed by old id rather than indexed over the full label space: grouped
  // evaluation takes many small subsets of a large set, and an O(label_count)
  // allocation per subset would put an n^2 term under the linear-scaling
  // claim.
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  remap.reserve(std::min<std::size_t>(row_ids.size(), label_names_.size()));
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    const std::uint32_t src = row_ids[i];
    if (src >= rows()) internal_violation("subset row id out of range");
    std::memcpy(out.values_.data() + i * dim_, values_.data() + std::size_t{src} * dim_,
                dim_ * sizeof(float));
    const std::uint32_t old_id = label_ids_[src];
    auto [it, inserted] = remap.try_emplace(old_id, static_cast<std::uint32_t>(out.label_names_.size()));
    if (inserted) {
      out.label_names_.push_back(label_names_[old_id]);
      out.histogram_.push_back(0);
    }
    out.label_ids_.push_back(it->second);
    ++out.histogram_[it->second];
  }
  return out;
}

}  // namespace grec
