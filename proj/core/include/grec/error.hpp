#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace grec {

enum class ErrorKind {
  invalid_argument,     // bad parameter values (k = 0, alpha outside (0,1), ...)
  dimension_mismatch,   // ragged rows
  non_finite_value,     // NaN or infinity in an embedding cell
  label_mismatch,       // label count != row count
  empty_input,
  zero_norm_row,        // cosine distance over an all-zero vector
  out_of_range,         // k exceeds the gallery size, bad row id
  singleton_label,      // singleton label under the error policy
  no_evaluable_queries,
  config_mismatch,      // reports with different metric/k/group size
  insufficient_groups,
  io_failure,           // unreadable or unwritable path
  bad_format,           // malformed dataset or report file
  internal,             // invariant violation; the CLI maps this to exit 2
};

// Every failure in the library surfaces as an Error. `row`/`column` are set
// when the failure points at a specific cell of the input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  Error(ErrorKind kind, std::string message, std::size_t row)
      : std::runtime_error(std::move(message)), kind_(kind), row_(row) {}
  Error(ErrorKind kind, std::string message, std::size_t row, std::size_t column)
      : std::runtime_error(std::move(message)), kind_(kind), row_(row), column_(column) {}

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

[[noreturn]] inline void internal_violation(const std::string& what) {
  throw Error(ErrorKind::internal, "internal invariant violated: " + what);
}

}  // namespace grec
