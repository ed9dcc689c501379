#include <doctest.h>

#include <cmath>
#include <limits>

#include "grec/dataset.hpp"
#include "grec/rng.hpp"
#include "test_support.hpp"

using grec::EmbeddingSet;
using grec::Error;
using grec::ErrorKind;

TEST_CASE("well-formed input validates and interns labels") {
  const EmbeddingSet set = grec_test::make_set(
      {{0.0, 1.0}, {0.1, 0.9}, {5.0, 5.0}, {5.1, 4.9}}, {"A", "A", "B", "B"});
  CHECK(set.rows() == 4);
  CHECK(set.dim() == 2);
  CHECK(set.label_count() == 2);
  CHECK(set.label_id(0) == set.label_id(1));
  CHECK(set.label_id(2) == set.label_id(3));
  CHECK(set.label_id(0) != set.label_id(2));
  CHECK(set.label_name(set.label_id(0)) == "A");
  CHECK(set.label_histogram() == std::vector<std::uint64_t>{2, 2});
}

TEST_CASE("ragged rows are rejected naming the row") {
  try {
    grec_test::make_set({{0.0, 1.0}, {1.0, 2.0}, {1.0, 2.0, 3.0}}, {"a", "b", "c"});
    FAIL("expected a dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension_mismatch);
    CHECK(e.row() == 2);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("NaN cell is rejected naming (row, column)") {
  try {
    grec_test::make_set({{0.0, 1.0}, {std::nan(""), 2.0}}, {"a", "b"});
    FAIL("expected a non-finite error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite_value);
    CHECK(e.row() == 1);
    CHECK(e.column() == 0);
    CHECK(std::string(e.what()).find("(1, 0)") != std::string::npos);
  }
}

TEST_CASE("infinity and float32 overflow are rejected") {
  CHECK_THROWS_AS(
      grec_test::make_set({{std::numeric_limits<double>::infinity()}}, {"a"}), Error);
  try {
    grec_test::make_set({{1e300}}, {"a"});  // finite double, overflows float storage
    FAIL("expected an overflow error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite_value);
  }
}

TEST_CASE("label count mismatch and empty input are structured errors") {
  try {
    grec_test::make_set({{0.0}, {1.0}}, {"only-one"});
    FAIL("expected a label mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::label_mismatch);
  }
  CHECK_THROWS_AS(grec_test::make_set({}, {}), Error);
  CHECK_THROWS_AS(EmbeddingSet::validate_packed({}, 4, {}), Error);
}

TEST_CASE("interning follows first appearance, not name order") {
  const EmbeddingSet set =
      grec_test::make_set({{0.0}, {1.0}, {2.0}}, {"zebra", "apple", "zebra"});
  CHECK(set.label_id(0) == 0);
  CHECK(set.label_id(1) == 1);
  CHECK(set.label_id(2) == 0);
  CHECK(set.label_name(0) == "zebra");
}

TEST_CASE("subset preserves row order and re-interns densely") {
  const EmbeddingSet set = grec_test::make_set(
      {{0.0}, {1.0}, {2.0}, {3.0}}, {"A", "B", "C", "B"});
  const std::vector<std::uint32_t> pick = {3, 1, 2};
  const EmbeddingSet sub = set.subset(pick);
  CHECK(sub.rows() == 3);
  CHECK(sub.row(0)[0] == 3.0f);
  CHECK(sub.row(1)[0] == 1.0f);
  CHECK(sub.label_name(sub.label_id(0)) == "B");
  CHECK(sub.label_id(0) == sub.label_id(1));  // both "B"
  CHECK(sub.label_count() == 2);
}

// Validation totality: malformed input must end in a structured Error, never
// anything else.
TEST_CASE("validation is total over randomized malformed inputs") {
  grec::Rng rng(20240817);
  int valid = 0;
  int structured = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.below(5);            // may be 0
    const std::size_t dim = rng.below(4);          // may be 0
    const std::size_t label_count = rng.below(6);  // may disagree with n
    std::vector<std::vector<double>> rows(n);
    for (auto& row : rows) {
      std::size_t row_dim = dim;
      if (rng.below(4) == 0) row_dim += rng.below(3);  // ragged sometimes
      row.resize(row_dim);
      for (double& v : row) {
        switch (rng.below(8)) {
          case 0: v = std::nan(""); break;
          case 1: v = std::numeric_limits<double>::infinity(); break;
          case 2: v = 1e300; break;
          default: v = rng.uniform(-10.0, 10.0);
        }
      }
    }
    std::vector<std::string> labels(label_count, "x");
    try {
      const EmbeddingSet set = grec::EmbeddingSet::validate(rows, labels);
      ++valid;
      CHECK(set.rows() >= 1);
      CHECK(set.dim() >= 1);
      CHECK(set.label_count() >= 1);
      CHECK(set.label_count() <= set.rows());
      for (std::size_t i = 0; i < set.rows() * set.dim(); ++i) {
        CHECK(std::isfinite(set.values()[i]));
      }
    } catch (const Error&) {
      ++structured;
    }
  }
  CHECK(valid + structured == 300);
  CHECK(structured > 0);  // the generator does produce garbage
}
