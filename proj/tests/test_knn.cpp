#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "grec/knn.hpp"
#include "grec/rng.hpp"
#include "test_support.hpp"

using grec::Backend;
using grec::Distance;
using grec::Error;
using grec::ErrorKind;
using grec::NeighborIndex;

TEST_CASE("1-D hand example: nearest neighbor of 0 is 1") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 10.0, 11.0}, {"a", "a", "b", "b"});
  for (const Backend backend : {Backend::brute_force, Backend::vp_tree}) {
    const NeighborIndex index(set, backend, Distance::squared_euclidean);
    CHECK(index.query(0, 1, true) == std::vector<std::uint32_t>{1});
    CHECK(index.query(0, 3, true) == std::vector<std::uint32_t>{1, 2, 3});
  }
}

TEST_CASE("equidistant candidates break ties by ascending row id") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 2.0}, {"a", "b", "c"});
  for (const Backend backend : {Backend::brute_force, Backend::vp_tree}) {
    const NeighborIndex index(set, backend, Distance::squared_euclidean);
    CHECK(index.query(1, 2, true) == std::vector<std::uint32_t>{0, 2});
  }
}

TEST_CASE("k exceeding the gallery is an error, not a clamp") {
  const auto set = grec_test::make_set_1d({0.0, 1.0, 2.0}, {"a", "b", "c"});
  const NeighborIndex index(set, Backend::brute_force, Distance::squared_euclidean);
  CHECK_THROWS_AS(index.query(0, 3, true), Error);   // gallery is n-1 = 2
  CHECK_NOTHROW(index.query(0, 3, false));
  CHECK_THROWS_AS(index.query(0, 4, false), Error);
  CHECK_THROWS_AS(index.query(0, 0, true), Error);
}

TEST_CASE("zero-norm row under cosine reports the row") {
  try {
    const auto set = grec_test::make_set({{1.0, 0.0}, {0.0, 0.0}}, {"a", "b"});
    NeighborIndex index(set, Backend::brute_force, Distance::cosine);
    FAIL("expected zero-norm error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_norm_row);
    CHECK(e.row() == 1);
  }
}

TEST_CASE("cosine ranks by angle, not by magnitude") {
  // Row 1 points the same way as the query with a different magnitude; row 2
  // is closer in L2 but at a wider angle.
  const auto set =
      grec_test::make_set({{1.0, 0.0}, {10.0, 0.1}, {0.9, 0.5}}, {"q", "same", "off"});
  for (const Backend backend : {Backend::brute_force, Backend::vp_tree}) {
    const NeighborIndex cosine(set, backend, Distance::cosine);
    CHECK(cosine.query(0, 1, true) == std::vector<std::uint32_t>{1});
    const NeighborIndex l2(set, backend, Distance::squared_euclidean);
    CHECK(l2.query(0, 1, true) == std::vector<std::uint32_t>{2});
  }
}

TEST_CASE("backends agree exactly on random data, ties included") {
  grec::Rng rng(20240501);
  for (int trial = 0; trial < 60; ++trial) {
    grec_test::RandomSetOptions options;
    options.max_rows = 96;
    options.lattice = trial % 2 == 1;
    options.duplicate_rows = trial % 3 == 0;
    const auto set = grec_test::random_set(rng, options);
    const Distance distance = Distance::squared_euclidean;
    const NeighborIndex brute(set, Backend::brute_force, distance);
    const NeighborIndex tree(set, Backend::vp_tree, distance);
    for (int q = 0; q < 10; ++q) {
      const auto query = static_cast<std::uint32_t>(rng.below(set.rows()));
      const auto k = static_cast<std::uint32_t>(1 + rng.below(set.rows() - 1));
      const bool exclude_self = rng.below(2) == 0;
      if (!exclude_self && k > set.rows()) continue;
      const auto expected = brute.query(query, k, exclude_self);
      CHECK(tree.query(query, k, exclude_self) == expected);
      CHECK(expected == grec_test::reference_knn(set, query, k, exclude_self));
    }
  }
}

TEST_CASE("returned neighbors have non-decreasing distances (property)") {
  grec::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = grec_test::random_set(rng);
    const NeighborIndex index(set, Backend::vp_tree, Distance::squared_euclidean);
    const auto query = static_cast<std::uint32_t>(rng.below(set.rows()));
    const auto k = static_cast<std::uint32_t>(1 + rng.below(set.rows() - 1));
    const auto ids = index.query(query, k, true);
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      CHECK(index.pair_distance(query, ids[i]) <= index.pair_distance(query, ids[i + 1]));
    }
  }
}

TEST_CASE("exclude_self never returns the query row (property)") {
  grec::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    grec_test::RandomSetOptions options;
    options.duplicate_rows = true;  // self-distance ties with duplicates
    const auto set = grec_test::random_set(rng, options);
    const NeighborIndex index(set, trial % 2 ? Backend::vp_tree : Backend::brute_force,
                              Distance::squared_euclidean);
    const auto query = static_cast<std::uint32_t>(rng.below(set.rows()));
    const auto ids = index.query(query, static_cast<std::uint32_t>(set.rows() - 1), true);
    CHECK(std::find(ids.begin(), ids.end(), query) == ids.end());
  }
}

TEST_CASE("permuting rows permutes neighbor labels, not ranks") {
  grec::Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    // Continuous coordinates: exact ties have probability zero.
    const auto set = grec_test::random_set(rng);
    std::vector<std::uint32_t> perm(set.rows());
    std::iota(perm.begin(), perm.end(), 0u);
    grec::shuffle(perm, rng);
    const auto permuted = set.subset(perm);

    const NeighborIndex index(set, Backend::vp_tree, Distance::squared_euclidean);
    const NeighborIndex permuted_index(permuted, Backend::vp_tree, Distance::squared_euclidean);

    // Row perm[i] of the original is row i of the permuted set.
    std::vector<std::uint32_t> where(set.rows());
    for (std::uint32_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;

    const auto query = static_cast<std::uint32_t>(rng.below(set.rows()));
    const auto k = static_cast<std::uint32_t>(1 + rng.below(set.rows() - 1));
    const auto original = index.query(query, k, true);
    const auto shuffled = permuted_index.query(where[query], k, true);
    REQUIRE(original.size() == shuffled.size());
    for (std::size_t r = 0; r < original.size(); ++r) {
      CHECK(set.label_name(set.label_id(original[r])) ==
            permuted.label_name(permuted.label_id(shuffled[r])));
    }
  }
}
