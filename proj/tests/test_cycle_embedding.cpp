#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "hypme/cycle_embedding.hpp"
#include "hypme/error.hpp"
#include "hypme/hyperbolicity.hpp"
#include "oracles.hpp"

using namespace hypme;

TEST_CASE("embedding constants match a direct evaluation") {
  std::mt19937_64 rng(17);
  Graph g = add_random_chords(random_tree(30, rng), 3, rng);
  auto d = distance_matrix(g);
  auto o = oracle::distances(g);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 3 + uniform_below(rng, 10);
    std::vector<Vertex> images(n);
    std::vector<int> ints(n);
    for (std::size_t i = 0; i < n; ++i) ints[i] = int(images[i] = Vertex(uniform_below(rng, 30)));
    auto e = verify_embedding(d, images);
    auto [a, b] = oracle::lipschitz(o, ints);
    REQUIRE(e.a == a);
    REQUIRE(e.b == b);
    auto [i, j] = e.a_pair;
    CHECK(Rational(d(images[i], images[j]), cycle_distance(i, j, n)) == a);
  }
}

TEST_CASE("embeddings survive a JSON round trip and are re-verified") {
  auto d = distance_matrix(cycle_graph(8));
  std::vector<Vertex> images{0, 1, 2, 3, 4, 5, 6, 7};
  auto e = verify_embedding(d, images);
  CHECK(e.a == 1);
  CHECK(e.b == 1);
  auto j = to_json(e);
  j["a"] = "5/1";  // stored constants are ignored
  auto back = embedding_from_json(d, j);
  CHECK(back.a == 1);
  CHECK_THROWS(verify_embedding(d, std::vector<Vertex>{0, 1}));
  CHECK_THROWS(verify_embedding(d, std::vector<Vertex>{0, 1, 99}));
}

TEST_CASE("simple cycle enumeration agrees with the oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = add_random_chords(random_tree(8 + trial, rng), 1 + trial % 4, rng);
    std::set<std::vector<int>> got;
    bool complete = enumerate_simple_cycles(
        g,
        [&](std::span<const Vertex> c) {
          got.insert(std::vector<int>(c.begin(), c.end()));
          return true;
        },
        1'000'000'000);
    CHECK(complete);
    auto want = oracle::simple_cycles(g);
    CHECK(got == std::set<std::vector<int>>(want.begin(), want.end()));
    CHECK(got.size() == want.size());
  }
  std::size_t seen = 0;
  enumerate_simple_cycles(grid_graph(4, 4), [&](std::span<const Vertex>) { return ++seen < 3; }, 1'000'000);
  CHECK(seen == 3);
  CHECK_FALSE(enumerate_simple_cycles(grid_graph(6, 6), [](std::span<const Vertex>) { return true; }, 100));
}

TEST_CASE("fat cycles in grids and their absence in trees") {
  for (std::size_t k = 2; k <= 6; ++k) {
    Graph g = grid_graph(k + 1, k + 1);
    auto d = distance_matrix(g);
    auto r = find_fat_cycle(g, d, Rational(1, 2), 4 * k);
    REQUIRE(r.outcome == SearchOutcome::found);
    CHECK(r.embedding->n() >= 4 * k);
    CHECK(r.embedding->a >= Rational(1, 2));
    auto again = verify_embedding(d, r.embedding->images);
    CHECK(again.a == r.embedding->a);
  }
  Graph t = tree_graph(2, 4);
  auto r = find_fat_cycle(t, distance_matrix(t), Rational(1, 10), 4);
  CHECK(r.outcome == SearchOutcome::proven_absent);
  // C_6 has only itself as a cycle, so no length-8 cycle exists.
  Graph c = cycle_graph(6);
  SearchOptions exhaustive;
  exhaustive.mode = SearchMode::exhaustive;
  CHECK(find_fat_cycle(c, distance_matrix(c), Rational(1), 8, exhaustive).outcome == SearchOutcome::proven_absent);
  CHECK(find_fat_cycle(c, distance_matrix(c), Rational(1), 6, exhaustive).outcome == SearchOutcome::found);
}

TEST_CASE("search outcomes are reproducible") {
  Graph g = generate_graph("random-tree-chords:60,6,4");
  auto d = distance_matrix(g);
  auto a = find_fat_cycle(g, d, Rational(1, 3), 6);
  auto b = find_fat_cycle(g, d, Rational(1, 3), 6);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("obstruction bound arithmetic") {
  // (4 * 1 * 6 + 4 + 2) / 64
  CHECK(obstruction_bound(1, 1, 64) == Rational(30, 64));
  CHECK(obstruction_bound(0, 1, 64) == Rational(6, 64));
  // (4 * 1 * 9 + 4 + 4) / 256
  CHECK(obstruction_bound(1, 2, 256) == Rational(44, 256));
  CHECK_THROWS_AS(obstruction_bound(1, 1, 7), PreconditionError);
  CHECK_THROWS_AS(obstruction_bound(-1, 1, 8), PreconditionError);
  // Irrational log2 is rounded up.
  CHECK(obstruction_bound(1, 1, 6) > Rational(4 * 2 + 6, 6) + Rational(4, 6) * Rational(1, 2));
}

TEST_CASE("obstruction verdicts on cycles and grids") {
  for (std::size_t n = 4; n <= 20; n += 2) {
    Graph c = cycle_graph(n);
    auto d = distance_matrix(c);
    std::vector<Vertex> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = Vertex(i);
    auto e = verify_embedding(d, images);
    auto delta = certified_delta(thin_triangle_delta(d));
    CHECK(check_obstruction(e, delta).verdict == Verdict::consistent);
    // With delta = 0 a long isometric cycle violates the bound.
    if (n >= 8) CHECK(check_obstruction(e, 0).verdict == Verdict::violation);
  }
}
