#include <algorithm>
#include <random>

#include "doctest.h"
#include "hypme/error.hpp"
#include "hypme/graph.hpp"
#include "oracles.hpp"

using namespace hypme;

TEST_CASE("edge lists load with comments and reject junk") {
  Graph g = load_graph("# square\n0 1\n1 2\n2 3 # closing\n3 0\n");
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.adjacent(3, 0));
  CHECK_THROWS_AS(load_graph("0 1\n1 x\n"), ParseError);
  CHECK_THROWS_AS(load_graph("0 0\n"), ParseError);
  CHECK_THROWS_AS(load_graph("0 1 2\n"), ParseError);
  CHECK_THROWS_AS(load_graph("\n# nothing\n"), ParseError);
  CHECK_THROWS_AS(load_graph("0 1\n2 3\n"), PreconditionError);
  LoadOptions keep;
  keep.largest_component = true;
  CHECK(load_graph("0 1\n2 3\n3 4\n", keep).vertex_count() == 3);
}

TEST_CASE("edge lists and JSON round-trip") {
  Graph g = grid_graph(3, 4);
  Graph back = load_graph(to_edge_list(g));
  CHECK(back.edges() == g.edges());
  CHECK(graph_from_json(to_json(g)).edges() == g.edges());
}

TEST_CASE("generators produce the expected shapes") {
  CHECK(tree_graph(2, 3).vertex_count() == 15);
  CHECK(tree_graph(2, 3).edge_count() == 14);
  CHECK(grid_graph(4, 5).edge_count() == 3 * 5 + 4 * 4);
  CHECK(cycle_graph(7).edge_count() == 7);
  CHECK(path_graph(7).edge_count() == 6);
  CHECK(generate_graph("grid:3,3").vertex_count() == 9);
  CHECK_THROWS_AS(generate_graph("torus:3"), ParseError);
  CHECK_THROWS_AS(generate_graph("grid:3"), ParseError);
  Graph a = generate_graph("random-tree:50,7");
  Graph b = generate_graph("random-tree:50,7");
  CHECK(a.edges() == b.edges());
  CHECK(a.edge_count() == 49);
  CHECK(a.is_connected());
  Graph c = generate_graph("random-tree-chords:40,3,1");
  CHECK(c.edge_count() == 42);
}

TEST_CASE("BFS distances agree with Floyd-Warshall") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = add_random_chords(random_tree(30 + trial, rng), trial % 5, rng);
    auto d = distance_matrix(g);
    auto o = oracle::distances(g);
    for (Vertex u = 0; u < g.vertex_count(); ++u)
      for (Vertex v = 0; v < g.vertex_count(); ++v) REQUIRE(d(u, v) == o[u][v]);
  }
}

TEST_CASE("geodesics are shortest paths and intervals match") {
  Graph g = grid_graph(5, 4);
  auto d = distance_matrix(g);
  auto o = oracle::distances(g);
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (u == v) continue;
      Path p = geodesic(d, u, v);
      CHECK(p.length() == std::size_t(d(u, v)));
      CHECK(is_valid_path(d, p));
      auto pts = geodesic_points(d, u, v);
      std::sort(pts.begin(), pts.end());
      auto want = oracle::interval(o, int(u), int(v));
      CHECK(std::vector<int>(pts.begin(), pts.end()) == want);
    }
}

TEST_CASE("induced subgraphs and components") {
  Graph g(6, std::vector<VertexPair>{{0, 1}, {1, 2}, {3, 4}});
  CHECK_FALSE(g.is_connected());
  CHECK(g.largest_component().vertex_count() == 3);
  std::vector<Vertex> keep{0, 1};
  CHECK(g.induced(keep).edge_count() == 1);
}
