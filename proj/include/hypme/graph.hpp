#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hypme {

using Vertex = std::uint32_t;
using VertexPair = std::pair<Vertex, Vertex>;

/// Finite simple undirected graph on dense vertex indices 0..n-1.
/// Adjacency lists are kept sorted; labels are only used for reporting.
class Graph {
 public:
  Graph() = default;
  /// Loops are rejected, duplicate edges (in either orientation) are merged.
  Graph(std::size_t vertex_count, std::span<const VertexPair> edges);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const;
  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<VertexPair> edges() const;

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);

  bool is_connected() const;
  /// Component id per vertex; ids are numbered by smallest member.
  std::vector<std::uint32_t> components() const;
  /// Induced subgraph on `keep` (renumbered in the given order).
  Graph induced(std::span<const Vertex> keep) const;
  /// Largest connected component (ties: the one with the smallest vertex).
  Graph largest_component() const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::string> labels_;
  std::size_t edge_count_ = 0;
};

struct LoadOptions {
  bool largest_component = false;
};

/// Parses "u v" per line; '#' starts a comment. Vertices are 0..max id.
Graph load_graph(std::string_view edge_list_text, const LoadOptions& options = {});
std::string to_edge_list(const Graph& g);

nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

/// Default memory guard for dense distance storage.
inline constexpr std::size_t kDefaultMaxVertices = 20000;

/// All-pairs unit-length shortest path distances, row-major n x n.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  std::size_t size() const { return n_; }
  std::int32_t operator()(Vertex u, Vertex v) const { return data_[std::size_t(u) * n_ + v]; }
  std::span<const std::int32_t> row(Vertex u) const {
    return {data_.data() + std::size_t(u) * n_, n_};
  }
  std::int32_t diameter() const;

  friend DistanceMatrix distance_matrix(const Graph& g, std::size_t max_vertices);

 private:
  std::size_t n_ = 0;
  std::vector<std::int32_t> data_;
};

/// Exact BFS distances from every source. Throws if g is disconnected or
/// larger than max_vertices.
DistanceMatrix distance_matrix(const Graph& g, std::size_t max_vertices = kDefaultMaxVertices);

/// G(u,v) = {x : d(u,x) + d(x,v) = d(u,v)}, ascending.
std::vector<Vertex> geodesic_points(const DistanceMatrix& d, Vertex u, Vertex v);

/// A discrete path v_0..v_l.
struct Path {
  std::vector<Vertex> vertices;
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// True when consecutive vertices are adjacent and the path has length >= 1.
bool is_valid_path(const DistanceMatrix& d, const Path& p);

/// One discrete geodesic from u to v; at each step moves to the smallest
/// neighbor that is one step closer to v.
Path geodesic(const DistanceMatrix& d, Vertex u, Vertex v);

/// Concatenation of geodesics between consecutive images. Equal consecutive
/// images contribute nothing, so a single image gives a length-0 path.
Path direct_image_path(const DistanceMatrix& d, std::span<const Vertex> images);

// Generators.
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
/// Complete tree: every internal vertex has `branching` children; depth 0 is one vertex.
Graph tree_graph(std::size_t branching, std::size_t depth);
/// w x h grid; vertex (x, y) has index y * w + x.
Graph grid_graph(std::size_t width, std::size_t height);
/// Uniform random labelled tree (Pruefer sequence).
Graph random_tree(std::size_t n, std::mt19937_64& rng);
/// Adds `count` chords between non-adjacent vertex pairs chosen uniformly.
Graph add_random_chords(const Graph& g, std::size_t count, std::mt19937_64& rng);

/// Uniform integer in [0, bound) independent of the standard library's
/// distribution implementation, so seeded runs agree across platforms.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Parses "tree:b,d", "grid:w,h", "cycle:n", "path:n", "random-tree:n,seed",
/// and "random-tree-chords:n,k,seed".
Graph generate_graph(std::string_view spec);

}  // namespace hypme
