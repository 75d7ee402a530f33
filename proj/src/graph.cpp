#include "hypme/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "hypme/error.hpp"
#include "hypme/parallel.hpp"

namespace hypme {

Graph::Graph(std::size_t vertex_count, std::span<const VertexPair> edges)
    : adjacency_(vertex_count) {
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count)
      throw PreconditionError("edge endpoint out of range");
    if (u == v) throw PreconditionError("loop at vertex " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    edge_count_ += nbrs.size();
  }
  edge_count_ /= 2;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<VertexPair> Graph::edges() const {
  std::vector<VertexPair> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < adjacency_.size(); ++u)
    for (Vertex v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

void Graph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != vertex_count())
    throw PreconditionError("label count does not match vertex count");
  labels_ = std::move(labels);
}

std::vector<std::uint32_t> Graph::components() const {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(vertex_count(), kUnset);
  std::uint32_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < vertex_count(); ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adjacency_[v])
        if (comp[w] == kUnset) {
          comp[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return comp;
}

bool Graph::is_connected() const {
  if (vertex_count() == 0) return false;
  auto comp = components();
  return std::all_of(comp.begin(), comp.end(), [](auto c) { return c == 0; });
}

Graph Graph::induced(std::span<const Vertex> keep) const {
  std::vector<std::int64_t> index(vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
  std::vector<VertexPair> sub;
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (Vertex w : adjacency_[keep[i]])
      if (index[w] > static_cast<std::int64_t>(i)) sub.emplace_back(Vertex(i), Vertex(index[w]));
  Graph out(keep.size(), sub);
  if (!labels_.empty()) {
    std::vector<std::string> labels;
    for (Vertex v : keep) labels.push_back(labels_[v]);
    out.labels_ = std::move(labels);
  }
  return out;
}

Graph Graph::largest_component() const {
  auto comp = components();
  if (comp.empty()) return {};
  std::uint32_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < comp.size(); ++v)
    if (comp[v] == best) keep.push_back(v);
  return induced(keep);
}

Graph load_graph(std::string_view text, const LoadOptions& options) {
  std::vector<VertexPair> edges;
  std::size_t max_id = 0;
  bool any = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::uint64_t> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      std::uint64_t value = 0;
      auto token = line.substr(i, j - i);
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() ||
          value >= std::numeric_limits<Vertex>::max())
        throw ParseError("line " + std::to_string(line_no) + ": invalid vertex id '" +
                         std::string(token) + "'");
      fields.push_back(value);
      i = j;
    }
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected two vertex ids");
    if (fields[0] == fields[1])
      throw ParseError("line " + std::to_string(line_no) + ": loop edges are not allowed");
    edges.emplace_back(Vertex(fields[0]), Vertex(fields[1]));
    max_id = std::max<std::size_t>({max_id, fields[0], fields[1]});
    any = true;
  }
  if (!any) throw ParseError("edge list contains no edges");
  Graph g(max_id + 1, edges);
  if (!g.is_connected()) {
    if (!options.largest_component)
      throw PreconditionError("graph is disconnected (use --largest-component to extract one)");
    return g.largest_component();
  }
  return g;
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  nlohmann::json j{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
  if (!g.labels().empty()) j["labels"] = g.labels();
  return j;
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    auto n = j.at("n").get<std::size_t>();
    std::vector<VertexPair> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair");
      edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    Graph g(n, edges);
    if (j.contains("labels")) g.set_labels(j["labels"].get<std::vector<std::string>>());
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("invalid graph JSON: ") + ex.what());
  }
}

std::int32_t DistanceMatrix::diameter() const {
  return data_.empty() ? 0 : *std::max_element(data_.begin(), data_.end());
}

DistanceMatrix distance_matrix(const Graph& g, std::size_t max_vertices) {
  std::size_t n = g.vertex_count();
  if (n == 0) throw PreconditionError("distance matrix of an empty graph");
  if (n > max_vertices)
    throw PreconditionError("graph has " + std::to_string(n) + " vertices, above the limit of " +
                            std::to_string(max_vertices));
  DistanceMatrix d;
  d.n_ = n;
  d.data_.assign(n * n, -1);
  parallel_for(0, n, [&](std::size_t s) {
    std::int32_t* row = d.data_.data() + s * n;
    std::vector<Vertex> frontier{Vertex(s)};
    row[s] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      Vertex v = frontier[head];
      for (Vertex w : g.neighbors(v))
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          frontier.push_back(w);
        }
    }
  });
  if (std::find(d.data_.begin(), d.data_.end(), -1) != d.data_.end())
    throw PreconditionError("graph is disconnected");
  return d;
}

std::vector<Vertex> geodesic_points(const DistanceMatrix& d, Vertex u, Vertex v) {
  std::vector<Vertex> out;
  auto du = d.row(u);
  auto dv = d.row(v);
  std::int32_t target = d(u, v);
  for (Vertex x = 0; x < d.size(); ++x)
    if (du[x] + dv[x] == target) out.push_back(x);
  return out;
}

bool is_valid_path(const DistanceMatrix& d, const Path& p) {
  if (p.vertices.size() < 2) return false;
  for (auto v : p.vertices)
    if (v >= d.size()) return false;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
    if (d(p.vertices[i], p.vertices[i + 1]) != 1) return false;
  return true;
}

Path geodesic(const DistanceMatrix& d, Vertex u, Vertex v) {
  Path p;
  p.vertices.push_back(u);
  Vertex cur = u;
  auto dv = d.row(v);
  while (cur != v) {
    auto dc = d.row(cur);
    Vertex next = cur;
    for (Vertex w = 0; w < d.size(); ++w)
      if (dc[w] == 1 && dv[w] == dv[cur] - 1) {
        next = w;
        break;
      }
    cur = next;
    p.vertices.push_back(cur);
  }
  return p;
}

Path direct_image_path(const DistanceMatrix& d, std::span<const Vertex> images) {
  Path out;
  if (images.empty()) return out;
  out.vertices.push_back(images.front());
  for (std::size_t i = 0; i + 1 < images.size(); ++i) {
    if (images[i] == images[i + 1]) continue;
    Path leg = geodesic(d, images[i], images[i + 1]);
    out.vertices.insert(out.vertices.end(), leg.vertices.begin() + 1, leg.vertices.end());
  }
  return out;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw PreconditionError("cycle graphs need n >= 3 (C_2 would need a multi-edge)");
  std::vector<VertexPair> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(Vertex(i), Vertex((i + 1) % n));
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  if (n == 0) throw PreconditionError("path graph needs at least one vertex");
  std::vector<VertexPair> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(Vertex(i), Vertex(i + 1));
  return Graph(n, edges);
}

Graph tree_graph(std::size_t branching, std::size_t depth) {
  if (branching == 0 && depth > 0) throw PreconditionError("tree branching must be positive");
  std::vector<VertexPair> edges;
  std::size_t count = 1;
  std::size_t level_start = 0;
  std::size_t level_size = 1;
  for (std::size_t level = 0; level < depth; ++level) {
    std::size_t next_start = count;
    for (std::size_t i = 0; i < level_size; ++i)
      for (std::size_t c = 0; c < branching; ++c) edges.emplace_back(Vertex(level_start + i), Vertex(count++));
    level_start = next_start;
    level_size *= branching;
    if (count > kDefaultMaxVertices * 50) throw PreconditionError("tree too large");
  }
  return Graph(count, edges);
}

Graph grid_graph(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw PreconditionError("grid dimensions must be positive");
  std::vector<VertexPair> edges;
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      auto v = Vertex(y * width + x);
      if (x + 1 < width) edges.emplace_back(v, v + 1);
      if (y + 1 < height) edges.emplace_back(v, Vertex(v + width));
    }
  return Graph(width * height, edges);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("uniform_below needs a positive bound");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

Graph random_tree(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw PreconditionError("random tree needs at least one vertex");
  if (n == 1) return Graph(1, {});
  if (n == 2) {
    VertexPair e{0, 1};
    return Graph(2, std::span(&e, 1));
  }
  std::vector<Vertex> pruefer(n - 2);
  for (auto& x : pruefer) x = Vertex(uniform_below(rng, n));
  std::vector<std::size_t> degree(n, 1);
  for (auto x : pruefer) ++degree[x];
  std::vector<VertexPair> edges;
  // Leaves are taken smallest first; a min-heap keeps decoding O(n log n).
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
  for (Vertex v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  for (auto x : pruefer) {
    Vertex leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1) leaves.push(x);
  }
  Vertex a = leaves.top();
  leaves.pop();
  Vertex b = leaves.top();
  edges.emplace_back(a, b);
  return Graph(n, edges);
}

Graph add_random_chords(const Graph& g, std::size_t count, std::mt19937_64& rng) {
  std::size_t n = g.vertex_count();
  auto edges = g.edges();
  std::size_t max_edges = n * (n - 1) / 2;
  if (edges.size() + count > max_edges) throw PreconditionError("not enough room for chords");
  Graph current = g;
  for (std::size_t added = 0; added < count;) {
    auto u = Vertex(uniform_below(rng, n));
    auto v = Vertex(uniform_below(rng, n));
    if (u == v || current.adjacent(u, v)) continue;
    edges.emplace_back(std::min(u, v), std::max(u, v));
    current = Graph(n, edges);
    ++added;
  }
  if (!g.labels().empty()) current.set_labels(g.labels());
  return current;
}

namespace {

std::vector<std::uint64_t> parse_params(std::string_view text, std::string_view spec) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto token = text.substr(pos, comma - pos);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError("invalid generator parameters in '" + std::string(spec) + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Graph generate_graph(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("generator spec must look like kind:params, got '" + std::string(spec) + "'");
  auto kind = spec.substr(0, colon);
  auto params = parse_params(spec.substr(colon + 1), spec);
  auto expect = [&](std::size_t count) {
    if (params.size() != count)
      throw ParseError("generator '" + std::string(kind) + "' expects " + std::to_string(count) +
                       " parameters");
  };
  if (kind == "tree") {
    expect(2);
    return tree_graph(params[0], params[1]);
  }
  if (kind == "grid") {
    expect(2);
    return grid_graph(params[0], params[1]);
  }
  if (kind == "cycle") {
    expect(1);
    return cycle_graph(params[0]);
  }
  if (kind == "path") {
    expect(1);
    return path_graph(params[0]);
  }
  if (kind == "random-tree") {
    expect(2);
    std::mt19937_64 rng(params[1]);
    return random_tree(params[0], rng);
  }
  if (kind == "random-tree-chords") {
    expect(3);
    std::mt19937_64 rng(params[2]);
    return add_random_chords(random_tree(params[0], rng), params[1], rng);
  }
  throw ParseError("unknown graph generator '" + std::string(kind) + "'");
}

}  // namespace hypme
