#include "hypme/cycle_embedding.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "hypme/error.hpp"

namespace hypme {

CycleEmbedding verify_embedding(const DistanceMatrix& host, std::span<const Vertex> images) {
  const std::size_t n = images.size();
  if (n < 3) throw PreconditionError("cycle embeddings need n >= 3 images");
  for (auto v : images)
    if (v >= host.size()) throw PreconditionError("image vertex out of range");

  // Ratios are compared by cross-multiplication; both sides stay far below 2^62.
  std::int64_t a_num = std::numeric_limits<std::int32_t>::max(), a_den = 1;
  std::int64_t b_num = -1, b_den = 1;
  CycleEmbedding e;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = host.row(images[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto dc = static_cast<std::int64_t>(cycle_distance(i, j, n));
      std::int64_t dh = row[images[j]];
      if (dh * a_den < a_num * dc) {
        a_num = dh;
        a_den = dc;
        e.a_pair = {i, j};
      }
      if (dh * b_den > b_num * dc) {
        b_num = dh;
        b_den = dc;
        e.b_pair = {i, j};
      }
    }
  }
  e.images.assign(images.begin(), images.end());
  e.a = Rational(a_num, a_den);
  e.b = Rational(b_num, b_den);
  return e;
}

nlohmann::json to_json(const CycleEmbedding& e) {
  return {{"n", e.n()},
          {"images", e.images},
          {"a", to_string(e.a)},
          {"b", to_string(e.b)},
          {"a_pair", {e.a_pair.first, e.a_pair.second}},
          {"b_pair", {e.b_pair.first, e.b_pair.second}}};
}

CycleEmbedding embedding_from_json(const DistanceMatrix& host, const nlohmann::json& j) {
  try {
    auto images = j.at("images").get<std::vector<Vertex>>();
    return verify_embedding(host, images);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("invalid embedding JSON: ") + ex.what());
  }
}

bool enumerate_simple_cycles(const Graph& g,
                             const std::function<bool(std::span<const Vertex>)>& visit,
                             std::uint64_t budget, std::uint64_t* work_out) {
  const std::size_t n = g.vertex_count();
  std::vector<char> on_path(n, 0);
  std::vector<Vertex> path;
  std::vector<std::size_t> next;
  std::uint64_t work = 0;
  auto finish = [&](bool complete) {
    if (work_out) *work_out = work;
    return complete;
  };
  for (Vertex s = 0; s < n; ++s) {
    path.assign(1, s);
    next.assign(1, 0);
    on_path[s] = 1;
    while (!path.empty()) {
      Vertex v = path.back();
      auto nbrs = g.neighbors(v);
      std::size_t& i = next.back();
      if (i == nbrs.size()) {
        on_path[v] = 0;
        path.pop_back();
        next.pop_back();
        continue;
      }
      Vertex w = nbrs[i++];
      if (w == s) {
        if (path.size() >= 3 && path[1] < path.back() && !visit(path)) {
          for (auto u : path) on_path[u] = 0;
          return finish(false);
        }
        continue;
      }
      if (w < s || on_path[w]) continue;
      if (++work > budget) {
        for (auto u : path) on_path[u] = 0;
        return finish(false);
      }
      path.push_back(w);
      next.push_back(0);
      on_path[w] = 1;
    }
  }
  return finish(true);
}

std::string to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::found:
      return "found";
    case SearchOutcome::proven_absent:
      return "proven_absent";
    case SearchOutcome::budget_exhausted:
      return "budget_exhausted";
    case SearchOutcome::heuristic_exhausted:
      return "heuristic_exhausted";
  }
  return "unknown";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "automatic" || text == "auto") return SearchMode::automatic;
  if (text == "exhaustive") return SearchMode::exhaustive;
  if (text == "heuristic") return SearchMode::heuristic;
  throw ParseError("unknown search mode '" + std::string(text) + "'");
}

namespace {

class FatCycleSearch {
 public:
  FatCycleSearch(const Graph& g, const DistanceMatrix& d, const Rational& min_a, std::size_t min_n,
                 std::uint64_t budget)
      : g_(g), d_(d), min_a_(min_a), min_n_(min_n), budget_(budget) {}

  std::uint64_t work() const { return work_; }
  bool over_budget() const { return work_ > budget_; }
  const std::optional<CycleEmbedding>& best() const { return best_; }

  /// Geodesic bigons: pairs (u, v) joined by two internally disjoint
  /// geodesics, scanned by increasing distance.
  std::optional<CycleEmbedding> bigons() {
    const std::size_t n = d_.size();
    std::vector<std::tuple<std::int32_t, Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (2 * std::size_t(d_(u, v)) >= min_n_) pairs.emplace_back(d_(u, v), u, v);
    std::sort(pairs.begin(), pairs.end());
    work_ += pairs.size();
    for (auto [dist, u, v] : pairs) {
      if (over_budget()) return std::nullopt;
      auto cycle = bigon(u, v);
      if (!cycle) continue;
      if (auto hit = consider(*cycle)) return hit;
    }
    return std::nullopt;
  }

  /// Replaces single cycle vertices by common neighbours of their two
  /// cycle neighbours while this strictly increases a.
  std::optional<CycleEmbedding> improve() {
    if (!best_) return std::nullopt;
    CycleEmbedding current = *best_;
    bool improved = true;
    while (improved && !over_budget()) {
      improved = false;
      const std::size_t n = current.n();
      std::vector<char> used(d_.size(), 0);
      for (auto v : current.images) used[v] = 1;
      for (std::size_t i = 0; i < n && !improved; ++i) {
        Vertex prev = current.images[(i + n - 1) % n];
        Vertex nxt = current.images[(i + 1) % n];
        for (Vertex w : g_.neighbors(prev)) {
          if (used[w] || !g_.adjacent(w, nxt)) continue;
          auto images = current.images;
          images[i] = w;
          work_ += n * n / 2;
          auto candidate = verify_embedding(d_, images);
          if (candidate.a > current.a) {
            current = std::move(candidate);
            improved = true;
            break;
          }
          if (over_budget()) break;
        }
      }
      if (auto hit = consider(current.images)) return hit;
    }
    return std::nullopt;
  }

  std::optional<CycleEmbedding> consider(std::span<const Vertex> images) {
    if (images.size() < min_n_ || images.size() < 3) return std::nullopt;
    work_ += images.size() * images.size() / 2;
    auto e = verify_embedding(d_, images);
    if (!best_ || e.a > best_->a) best_ = e;
    if (e.a >= min_a_) return e;
    return std::nullopt;
  }

 private:
  std::optional<std::vector<Vertex>> bigon(Vertex u, Vertex v) {
    Path first = geodesic(d_, u, v);
    const std::size_t n = d_.size();
    std::vector<char> blocked(n, 0);
    for (std::size_t i = 1; i + 1 < first.vertices.size(); ++i) blocked[first.vertices[i]] = 1;
    std::vector<std::int32_t> to_first(n, std::numeric_limits<std::int32_t>::max());
    for (Vertex y : first.vertices) {
      auto row = d_.row(y);
      for (Vertex x = 0; x < n; ++x) to_first[x] = std::min(to_first[x], row[x]);
    }
    auto dv = d_.row(v);
    // Depth-first over the geodesic DAG, preferring steps far from `first`.
    std::vector<Vertex> path{u};
    std::vector<std::vector<Vertex>> options;
    auto steps_from = [&](Vertex x) {
      std::vector<Vertex> out;
      for (Vertex w : g_.neighbors(x))
        if (dv[w] == dv[x] - 1 && !blocked[w]) out.push_back(w);
      std::sort(out.begin(), out.end(), [&](Vertex p, Vertex q) {
        return std::tie(to_first[q], p) < std::tie(to_first[p], q);
      });
      std::reverse(out.begin(), out.end());
      return out;
    };
    options.push_back(steps_from(u));
    std::vector<char> dead(n, 0);
    while (!path.empty()) {
      if (over_budget()) return std::nullopt;
      ++work_;
      Vertex x = path.back();
      if (x == v) break;
      if (options.back().empty()) {
        dead[x] = 1;
        path.pop_back();
        options.pop_back();
        continue;
      }
      Vertex w = options.back().back();
      options.back().pop_back();
      if (dead[w]) continue;
      // A direct u-v edge would make the second path coincide with the first.
      if (w == v && path.size() == 1 && first.vertices.size() == 2) continue;
      path.push_back(w);
      options.push_back(w == v ? std::vector<Vertex>{} : steps_from(w));
    }
    if (path.empty() || path.back() != v) return std::nullopt;
    std::vector<Vertex> cycle = first.vertices;
    for (std::size_t i = path.size() - 2; i >= 1; --i) cycle.push_back(path[i]);
    if (cycle.size() < 3) return std::nullopt;
    return cycle;
  }

  const Graph& g_;
  const DistanceMatrix& d_;
  Rational min_a_;
  std::size_t min_n_;
  std::uint64_t budget_;
  std::uint64_t work_ = 0;
  std::optional<CycleEmbedding> best_;
};

SearchResult exhaustive_search(const Graph& g, const DistanceMatrix& d, const Rational& min_a,
                               std::size_t min_n, std::uint64_t budget) {
  SearchResult result;
  result.strategy = "exhaustive";
  std::optional<CycleEmbedding> hit;
  std::uint64_t work = 0;
  bool complete = enumerate_simple_cycles(
      g,
      [&](std::span<const Vertex> cycle) {
        if (cycle.size() < min_n) return true;
        auto e = verify_embedding(d, cycle);
        if (e.a >= min_a) {
          hit = std::move(e);
          return false;
        }
        return true;
      },
      budget, &work);
  result.work = work;
  if (hit) {
    result.outcome = SearchOutcome::found;
    result.embedding = std::move(hit);
  } else {
    result.outcome = complete ? SearchOutcome::proven_absent : SearchOutcome::budget_exhausted;
  }
  return result;
}

}  // namespace

SearchResult find_fat_cycle(const Graph& g, const DistanceMatrix& d, const Rational& min_a,
                            std::size_t min_n, const SearchOptions& options) {
  if (!g.is_connected()) throw PreconditionError("find_fat_cycle needs a connected host");
  if (d.size() != g.vertex_count()) throw PreconditionError("distance matrix does not match graph");

  SearchResult result;
  const std::size_t n = g.vertex_count();
  if (g.edge_count() + 1 == n) {
    result.outcome = SearchOutcome::proven_absent;
    result.strategy = "acyclic host";
    return result;
  }
  if (std::max<std::size_t>(min_n, 3) > n) {
    result.outcome = SearchOutcome::proven_absent;
    result.strategy = "cycle longer than host";
    return result;
  }
  if (options.mode == SearchMode::exhaustive) return exhaustive_search(g, d, min_a, min_n, options.budget);

  FatCycleSearch search(g, d, min_a, min_n, options.budget);
  auto hit = search.bigons();
  if (!hit && !search.over_budget()) hit = search.improve();
  if (hit) {
    result.outcome = SearchOutcome::found;
    result.embedding = std::move(hit);
    result.work = search.work();
    result.strategy = "geodesic bigons + local improvement";
    return result;
  }
  bool small = n <= options.exhaustive_limit;
  if (options.mode == SearchMode::automatic && small) {
    std::uint64_t used = std::min(search.work(), options.budget);
    auto exhaustive = exhaustive_search(g, d, min_a, min_n, options.budget - used);
    exhaustive.work += search.work();
    exhaustive.strategy = "geodesic bigons, then exhaustive";
    return exhaustive;
  }
  result.outcome =
      search.over_budget() ? SearchOutcome::budget_exhausted : SearchOutcome::heuristic_exhausted;
  result.work = search.work();
  result.strategy = "geodesic bigons + local improvement";
  return result;
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j{{"outcome", to_string(r.outcome)}, {"work", r.work}, {"strategy", r.strategy}};
  j["embedding"] = r.embedding ? to_json(*r.embedding) : nlohmann::json(nullptr);
  return j;
}

namespace {

Rational prop_bound_any(const Rational& delta, const Rational& b, std::uint64_t n) {
  Rational nn(n);
  return (4 * delta * log2_upper(b * nn) + 4 + 2 * b) / nn;
}

}  // namespace

Rational obstruction_bound(const Rational& delta, const Rational& b, std::uint64_t n) {
  if (b < 1) throw PreconditionError("obstruction bound needs b >= 1");
  if (n < 2 || n % 2 != 0) throw PreconditionError("obstruction bound needs an even n >= 2");
  if (delta < 0) throw PreconditionError("delta must be non-negative");
  return prop_bound_any(delta, b, n);
}

ObstructionReport check_obstruction(const CycleEmbedding& e, const Rational& delta) {
  if (delta < 0) throw PreconditionError("delta must be non-negative");
  ObstructionReport r;
  r.delta = delta;
  r.a = e.a;
  r.b = e.b;
  r.b_used = e.b < 1 ? Rational(1) : e.b;
  r.n = e.n();
  r.n_used = 2 * (r.n / 2);
  r.bound_prop = obstruction_bound(delta, r.b_used, r.n_used);
  r.bound_prop_half = prop_bound_any(delta, r.b_used, r.n / 2);

  Rational nn(static_cast<std::uint64_t>(r.n_used));
  Rational lhs = e.a * nn - 4 - 2 * r.b_used;
  auto cmp = compare_with_scaled_log2(lhs, 4 * delta, r.b_used * nn);
  bool violation = cmp ? *cmp > 0 : e.a > r.bound_prop;
  r.verdict = violation ? Verdict::violation : Verdict::consistent;

  r.cor_applicable = delta >= 1;
  Rational n_full(static_cast<std::uint64_t>(r.n));
  r.bound_cor = 6 * delta * ln_upper(n_full) / n_full;
  Rational cor_lower = 6 * delta * ln_lower(n_full) / n_full;
  if (e.a < cor_lower)
    r.cor_satisfied = true;
  else if (e.a >= r.bound_cor)
    r.cor_satisfied = false;
  return r;
}

nlohmann::json to_json(const ObstructionReport& r) {
  nlohmann::json j{{"delta", to_string(r.delta)},
                   {"a", to_string(r.a)},
                   {"b", to_string(r.b)},
                   {"b_used", to_string(r.b_used)},
                   {"n", r.n},
                   {"n_used", r.n_used},
                   {"bound_prop", to_string(r.bound_prop)},
                   {"bound_prop_half_length", to_string(r.bound_prop_half)},
                   {"cor_applicable", r.cor_applicable},
                   {"bound_cor", to_string(r.bound_cor)},
                   {"verdict", r.verdict == Verdict::violation ? "violation" : "consistent"}};
  j["cor_satisfied"] = r.cor_satisfied ? nlohmann::json(*r.cor_satisfied) : nlohmann::json(nullptr);
  return j;
}

}  // namespace hypme
