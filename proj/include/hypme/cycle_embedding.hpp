#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypme/graph.hpp"
#include "hypme/numeric.hpp"

namespace hypme {

/// A map C_n -> host with its tight bi-Lipschitz constants:
/// a = min d_host / d_cycle and b = max d_host / d_cycle over pairs.
struct CycleEmbedding {
  std::vector<Vertex> images;
  Rational a;
  Rational b;
  /// Index pairs (i, j) realising a and b.
  std::pair<std::size_t, std::size_t> a_pair{0, 0};
  std::pair<std::size_t, std::size_t> b_pair{0, 0};

  std::size_t n() const { return images.size(); }
};

inline std::size_t cycle_distance(std::size_t i, std::size_t j, std::size_t n) {
  std::size_t k = i > j ? i - j : j - i;
  return std::min(k, n - k);
}

CycleEmbedding verify_embedding(const DistanceMatrix& host, std::span<const Vertex> images);
nlohmann::json to_json(const CycleEmbedding& e);
/// Reads {"images": [...]} and re-verifies against `host`; stored constants are ignored.
CycleEmbedding embedding_from_json(const DistanceMatrix& host, const nlohmann::json& j);

/// Visits every simple cycle (length >= 3) once, rooted at its smallest
/// vertex with the second vertex smaller than the last. The visitor returns
/// false to stop early. Returns true when the enumeration ran to completion.
bool enumerate_simple_cycles(const Graph& g,
                             const std::function<bool(std::span<const Vertex>)>& visit,
                             std::uint64_t budget, std::uint64_t* work = nullptr);

enum class SearchMode { automatic, exhaustive, heuristic };
enum class SearchOutcome { found, proven_absent, budget_exhausted, heuristic_exhausted };

std::string to_string(SearchOutcome outcome);
SearchMode parse_search_mode(std::string_view text);

struct SearchOptions {
  SearchMode mode = SearchMode::automatic;
  /// Counted in candidate extensions / pair evaluations.
  std::uint64_t budget = 10'000'000;
  /// Hosts up to this size are searched exhaustively in automatic mode.
  std::size_t exhaustive_limit = 40;
};

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::heuristic_exhausted;
  std::optional<CycleEmbedding> embedding;
  std::uint64_t work = 0;
  std::string strategy;
};

/// Looks for a simple cycle of length >= min_n whose inclusion map has
/// a >= min_a (b is 1 for graph cycles). Automatic mode runs the geodesic
/// bigon heuristic first, then exhaustive enumeration on small hosts.
SearchResult find_fat_cycle(const Graph& g, const DistanceMatrix& d, const Rational& min_a,
                            std::size_t min_n, const SearchOptions& options = {});
nlohmann::json to_json(const SearchResult& r);

/// (4 delta log2(b n) + 4 + 2b) / n for even n >= 2 and b >= 1; log2 is
/// exact on powers of two and otherwise rounded up at 2^-32.
Rational obstruction_bound(const Rational& delta, const Rational& b, std::uint64_t n);

enum class Verdict { consistent, violation };

struct ObstructionReport {
  Rational delta;
  Rational a;
  Rational b;
  /// max(b, 1): a map with b < 1 is constant, hence also 1-Lipschitz.
  Rational b_used;
  std::size_t n = 0;
  /// 2 floor(n / 2), the even length the bound is evaluated at.
  std::size_t n_used = 0;
  Rational bound_prop;
  /// Same expression at the half-length floor(n / 2), the parametrisation
  /// C_{2m} with m = n / 2.
  Rational bound_prop_half;
  bool cor_applicable = false;  // delta >= 1
  Rational bound_cor;           // 6 delta ln(n) / n, rounded up
  std::optional<bool> cor_satisfied;
  /// Decided exactly: violation iff a > bound_prop at n_used.
  Verdict verdict = Verdict::consistent;
};

ObstructionReport check_obstruction(const CycleEmbedding& e, const Rational& delta);
nlohmann::json to_json(const ObstructionReport& r);

}  // namespace hypme
