#pragma once

#include <cstdint>
#include <optional>

#include "hypme/graph.hpp"
#include "hypme/numeric.hpp"

namespace hypme {

/// Triangle (a, b, c) with a < b and the vertex x of G(a, b) farthest from
/// G(a, c) ∪ G(b, c).
struct ThinWitness {
  Vertex a = 0, b = 0, c = 0, x = 0;
  auto operator<=>(const ThinWitness&) const = default;
};

struct FourPointWitness {
  Vertex x = 0, y = 0, z = 0, w = 0;
  auto operator<=>(const FourPointWitness&) const = default;
};

struct ScanOptions {
  /// Exhaustive scans refuse hosts above this size unless `force` is set;
  /// they fall back to sampling instead.
  std::size_t exhaustive_limit = 600;
  bool force = false;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;
};

struct ThinResult {
  std::int32_t delta = 0;
  ThinWitness witness;
  /// False when the value came from sampling; it is then a lower bound.
  bool exact = true;
  std::uint64_t samples = 0;
};

struct FourPointResult {
  Rational delta;  // half-integer
  FourPointWitness witness;
  bool exact = true;
  std::uint64_t samples = 0;
};

/// max over triangles (a, b, c) and x in G(a, b) of d(x, G(a, c) ∪ G(b, c)).
ThinResult thin_triangle_delta(const DistanceMatrix& d, const ScanOptions& options = {});
/// Re-evaluates a witness: d(x, G(a, c) ∪ G(b, c)).
std::int32_t thin_value(const DistanceMatrix& d, const ThinWitness& w);

/// Gromov four-point constant: max over quadruples of (L1 - L2) / 2.
FourPointResult four_point_delta(const DistanceMatrix& d, const ScanOptions& options = {});
Rational four_point_value(const DistanceMatrix& d, const FourPointWitness& w);

struct HyperbolicityReport {
  ThinResult thin;
  FourPointResult four_point;
};

HyperbolicityReport analyze_hyperbolicity(const DistanceMatrix& d, const ScanOptions& options = {});
nlohmann::json to_json(const HyperbolicityReport& r);

/// Slack added to the vertex form of the geodesic/path distance bound.
inline constexpr int kDiscretizationSlack = 2;

/// Certified constant used by the obstruction and path-bound checks.
inline Rational certified_delta(const ThinResult& thin) {
  return Rational(thin.delta + kDiscretizationSlack);
}

struct GeodesicBoundReport {
  std::size_t path_length = 0;
  std::int32_t max_distance = 0;  // max over geodesic vertices y of d(y, path)
  Vertex worst_vertex = 0;
  Rational delta;
  /// delta * log2(length) + 1 + slack, log2 rounded up when irrational.
  Rational bound;
  std::size_t vertices_checked = 0;
  /// Decided exactly (integer comparison), independent of the rounding in `bound`.
  bool pass = true;
};

/// Checks d(y, path) <= delta * log2(l) + 1 + slack for every vertex y lying
/// on some geodesic between the path's endpoints x1 and x2.
GeodesicBoundReport verify_geodesic_path_bound(const DistanceMatrix& d, const Path& path,
                                               Vertex x1, Vertex x2, const Rational& delta,
                                               int slack = kDiscretizationSlack);
nlohmann::json to_json(const GeodesicBoundReport& r);

}  // namespace hypme
