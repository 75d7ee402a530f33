#include "hypme/hyperbolicity.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "hypme/error.hpp"
#include "hypme/parallel.hpp"

namespace hypme {

namespace {

constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();

// Geodesic point sets G(a, b) for all a < b, stored contiguously.
class GeodesicTable {
 public:
  explicit GeodesicTable(const DistanceMatrix& d) : n_(d.size()) {
    offsets_.reserve(n_ * (n_ - 1) / 2 + 1);
    offsets_.push_back(0);
    for (Vertex a = 0; a < n_; ++a) {
      auto da = d.row(a);
      for (Vertex b = a + 1; b < n_; ++b) {
        auto db = d.row(b);
        std::int32_t target = da[b];
        for (Vertex x = 0; x < n_; ++x)
          if (da[x] + db[x] == target) points_.push_back(x);
        offsets_.push_back(points_.size());
      }
    }
  }

  std::span<const Vertex> get(Vertex a, Vertex b) const {
    if (a > b) std::swap(a, b);
    std::size_t id = std::size_t(a) * n_ - std::size_t(a) * (a + 1) / 2 + (b - a - 1);
    return {points_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> points_;
};

std::int32_t distance_to_set(const DistanceMatrix& d, Vertex x, std::span<const Vertex> set) {
  std::int32_t best = kInf;
  auto row = d.row(x);
  for (Vertex y : set) best = std::min(best, row[y]);
  return best;
}

std::vector<Vertex> geodesic_or_point(const DistanceMatrix& d, Vertex a, Vertex b) {
  if (a == b) return {a};
  return geodesic_points(d, a, b);
}

struct ThinCandidate {
  std::int32_t value = -1;
  ThinWitness witness;
};

bool better(const ThinCandidate& lhs, const ThinCandidate& rhs) {
  if (lhs.value != rhs.value) return lhs.value > rhs.value;
  return lhs.witness < rhs.witness;
}

ThinResult thin_exhaustive(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  ThinResult result;
  if (n < 2) return result;
  GeodesicTable table(d);
  std::vector<ThinCandidate> per_apex(n);

  parallel_for(0, n, [&](std::size_t c_index) {
    auto c = Vertex(c_index);
    // to_side[p * n + x] = d(x, G(p, c)).
    thread_local std::vector<std::int32_t> to_side;
    to_side.assign(n * n, kInf);
    for (Vertex p = 0; p < n; ++p) {
      std::int32_t* row = to_side.data() + std::size_t(p) * n;
      if (p == c) {
        auto dc = d.row(c);
        std::copy(dc.begin(), dc.end(), row);
        continue;
      }
      for (Vertex y : table.get(p, c)) {
        auto dy = d.row(y);
        for (Vertex x = 0; x < n; ++x) row[x] = std::min(row[x], dy[x]);
      }
    }
    ThinCandidate best;
    for (Vertex a = 0; a < n; ++a) {
      const std::int32_t* ra = to_side.data() + std::size_t(a) * n;
      for (Vertex b = a + 1; b < n; ++b) {
        const std::int32_t* rb = to_side.data() + std::size_t(b) * n;
        for (Vertex x : table.get(a, b)) {
          std::int32_t v = std::min(ra[x], rb[x]);
          if (v > best.value) best = {v, {a, b, c, x}};
        }
      }
    }
    per_apex[c] = best;
  });

  ThinCandidate best = per_apex.front();
  for (const auto& cand : per_apex)
    if (better(cand, best)) best = cand;
  result.delta = std::max(best.value, 0);
  result.witness = best.witness;
  return result;
}

ThinResult thin_sampled(const DistanceMatrix& d, const ScanOptions& options) {
  const std::size_t n = d.size();
  std::mt19937_64 rng(options.seed);
  ThinCandidate best;
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    auto a = Vertex(uniform_below(rng, n));
    auto b = Vertex(uniform_below(rng, n));
    auto c = Vertex(uniform_below(rng, n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    auto side = geodesic_points(d, a, b);
    auto other = geodesic_or_point(d, a, c);
    auto third = geodesic_or_point(d, b, c);
    other.insert(other.end(), third.begin(), third.end());
    for (Vertex x : side) {
      ThinCandidate cand{distance_to_set(d, x, other), {a, b, c, x}};
      if (better(cand, best)) best = cand;
    }
  }
  ThinResult result;
  result.delta = std::max(best.value, 0);
  result.witness = best.witness;
  result.exact = false;
  result.samples = options.samples;
  return result;
}

// Pair-sum defect L1 - L2 of a quadruple.
std::int64_t four_point_defect(const DistanceMatrix& d, Vertex x, Vertex y, Vertex z, Vertex w) {
  std::array<std::int64_t, 3> sums{std::int64_t(d(x, y)) + d(z, w), std::int64_t(d(x, z)) + d(y, w),
                                   std::int64_t(d(x, w)) + d(y, z)};
  std::sort(sums.begin(), sums.end());
  return sums[2] - sums[1];
}

bool exhaustive_allowed(std::size_t n, const ScanOptions& options) {
  return options.force || n <= options.exhaustive_limit;
}

}  // namespace

ThinResult thin_triangle_delta(const DistanceMatrix& d, const ScanOptions& options) {
  if (d.size() == 0) throw PreconditionError("hyperbolicity of an empty graph");
  return exhaustive_allowed(d.size(), options) ? thin_exhaustive(d) : thin_sampled(d, options);
}

std::int32_t thin_value(const DistanceMatrix& d, const ThinWitness& w) {
  auto other = geodesic_or_point(d, w.a, w.c);
  auto third = geodesic_or_point(d, w.b, w.c);
  other.insert(other.end(), third.begin(), third.end());
  return distance_to_set(d, w.x, other);
}

FourPointResult four_point_delta(const DistanceMatrix& d, const ScanOptions& options) {
  const std::size_t n = d.size();
  if (n == 0) throw PreconditionError("hyperbolicity of an empty graph");
  FourPointResult result;
  result.delta = 0;
  if (n < 4) return result;

  struct Candidate {
    std::int64_t defect = -1;
    FourPointWitness witness;
  };

  Candidate best;
  if (exhaustive_allowed(n, options)) {
    std::vector<Candidate> per_first(n);
    parallel_for(0, n, [&](std::size_t xi) {
      auto x = Vertex(xi);
      Candidate local;
      auto dx = d.row(x);
      for (Vertex y = x + 1; y < n; ++y) {
        auto dy = d.row(y);
        for (Vertex z = y + 1; z < n; ++z) {
          auto dz = d.row(z);
          std::int64_t xy = dx[y], xz = dx[z], yz = dy[z];
          for (Vertex w = z + 1; w < n; ++w) {
            std::int64_t s1 = xy + dz[w], s2 = xz + dy[w], s3 = dx[w] + yz;
            std::int64_t hi = std::max({s1, s2, s3});
            std::int64_t lo = std::min({s1, s2, s3});
            std::int64_t defect = hi - (s1 + s2 + s3 - hi - lo);
            if (defect > local.defect) local = {defect, {x, y, z, w}};
          }
        }
      }
      per_first[x] = local;
    });
    for (const auto& c : per_first)
      if (c.defect > best.defect) best = c;
  } else {
    std::mt19937_64 rng(options.seed);
    for (std::uint64_t s = 0; s < options.samples; ++s) {
      std::array<Vertex, 4> q;
      for (auto& v : q) v = Vertex(uniform_below(rng, n));
      std::sort(q.begin(), q.end());
      std::int64_t defect = four_point_defect(d, q[0], q[1], q[2], q[3]);
      FourPointWitness w{q[0], q[1], q[2], q[3]};
      if (defect > best.defect || (defect == best.defect && w < best.witness)) best = {defect, w};
    }
    result.exact = false;
    result.samples = options.samples;
  }
  result.delta = Rational(std::max<std::int64_t>(best.defect, 0), 2);
  result.witness = best.witness;
  return result;
}

Rational four_point_value(const DistanceMatrix& d, const FourPointWitness& w) {
  return Rational(four_point_defect(d, w.x, w.y, w.z, w.w), 2);
}

HyperbolicityReport analyze_hyperbolicity(const DistanceMatrix& d, const ScanOptions& options) {
  return {thin_triangle_delta(d, options), four_point_delta(d, options)};
}

nlohmann::json to_json(const HyperbolicityReport& r) {
  const auto& t = r.thin;
  const auto& f = r.four_point;
  return {
      {"delta_thin", to_string(Rational(t.delta))},
      {"delta_four_point", to_string(f.delta)},
      {"certified_delta", to_string(certified_delta(t))},
      {"slack", kDiscretizationSlack},
      {"exact", t.exact && f.exact},
      {"samples", {{"thin", t.samples}, {"four_point", f.samples}}},
      {"witness",
       {{"thin", {{"a", t.witness.a}, {"b", t.witness.b}, {"c", t.witness.c}, {"x", t.witness.x}}},
        {"four_point",
         {f.witness.x, f.witness.y, f.witness.z, f.witness.w}}}},
  };
}

GeodesicBoundReport verify_geodesic_path_bound(const DistanceMatrix& d, const Path& path,
                                               Vertex x1, Vertex x2, const Rational& delta,
                                               int slack) {
  if (!is_valid_path(d, path)) throw PreconditionError("alpha is not a discrete path of length >= 1");
  if (path.vertices.front() != x1 || path.vertices.back() != x2)
    throw PreconditionError("path endpoints do not match x1, x2");
  if (delta < 0) throw PreconditionError("delta must be non-negative");

  GeodesicBoundReport report;
  report.path_length = path.length();
  report.delta = delta;
  Rational ell(static_cast<std::uint64_t>(report.path_length));
  report.bound = delta * log2_upper(ell) + 1 + slack;

  std::vector<Vertex> on_path = path.vertices;
  std::sort(on_path.begin(), on_path.end());
  on_path.erase(std::unique(on_path.begin(), on_path.end()), on_path.end());
  auto geodesic_vertices = geodesic_points(d, x1, x2);
  report.vertices_checked = geodesic_vertices.size();
  report.max_distance = -1;
  for (Vertex y : geodesic_vertices) {
    std::int32_t dist = distance_to_set(d, y, on_path);
    if (dist > report.max_distance) {
      report.max_distance = dist;
      report.worst_vertex = y;
    }
  }
  auto cmp = compare_with_scaled_log2(Rational(report.max_distance - 1 - slack), delta, ell);
  report.pass = cmp.has_value() && *cmp <= 0;
  return report;
}

nlohmann::json to_json(const GeodesicBoundReport& r) {
  return {{"path_length", r.path_length},
          {"max_distance", r.max_distance},
          {"worst_vertex", r.worst_vertex},
          {"delta", to_string(r.delta)},
          {"bound", to_string(r.bound)},
          {"vertices_checked", r.vertices_checked},
          {"pass", r.pass}};
}

}  // namespace hypme
