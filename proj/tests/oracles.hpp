#pragma once

// Brute-force reference implementations. They share nothing with the library
// beyond the Graph container and Rational, so agreement is a real check.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hypme/graph.hpp"
#include "hypme/numeric.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<int>>;
constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Floyd-Warshall on the edge set.
inline Matrix distances(const hypme::Graph& g) {
  std::size_t n = g.vertex_count();
  Matrix d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Vertices on some geodesic from a to b.
inline std::vector<int> interval(const Matrix& d, int a, int b) {
  std::vector<int> out;
  for (int x = 0; x < int(d.size()); ++x)
    if (d[a][x] + d[x][b] == d[a][b]) out.push_back(x);
  return out;
}

/// max over a, b, c and x in I(a, b) of d(x, I(a, c) ∪ I(b, c)).
inline int thin_delta(const Matrix& d) {
  int n = int(d.size());
  int best = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        auto side = interval(d, a, b);
        auto other = interval(d, a, c);
        auto third = interval(d, b, c);
        other.insert(other.end(), third.begin(), third.end());
        for (int x : side) {
          int m = kInf;
          for (int y : other) m = std::min(m, d[x][y]);
          best = std::max(best, m);
        }
      }
  return best;
}

/// Gromov four-point constant, as a rational (half-integers).
inline hypme::Rational four_point_delta(const Matrix& d) {
  int n = int(d.size());
  int best = 0;  // twice the constant
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          int s[3] = {d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return hypme::Rational(best, 2);
}

/// Tight bi-Lipschitz constants of i -> images[i] from C_n with the path metric.
inline std::pair<hypme::Rational, hypme::Rational> lipschitz(const Matrix& d, const std::vector<int>& images) {
  std::size_t n = images.size();
  long an = -1, ad = 1, bn = 0, bd = 1;  // a = an/ad, b = bn/bd
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      long k = long(std::min(j - i, n - (j - i)));
      long h = d[images[i]][images[j]];
      if (an < 0 || h * ad < an * k) an = h, ad = k;
      if (h * bd > bn * k) bn = h, bd = k;
    }
  return {hypme::Rational(an, ad), hypme::Rational(bn, bd)};
}

/// Reduced words over a, A, b, B, ... of length <= radius, as strings.
inline std::set<std::string> free_ball(int rank, int radius) {
  std::string letters;
  for (int i = 0; i < rank; ++i) {
    char c = char('a' + i + (i >= 4 ? 1 : 0));  // skip 'e'
    letters += c;
    letters += char(c - 'a' + 'A');
  }
  auto inverse = [](char c) { return char(std::islower(c) ? std::toupper(c) : std::tolower(c)); };
  std::set<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (int r = 0; r < radius; ++r) {
    std::vector<std::string> next;
    for (const auto& w : frontier)
      for (char c : letters)
        if (w.empty() || w.back() != inverse(c)) next.push_back(w + c);
    for (const auto& w : next) out.insert(w);
    frontier = std::move(next);
  }
  return out;
}

/// Free reduction of a word over letters (uppercase = inverse).
inline std::string reduce(const std::string& w) {
  std::string s;
  for (char c : w) {
    if (!s.empty() && s.back() != c && std::tolower(s.back()) == std::tolower(c))
      s.pop_back();
    else
      s.push_back(c);
  }
  return s;
}

/// Points of Z^d with l1 norm <= radius, counted directly.
inline std::uint64_t lattice_ball(int dim, int radius) {
  std::uint64_t count = 0;
  std::vector<int> x(dim, -radius);
  while (true) {
    int norm = 0;
    for (int v : x) norm += std::abs(v);
    if (norm <= radius) ++count;
    int i = 0;
    while (i < dim && x[i] == radius) x[i++] = -radius;
    if (i == dim) break;
    ++x[i];
  }
  return count;
}

/// Every simple cycle of a small graph, rooted at its smallest vertex with the
/// second vertex below the last.
inline std::vector<std::vector<int>> simple_cycles(const hypme::Graph& g) {
  int n = int(g.vertex_count());
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<bool> used(n, false);
  std::function<void(int)> extend = [&](int v) {
    for (auto w : g.neighbors(v)) {
      int u = int(w);
      if (u == path[0] && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
      if (u <= path[0] || used[u]) continue;
      used[u] = true;
      path.push_back(u);
      extend(u);
      path.pop_back();
      used[u] = false;
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    extend(s);
  }
  return out;
}

}  // namespace oracle
