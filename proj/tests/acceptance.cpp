// Acceptance runner: `hypme_acceptance c3` runs one criterion, no argument
// (or `all`) runs every one. Each prints a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hypme/cli.hpp"
#include "hypme/coupling.hpp"
#include "hypme/cycle_embedding.hpp"
#include "hypme/graph.hpp"
#include "hypme/group.hpp"
#include "hypme/hyperbolicity.hpp"
#include "hypme/rigidity.hpp"
#include "oracles.hpp"

using namespace hypme;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Coupling shipped(const std::string& name) {
  auto text = read_file(std::string(HYPME_DATA_DIR) + "/couplings/" + name);
  return Coupling::build(coupling_spec_from_json(nlohmann::json::parse(text)));
}

// ---- c1 -----------------------------------------------------------------

// Violation count for every map in `maps`, with δ = thin + 2. Verdicts are
// memoised on the exact (a, b), which the oracle computes by integer ratios.
struct ObstructionTally {
  std::uint64_t maps = 0;
  std::uint64_t violations = 0;
  std::uint64_t mismatches = 0;  // library constants differ from the oracle
};

void tally_maps(const Graph& g, std::size_t n, const std::function<bool(std::vector<int>&)>& next,
                ObstructionTally& t) {
  auto d = distance_matrix(g);
  auto od = oracle::distances(g);
  Rational delta = certified_delta(thin_triangle_delta(d));
  std::map<std::pair<Rational, Rational>, bool> verdicts;
  std::vector<int> images(n);
  while (next(images)) {
    ++t.maps;
    auto key = oracle::lipschitz(od, images);
    auto it = verdicts.find(key);
    if (it == verdicts.end()) {
      std::vector<Vertex> v(images.begin(), images.end());
      auto e = verify_embedding(d, v);
      if (e.a != key.first || e.b != key.second) ++t.mismatches;
      bool violation = check_obstruction(e, delta).verdict == Verdict::violation;
      it = verdicts.emplace(key, violation).first;
    }
    if (it->second) ++t.violations;
  }
}

// Odometer over all maps {0..n-1} -> {0..v-1}.
std::function<bool(std::vector<int>&)> all_maps(std::size_t v) {
  auto started = std::make_shared<bool>(false);
  return [v, started](std::vector<int>& x) {
    if (!*started) {
      *started = true;
      std::fill(x.begin(), x.end(), 0);
      return true;
    }
    std::size_t i = 0;
    while (i < x.size() && x[i] == int(v) - 1) x[i++] = 0;
    if (i == x.size()) return false;
    ++x[i];
    return true;
  };
}

Outcome c1() {
  std::mt19937_64 rng(20240601);
  ObstructionTally t;
  std::uint64_t hosts = 0, cycles = 0;

  // Large hosts: every simple cycle as an inclusion map, plus sampled maps.
  for (int i = 0; i < 60; ++i) {
    std::size_t nv = 20 + uniform_below(rng, 181);
    Graph tree = random_tree(nv, rng);
    for (const Graph& g : {tree, add_random_chords(tree, 1, rng)}) {
      ++hosts;
      auto d = distance_matrix(g);
      Rational delta = certified_delta(thin_triangle_delta(d));
      enumerate_simple_cycles(
          g,
          [&](std::span<const Vertex> c) {
            ++cycles;
            ++t.maps;
            if (check_obstruction(verify_embedding(d, c), delta).verdict == Verdict::violation) ++t.violations;
            return true;
          },
          100'000'000);
      for (std::size_t n : {4, 6, 8, 12}) {
        std::uint64_t left = 500;
        tally_maps(g, n,
                   [&](std::vector<int>& x) {
                     if (left-- == 0) return false;
                     for (auto& v : x) v = int(uniform_below(rng, g.vertex_count()));
                     return true;
                   },
                   t);
      }
    }
  }
  // Small hosts: every map C_4 -> host and C_6 -> host.
  for (int i = 0; i < 25; ++i) {
    for (auto [nv, n] : {std::pair<std::size_t, std::size_t>{8 + uniform_below(rng, 7), 4},
                        std::pair<std::size_t, std::size_t>{6 + uniform_below(rng, 5), 6}}) {
      Graph tree = random_tree(nv, rng);
      for (const Graph& g : {tree, add_random_chords(tree, 1, rng)}) {
        ++hosts;
        tally_maps(g, n, all_maps(g.vertex_count()), t);
      }
    }
  }
  Outcome o;
  o.pass = t.violations == 0 && t.mismatches == 0;
  o.detail = std::to_string(hosts) + " hosts, " + std::to_string(t.maps) + " maps (" + std::to_string(cycles) +
             " simple cycles), " + std::to_string(t.violations) + " violations, " + std::to_string(t.mismatches) +
             " oracle mismatches";
  return o;
}

// ---- c2 -----------------------------------------------------------------

Outcome c2() {
  Outcome o;
  std::vector<std::string> notes;
  for (std::size_t k = 4; k <= 12; ++k) {
    Graph g = grid_graph(k + 1, k + 1);
    auto d = distance_matrix(g);
    auto r = find_fat_cycle(g, d, Rational(1, 2), 4 * k);
    bool ok = r.embedding.has_value();
    if (ok) {
      const auto& e = *r.embedding;
      auto again = verify_embedding(d, e.images);
      std::vector<int> images(e.images.begin(), e.images.end());
      auto [a, b] = oracle::lipschitz(oracle::distances(g), images);
      ok = e.n() == 4 * k && again.a == e.a && again.b == e.b && a == e.a && b == e.b && b == 1 &&
           a >= Rational(1, 2);
      if (ok) notes.push_back("k=" + std::to_string(k) + ": a*n=" + to_string(e.a * e.n()));
    }
    if (!ok) {
      o.pass = false;
      notes.push_back("k=" + std::to_string(k) + " no verified embedding (" + to_string(r.outcome) + ")");
    }
  }
  o.detail = join(notes);
  return o;
}

// ---- c3 -----------------------------------------------------------------

struct PathTally {
  std::uint64_t paths = 0;
  std::uint64_t failures = 0;
  std::uint64_t mismatches = 0;
};

// The library decides the bound exactly; the oracle re-measures the
// geodesic-to-path distance and evaluates the bound in floating point.
void check_path(const DistanceMatrix& d, const oracle::Matrix& od, const Path& p, const Rational& delta,
                PathTally& t) {
  ++t.paths;
  Vertex x1 = p.vertices.front(), x2 = p.vertices.back();
  auto rep = verify_geodesic_path_bound(d, p, x1, x2, delta);
  int worst = 0;
  for (int y : oracle::interval(od, int(x1), int(x2))) {
    int m = oracle::kInf;
    for (auto v : p.vertices) m = std::min(m, od[y][v]);
    worst = std::max(worst, m);
  }
  std::size_t len = p.length();
  long double bound = len == 0 ? 3 : to_long_double(delta) * std::log2((long double)len) + 3;
  bool oracle_pass = worst <= bound + 1e-9L;
  if (rep.max_distance != worst || rep.pass != oracle_pass) ++t.mismatches;
  if (!rep.pass) ++t.failures;
}

Path random_walk(const Graph& g, std::mt19937_64& rng, std::size_t steps, bool self_avoiding) {
  Path p;
  Vertex v = Vertex(uniform_below(rng, g.vertex_count()));
  p.vertices.push_back(v);
  std::vector<bool> seen(g.vertex_count(), false);
  seen[v] = true;
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<Vertex> options;
    for (auto w : g.neighbors(v))
      if (!self_avoiding || !seen[w]) options.push_back(w);
    if (options.empty()) break;
    v = options[uniform_below(rng, options.size())];
    seen[v] = true;
    p.vertices.push_back(v);
  }
  return p;
}

Outcome c3() {
  std::mt19937_64 rng(7);
  PathTally t;
  std::uint64_t hosts = 0;
  auto run_host = [&](const Graph& g, bool sample) {
    ++hosts;
    auto d = distance_matrix(g);
    auto od = oracle::distances(g);
    Rational delta = certified_delta(thin_triangle_delta(d));
    std::size_t n = g.vertex_count();
    if (!sample) {
      // Every simple path: in trees and cycles these are the arcs between pairs.
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v) {
          if (u == v) continue;
          check_path(d, od, geodesic(d, u, v), delta, t);
          if (g.edge_count() == n) {  // the cycle C_n: the other arc
            Path p;
            for (Vertex w = u;; w = Vertex((w + n - 1) % n)) {
              p.vertices.push_back(w);
              if (w == v) break;
            }
            Path q;
            for (Vertex w = u;; w = Vertex((w + 1) % n)) {
              q.vertices.push_back(w);
              if (w == v) break;
            }
            check_path(d, od, p, delta, t);
            check_path(d, od, q, delta, t);
          }
        }
    }
    std::size_t samples = sample ? 10000 : 500;
    for (std::size_t i = 0; i < samples; ++i)
      check_path(d, od, random_walk(g, rng, 1 + uniform_below(rng, 4 * n), i % 2 == 0), delta, t);
  };
  for (int i = 0; i < 20; ++i) run_host(random_tree(2 + uniform_below(rng, 199), rng), false);
  for (std::size_t b : {2, 3})
    for (std::size_t depth : {3, 4}) run_host(tree_graph(b, depth), false);
  for (std::size_t n = 3; n <= 24; ++n) run_host(cycle_graph(n), false);
  for (std::size_t w = 2; w <= 7; ++w)
    for (std::size_t h = w; h <= 7; ++h) run_host(grid_graph(w, h), true);
  Outcome o;
  o.pass = t.failures == 0 && t.mismatches == 0;
  o.detail = std::to_string(hosts) + " hosts, " + std::to_string(t.paths) + " paths, " +
             std::to_string(t.failures) + " failures, " + std::to_string(t.mismatches) + " oracle mismatches";
  return o;
}

// ---- c4 -----------------------------------------------------------------

Outcome c4() {
  std::mt19937_64 rng(99);
  std::uint64_t mismatches = 0, trees = 0, nonzero_tree = 0, instances = 0;
  auto compare = [&](const Graph& g) {
    ++instances;
    auto d = distance_matrix(g);
    auto od = oracle::distances(g);
    auto h = analyze_hyperbolicity(d);
    if (!h.thin.exact || !h.four_point.exact || h.thin.delta != oracle::thin_delta(od) ||
        h.four_point.delta != oracle::four_point_delta(od))
      ++mismatches;
    return h;
  };
  for (int i = 0; i < 40; ++i) {
    auto h = compare(random_tree(2 + uniform_below(rng, 39), rng));
    ++trees;
    if (h.thin.delta != 0 || h.four_point.delta != 0) ++nonzero_tree;
  }
  for (auto [b, depth] : {std::pair<std::size_t, std::size_t>{2, 4}, {3, 3}, {5, 2}}) {
    auto h = compare(tree_graph(b, depth));
    ++trees;
    if (h.thin.delta != 0 || h.four_point.delta != 0) ++nonzero_tree;
  }
  for (std::size_t n = 3; n <= 40; n += 3) compare(path_graph(n));
  for (int i = 0; i < 80; ++i) {
    std::size_t nv = 4 + uniform_below(rng, 37);
    compare(add_random_chords(random_tree(nv, rng), uniform_below(rng, nv), rng));
  }
  for (std::size_t n = 3; n <= 12; ++n) compare(cycle_graph(n));
  compare(grid_graph(5, 8));
  auto c4h = compare(cycle_graph(4));
  bool c4ok = c4h.thin.delta == 1 && c4h.four_point.delta == 1;
  Outcome o;
  o.pass = mismatches == 0 && nonzero_tree == 0 && c4ok && instances >= 100;
  o.detail = std::to_string(instances) + " graphs vs oracle, " + std::to_string(mismatches) + " mismatches; " +
             std::to_string(trees) + " trees, " + std::to_string(nonzero_tree) + " with nonzero delta; C4 thin=" +
             std::to_string(c4h.thin.delta) + " four-point=" + to_string(c4h.four_point.delta);
  return o;
}

// ---- c5 -----------------------------------------------------------------

Outcome c5() {
  Outcome o;
  std::vector<std::string> notes;
  for (const char* name : {"f2_index2.json", "z2_index2.json"}) {
    auto c = shipped(name);
    auto id = check_cocycle_identity(c, 4);
    auto i8 = check_identity_8(c, 4);
    auto inv = check_inverse_relation(c, 4);
    std::uint64_t v = id.alpha.violations + id.beta.violations + i8.violations + inv.violations;
    std::uint64_t cases = id.alpha.cases + id.beta.cases + i8.cases + inv.cases;
    if (v != 0 || id.alpha.cases == 0 || id.beta.cases == 0 || i8.cases == 0 || inv.cases == 0) o.pass = false;
    notes.push_back(c.ambient().expression() + ": " + std::to_string(cases) + " cases, " + std::to_string(v) +
                    " violations");
  }
  o.detail = join(notes);
  return o;
}

// ---- c6 -----------------------------------------------------------------

Outcome c6() {
  Outcome o;
  std::vector<std::string> notes;
  std::vector<IntegrabilityFunction> phis{IntegrabilityFunction::power(1), IntegrabilityFunction::power(2)};
  for (const char* name : {"f2_index2.json", "z2_index2.json"}) {
    auto c = shipped(name);
    auto s = claim_sweep(c, 4, {1, 2, 3}, phis);
    if (!s.pass() || s.checked == 0) o.pass = false;
    notes.push_back(c.ambient().expression() + ": " + std::to_string(s.checked) + " checks, " +
                    std::to_string(s.failures) + " failures, " + std::to_string(s.inconclusive) + " inconclusive");
  }
  o.detail = join(notes);
  return o;
}

// ---- c7 -----------------------------------------------------------------

Outcome c7() {
  auto c = shipped("f2_index2_shifted.json");
  Outcome o;
  if (c.x_gamma_in_x_lambda()) return {false, "shipped coupling already has X_Gamma inside X_Lambda"};
  std::vector<Code> f{c.ambient().identity()};
  for (const auto& w : coboundedness_witness(c))
    if (w != f[0]) f.push_back(w);
  auto s = strengthen_coboundedness(c, f, 3);
  o.pass = s.pass() && s.coupling.x_gamma_in_x_lambda();
  auto part = [](const std::string& name, const CheckReport& r) {
    return name + " " + std::to_string(r.cases - r.violations) + "/" + std::to_string(r.cases);
  };
  o.detail = "|F|=" + std::to_string(f.size()) + "; axioms " + (s.axioms.pass() ? "pass" : "fail") + "; " +
             part("inclusion", s.inclusion) + "; " + part("step", s.step_bound) + "; " + part("growth", s.growth);
  return o;
}

// ---- c8 -----------------------------------------------------------------

Outcome c8() {
  std::vector<std::string> notes;
  bool volumes = true;
  auto f2 = parse_group("F2");
  auto z2 = parse_group("Z^2");
  BallOptions options{.max_elements = 5'000'000, .build_graph = false};
  auto bf = ball(f2, 12, options);
  auto bz = ball(z2, 12, options);
  for (int n = 0; n <= 12; ++n) {
    if (bf.growth.volume[n] != 2 * pow(BigInt(3), n) - 1) volumes = false;
    if (bz.growth.volume[n] != BigInt(2 * n * n + 2 * n + 1)) volumes = false;
    if (bz.growth.volume[n] != oracle::lattice_ball(2, n)) volumes = false;
    if (n <= 7 && bf.growth.volume[n] != oracle::free_ball(2, n).size()) volumes = false;
  }
  notes.push_back(std::string("volumes n<=12 ") + (volumes ? "exact" : "WRONG"));

  auto est = entropy_estimate(bf.growth, Rational(3));
  long double point = est.point_estimates.back();
  long double gap = std::fabs(point - std::log(3.0L));
  bool entropy = gap <= 0.02L;
  std::ostringstream e;
  e.precision(4);
  e << std::fixed << "entropy ln Vol(12)/12 = " << double(point) << ", |. - ln 3| = " << double(gap)
    << (entropy ? " <= 0.02" : " > 0.02");
  notes.push_back(e.str());

  // δ = 0 for F2: its Cayley graph is a tree, checked on a ball.
  auto cayley = ball(f2, 4);
  auto delta = thin_triangle_delta(distance_matrix(*cayley.graph));
  auto t = threshold_p(delta.delta, Entropy::log_of(3));
  bool threshold = delta.exact && delta.delta == 0 && t.exact && t.p_threshold == 2;
  notes.push_back("threshold_p(F2) = " + to_string(t.p_threshold) + (t.exact ? " exact" : " inexact"));
  return {volumes && entropy && threshold, join(notes)};
}

// ---- c9 -----------------------------------------------------------------

Outcome c9() {
  std::vector<std::string> notes;
  bool pass = true;
  auto f2 = parse_group("F2");
  GrowthClass gc = growth_class(f2.group());

  RigidityConditions rc;
  rc.delta = 1;
  rc.r = lp_schedule(1);
  rc.n_max = 1000000;
  auto table = growth_table(f2, condition_5_required_radius(rc));
  auto run5 = [&](const Rational& p, const std::string& expected) {
    rc.phi = IntegrabilityFunction::power(p);
    auto rep = check_condition_5(rc, table, gc);
    bool ok = rep.verdict == expected && rep.numeric_agrees;
    pass = pass && ok;
    std::ostringstream s;
    s << "(5) p=" << double(to_long_double(p)) << ": " << rep.verdict << " ("
      << (rep.numeric_agrees ? "numeric agrees" : "numeric does not confirm") << " to 1e6)";
    notes.push_back(s.str());
  };
  run5(from_long_double(108 * std::log(3.0L) + 5), "tends_to_zero");
  run5(2, "fails");

  int correct = 0;
  const Rational grid[] = {Rational(1, 2), 1, Rational(3, 2), 2, Rational(5, 2)};
  RigidityConditions r6;
  r6.delta = 1;
  r6.n_max = parse_rational("1e100");
  for (const auto& eta : grid)
    for (const auto& q : grid) {
      r6.psi = IntegrabilityFunction::poly_plus(q);
      r6.r = Schedule::power(eta / (1 + eta));
      auto rep = check_condition_6_7(r6, ConditionMode::thm41);
      bool ok = eta > q ? rep.verdict == "holds" && rep.numeric_agrees
                        : rep.verdict != "holds" && (eta == q || rep.verdict == "fails");
      correct += ok;
    }
  pass = pass && correct == 25;
  notes.push_back("(6) eta/q grid " + std::to_string(correct) + "/25 flip at eta = q");
  return {pass, join(notes)};
}

// ---- c10 ----------------------------------------------------------------

Outcome c10() {
  namespace fs = std::filesystem;
  const std::string data = HYPME_DATA_DIR;
  std::vector<std::vector<std::string>> runs{
      {"graph-analyze", "--gen", "random-tree-chords:800,4,3", "--samples", "20000"},
      {"graph-analyze", "--gen", "tree:3,4"},
      {"find-cycles", "--gen", "grid:9,9", "--min-a", "1/2", "--min-n", "32"},
      {"check-obstruction", "--gen", "cycle:12", "--images", "0,1,2,3,4,5,6,7,8,9,10,11"},
      {"group-ball", "--group", "F2", "--radius", "6"},
      {"coupling-verify", "--spec", data + "/couplings/f2_index2.json", "--radius", "3"},
      {"claim-check", "--spec", data + "/couplings/z2_index2.json", "--lambda-radius", "2"},
      {"claim-check", "--spec", data + "/couplings/f2_index2_shifted.json", "--strengthen", "--lambda-radius", "1"},
      {"threshold", "--group", "F2"},
      {"conditions", "--condition", "6", "--schedule", "power:2/3", "--psi", "poly_plus:1", "--n-max", "1e30"},
  };
  fs::path dir = fs::temp_directory_path() / ("hypme_c10_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  int identical = 0;
  std::vector<std::string> differing;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string contents[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto path = (dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".json")).string();
      auto args = runs[i];
      args.insert(args.end(), {"--seed", "42", "--out", path});
      std::ostringstream out, err;
      int code = dispatch(args, out, err);
      contents[rep] = code == 1 ? "" : read_file(path);
    }
    if (!contents[0].empty() && contents[0] == contents[1])
      ++identical;
    else
      differing.push_back(runs[i][0]);
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = identical == int(runs.size());
  o.detail = std::to_string(identical) + "/" + std::to_string(runs.size()) + " report files byte-identical";
  if (!differing.empty()) o.detail += " (differ or failed: " + join(differing) + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4}, {"c5", c5},
      {"c6", c6}, {"c7", c7}, {"c8", c8}, {"c9", c9}, {"c10", c10}};
  std::set<std::string> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(argv[i]);
  bool all = wanted.empty() || wanted.count("all");
  int failed = 0, ran = 0;
  for (const auto& [name, run] : criteria) {
    if (!all && !wanted.count(name)) continue;
    ++ran;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << seconds;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << t.str() << " s]" << std::endl;
    failed += !o.pass;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion; use c1..c10 or all\n";
    return 2;
  }
  return failed ? 1 : 0;
}
