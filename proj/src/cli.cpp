#include "hypme/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hypme/coupling.hpp"
#include "hypme/cycle_embedding.hpp"
#include "hypme/error.hpp"
#include "hypme/graph.hpp"
#include "hypme/group.hpp"
#include "hypme/hyperbolicity.hpp"
#include "hypme/integrability.hpp"
#include "hypme/parallel.hpp"
#include "hypme/rigidity.hpp"

namespace hypme {

namespace {

using nlohmann::json;

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  std::size_t threads = 0;
  bool force = false;
};

// The search budget: --budget, then HYPME_BUDGET, then the command default.
std::pair<std::uint64_t, std::string> effective_budget(const Common& c, std::uint64_t fallback) {
  if (c.budget) return {*c.budget, "flag"};
  if (const char* env = std::getenv("HYPME_BUDGET"); env && *env) {
    try {
      std::size_t used = 0;
      std::uint64_t v = std::stoull(env, &used);
      if (used == std::string(env).size()) return {v, "env"};
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("HYPME_BUDGET must be a non-negative integer, got '") + env + "'");
  }
  return {fallback, "default"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << text;
}

// Comma-separated list; empty items are rejected.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item.empty()) throw ParseError("empty item in list '" + text + "'");
    items.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return items;
}

std::uint64_t parse_count(const std::string& s) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("'" + s + "' is not a non-negative integer");
}

/// Everything a report needs besides its result.
struct Report {
  std::string command;
  json config = json::object();
  json provenance = json::object();
  json result = json::object();
  int exit_code = 0;
};

void emit(const Report& r, const Common& c, std::ostream& out) {
  json config = r.config;
  config["seed"] = c.seed;
  config["threads"] = c.threads;
  json j{{"tool", "hypme"},
         {"version", kVersion},
         {"command", r.command},
         {"config", config},
         {"provenance", r.provenance},
         {"result", r.result}};
  write_text(c.out, j.dump(2) + "\n", out);
}

struct GraphInput {
  std::string gen;
  std::string input;
  bool largest_component = false;
};

void add_graph_options(CLI::App* cmd, GraphInput& g) {
  auto* gen = cmd->add_option("--gen", g.gen, "generator spec: tree:b,d grid:w,h cycle:n path:n "
                                              "random-tree:n,seed random-tree-chords:n,k,seed");
  auto* input = cmd->add_option("--input", g.input, "edge list or graph JSON file");
  gen->excludes(input);
  cmd->add_flag("--largest-component", g.largest_component, "keep only the largest connected component");
}

Graph load_host(const GraphInput& in, json& config) {
  Graph g;
  if (!in.gen.empty()) {
    g = generate_graph(in.gen);
    config["gen"] = in.gen;
  } else if (!in.input.empty()) {
    std::string text = read_file(in.input);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      g = graph_from_json(json::parse(text));
    } else {
      LoadOptions options;
      options.largest_component = in.largest_component;
      g = load_graph(text, options);
    }
    config["input"] = in.input;
  } else {
    throw PreconditionError("a host graph is required: pass --gen or --input");
  }
  if (in.largest_component && !g.is_connected()) g = g.largest_component();
  config["largest_component"] = in.largest_component;
  return g;
}

json graph_summary(const Graph& g, const DistanceMatrix& d) {
  return {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"diameter", d.diameter()}};
}

// ---- graph-analyze -------------------------------------------------------

struct AnalyzeArgs {
  GraphInput graph;
  std::uint64_t samples = 200000;
};

Report run_graph_analyze(const AnalyzeArgs& a, const Common& c) {
  Report r{"graph-analyze"};
  Graph g = load_host(a.graph, r.config);
  DistanceMatrix d = distance_matrix(g);
  ScanOptions options;
  options.force = c.force;
  options.samples = a.samples;
  options.seed = c.seed;
  r.config["samples"] = a.samples;
  r.config["force"] = c.force;
  auto h = analyze_hyperbolicity(d, options);
  r.result = to_json(h);
  r.result["graph"] = graph_summary(g, d);
  r.result["certified_delta"] = h.thin.exact ? json(to_string(certified_delta(h.thin))) : json(nullptr);
  r.provenance = {{"delta_thin", h.thin.exact ? "exact" : "sampled lower bound"},
                  {"delta_four_point", h.four_point.exact ? "exact" : "sampled lower bound"}};
  return r;
}

// ---- find-cycles ---------------------------------------------------------

struct FindArgs {
  GraphInput graph;
  std::string min_a = "1/2";
  std::size_t min_n = 4;
  std::string mode = "auto";
};

Report run_find_cycles(const FindArgs& a, const Common& c) {
  Report r{"find-cycles"};
  Graph g = load_host(a.graph, r.config);
  DistanceMatrix d = distance_matrix(g);
  SearchOptions options;
  options.mode = parse_search_mode(a.mode);
  auto [budget, source] = effective_budget(c, options.budget);
  options.budget = budget;
  Rational min_a = parse_rational(a.min_a);
  r.config.update({{"min_a", to_string(min_a)},
                   {"min_n", a.min_n},
                   {"mode", a.mode},
                   {"budget", budget},
                   {"budget_source", source}});
  auto result = find_fat_cycle(g, d, min_a, a.min_n, options);
  r.result = to_json(result);
  r.result["graph"] = graph_summary(g, d);
  r.provenance = {{"embedding", result.embedding ? "exact rational verification" : "none"}};
  return r;
}

// ---- check-obstruction ---------------------------------------------------

struct ObstructionArgs {
  GraphInput graph;
  std::string embedding;
  std::string images;
  std::string delta;
  std::string min_a = "0";
  std::size_t min_n = 4;
};

Report run_check_obstruction(const ObstructionArgs& a, const Common& c) {
  Report r{"check-obstruction"};
  Graph g = load_host(a.graph, r.config);
  DistanceMatrix d = distance_matrix(g);

  CycleEmbedding e;
  if (!a.embedding.empty()) {
    json j = read_json(a.embedding);
    // Accept a bare embedding or a find-cycles report.
    if (j.contains("result")) j = j["result"];
    if (j.contains("embedding")) j = j["embedding"];
    if (j.is_null()) throw PreconditionError("'" + a.embedding + "' holds no embedding");
    e = embedding_from_json(d, j);
    r.config["embedding"] = a.embedding;
  } else if (!a.images.empty()) {
    std::vector<Vertex> images;
    for (const auto& s : split_list(a.images)) {
      auto v = parse_count(s);
      if (v >= g.vertex_count()) throw PreconditionError("image vertex " + s + " is not in the host");
      images.push_back(static_cast<Vertex>(v));
    }
    e = verify_embedding(d, images);
    r.config["images"] = a.images;
  } else {
    SearchOptions options;
    auto [budget, source] = effective_budget(c, options.budget);
    options.budget = budget;
    r.config.update({{"min_a", a.min_a}, {"min_n", a.min_n}, {"budget", budget}, {"budget_source", source}});
    auto found = find_fat_cycle(g, d, parse_rational(a.min_a), a.min_n, options);
    if (!found.embedding)
      throw PreconditionError("no embedding given and the search found none (" + to_string(found.outcome) + ")");
    e = *found.embedding;
  }

  Rational delta;
  bool certified = false;
  if (!a.delta.empty()) {
    delta = parse_rational(a.delta);
    r.provenance["delta"] = "given";
  } else {
    ScanOptions options;
    options.force = c.force;
    options.seed = c.seed;
    auto thin = thin_triangle_delta(d, options);
    if (!thin.exact)
      throw PreconditionError("the host is too large for an exact thin-triangle scan; pass --delta or --force");
    delta = certified_delta(thin);
    certified = true;
    r.provenance["delta"] = "certified: exact delta_thin + 2";
  }
  r.config["delta"] = a.delta.empty() ? json(nullptr) : json(a.delta);
  auto report = check_obstruction(e, delta);
  r.result = to_json(report);
  r.result["embedding"] = to_json(e);
  r.result["certified"] = certified;
  if (report.verdict == Verdict::violation && certified) r.exit_code = 2;
  return r;
}

// ---- group-ball ----------------------------------------------------------

struct BallArgs {
  std::string group;
  std::uint64_t radius = 6;
  std::string csv;
  bool graph = false;
};

Report run_group_ball(const BallArgs& a, const Common& c) {
  Report r{"group-ball"};
  MarkedGroup g = parse_group(a.group);
  BallOptions options;
  auto [budget, source] = effective_budget(c, options.max_elements);
  options.max_elements = budget;
  options.build_graph = a.graph;
  r.config.update({{"group", g.expression()},
                   {"radius", a.radius},
                   {"graph", a.graph},
                   {"budget", budget},
                   {"budget_source", source}});
  CayleyBall b = ball(g, a.radius, options);
  r.result = to_json(b, g);
  if (!a.graph) r.result.erase("graph");

  bool agrees = true;
  if (g.group().volume(0)) {
    for (std::uint64_t n = 0; n <= a.radius; ++n)
      if (*g.group().volume(n) != b.growth.volume[n]) agrees = false;
    r.result["closed_form_agrees"] = agrees;
  } else {
    r.result["closed_form_agrees"] = nullptr;
  }
  if (a.radius >= 2) r.result["entropy"] = to_json(entropy_estimate(b.growth, g.group().entropy_base()));
  if (!a.csv.empty()) {
    write_text(a.csv, to_csv(b.growth), std::cout);
    r.config["csv"] = a.csv;
  }
  r.provenance = {{"volumes", "exact BFS count"},
                  {"entropy", g.group().entropy_base() ? "declared" : "estimated"}};
  if (!agrees) r.exit_code = 2;
  return r;
}

// ---- couplings -----------------------------------------------------------

struct CouplingInput {
  std::string spec;
  std::string group;
  std::vector<std::string> generators;
  std::string x_gamma;
  std::vector<std::string> fibers;
};

void add_coupling_options(CLI::App* cmd, CouplingInput& in) {
  auto* spec = cmd->add_option("--spec", in.spec, "coupling spec JSON file");
  auto* group = cmd->add_option("--group", in.group, "ambient group expression");
  cmd->add_option("--generator", in.generators, "subgroup generator (repeatable)");
  cmd->add_option("--x-gamma", in.x_gamma, "the single point of X_Gamma (default e)");
  cmd->add_option("--fiber", in.fibers, "fibre element of Lambda for the product space (repeatable)");
  spec->excludes(group);
}

Coupling load_coupling(const CouplingInput& in, const Common& c, json& config) {
  CouplingSpec spec;
  if (!in.spec.empty()) {
    spec = coupling_spec_from_json(read_json(in.spec));
    config["spec_file"] = in.spec;
  } else if (!in.group.empty()) {
    spec.group = in.group;
    spec.subgroup_generators = in.generators;
    spec.fibers = in.fibers;
  } else {
    throw PreconditionError("a coupling is required: pass --spec or --group with --generator");
  }
  if (!in.x_gamma.empty()) spec.x_gamma = in.x_gamma;
  CosetOptions options;
  auto [budget, source] = effective_budget(c, options.max_cosets);
  options.max_cosets = budget;
  config["coupling"] = to_json(spec);
  config["coset_budget"] = budget;
  config["budget_source"] = source;
  return Coupling::build(spec, options);
}

Report run_coupling_build(const CouplingInput& in, const Common& c) {
  Report r{"coupling-build"};
  Coupling cp = load_coupling(in, c, r.config);
  r.result = to_json(cp);
  r.provenance = {{"cosets", "Todd-Coxeter enumeration"}, {"measures", "exact"}};
  return r;
}

struct VerifyArgs {
  CouplingInput coupling;
  std::uint64_t radius = 3;
  std::uint64_t axiom_radius = 3;
};

Report run_coupling_verify(const VerifyArgs& a, const Common& c) {
  Report r{"coupling-verify"};
  Coupling cp = load_coupling(a.coupling, c, r.config);
  r.config["radius"] = a.radius;
  r.config["axiom_radius"] = a.axiom_radius;
  bool pass = true;
  auto cocycle = check_cocycle_identity(cp, a.radius);
  r.result["cocycle_alpha"] = to_json(cocycle.alpha);
  r.result["cocycle_beta"] = to_json(cocycle.beta);
  pass = pass && cocycle.alpha.pass() && cocycle.beta.pass();
  auto id8 = check_identity_8(cp, a.radius);
  r.result["identity_8"] = to_json(id8);
  pass = pass && id8.pass();
  if (cp.x_gamma_in_x_lambda()) {
    auto inv = check_inverse_relation(cp, a.radius);
    r.result["inverse_relation"] = to_json(inv);
    pass = pass && inv.pass();
  } else {
    r.result["inverse_relation"] = {{"skipped", "X_Gamma is not contained in X_Lambda"}};
  }
  auto axioms = check_domain_axioms(cp, a.axiom_radius);
  r.result["domain_axioms"] = to_json(axioms);
  pass = pass && axioms.pass();
  r.result["pass"] = pass;
  r.provenance = {{"checks", "exhaustive over word-length balls"}};
  if (!pass) r.exit_code = 2;
  return r;
}

struct IntegrabilityArgs {
  CouplingInput coupling;
  std::string phi = "power:1";
  std::string psi = "power:1";
};

Report run_integrability(const IntegrabilityArgs& a, const Common& c) {
  Report r{"integrability"};
  Coupling cp = load_coupling(a.coupling, c, r.config);
  auto phi = IntegrabilityFunction::parse(a.phi);
  auto psi = IntegrabilityFunction::parse(a.psi);
  r.config["phi"] = phi.spec();
  r.config["psi"] = psi.spec();
  r.result = to_json(integrability_report(cp, phi, psi), cp);
  r.provenance = {{"integrals", "finite sums over the fundamental domains"}};
  return r;
}

struct ClaimArgs {
  CouplingInput coupling;
  std::string u;
  std::string v;
  std::uint64_t lambda_radius = 2;
  std::string radii = "1,2,3";
  std::vector<std::string> phis;
  bool strengthen = false;
};

Report run_claim_check(const ClaimArgs& a, const Common& c) {
  Report r{"claim-check"};
  Coupling cp = load_coupling(a.coupling, c, r.config);
  if (!cp.x_gamma_in_x_lambda()) {
    if (!a.strengthen)
      throw PreconditionError("X_Gamma is not contained in X_Lambda; pass --strengthen to use the Omega x F coupling");
    std::vector<Code> f{cp.ambient().identity()};
    for (const auto& w : coboundedness_witness(cp))
      if (std::find(f.begin(), f.end(), w) == f.end()) f.push_back(w);
    auto strengthened = strengthen_coboundedness(cp, f);
    r.result["strengthen"] = to_json(strengthened);
    cp = strengthened.coupling;
  }
  r.config["strengthen"] = a.strengthen;
  std::vector<std::string> phi_specs = a.phis.empty() ? std::vector<std::string>{"power:1", "power:2"} : a.phis;
  std::vector<IntegrabilityFunction> phis;
  for (const auto& s : phi_specs) phis.push_back(IntegrabilityFunction::parse(s));
  std::vector<std::uint64_t> radii;
  for (const auto& s : split_list(a.radii)) radii.push_back(parse_count(s));

  if (!a.u.empty() || !a.v.empty()) {
    if (a.u.empty() || a.v.empty()) throw PreconditionError("--u and --v go together");
    if (radii.size() != 1 || phis.size() != 1)
      throw PreconditionError("a single claim check takes one radius and one phi");
    const auto& G = cp.ambient();
    auto report = claim_bound_check(cp, G.parse(a.u), G.parse(a.v), radii[0], phis[0]);
    r.config.update({{"u", a.u}, {"v", a.v}, {"radius", radii[0]}, {"phi", phis[0].spec()}});
    r.result["claim"] = to_json(report);
    if (report.pass == false || !report.identity_8.pass()) r.exit_code = 2;
  } else {
    auto sweep = claim_sweep(cp, a.lambda_radius, radii, phis);
    r.config.update({{"lambda_radius", a.lambda_radius}, {"radii", radii}, {"phis", phi_specs}});
    r.result["sweep"] = to_json(sweep);
    if (sweep.failures > 0) r.exit_code = 2;
  }
  r.provenance = {{"measure", "exact rational"}, {"bound", "rational interval enclosure"}};
  return r;
}

// ---- threshold -----------------------------------------------------------

struct ThresholdArgs {
  std::string group;
  std::string delta;
  std::string entropy;
  std::string entropy_base;
  std::uint64_t ball_radius = 4;
};

std::optional<Entropy> entropy_flags(const std::string& value, const std::string& base) {
  if (!value.empty() && !base.empty()) throw PreconditionError("pass --entropy or --entropy-base, not both");
  if (!value.empty()) return Entropy::exact(parse_rational(value));
  if (!base.empty()) return Entropy::log_of(parse_rational(base));
  return std::nullopt;
}

Report run_threshold(const ThresholdArgs& a, const Common& c) {
  Report r{"threshold"};
  std::optional<Entropy> entropy = entropy_flags(a.entropy, a.entropy_base);
  Rational delta;
  std::string delta_source = "given";
  if (!a.delta.empty()) delta = parse_rational(a.delta);

  if (!a.group.empty()) {
    MarkedGroup g = parse_group(a.group);
    r.config["group"] = g.expression();
    std::optional<CayleyBall> b;
    auto need_ball = [&]() -> const CayleyBall& {
      if (!b) {
        BallOptions options;
        auto [budget, source] = effective_budget(c, options.max_elements);
        options.max_elements = budget;
        r.config["budget"] = budget;
        r.config["budget_source"] = source;
        r.config["ball_radius"] = a.ball_radius;
        b = ball(g, a.ball_radius, options);
      }
      return *b;
    };
    if (a.delta.empty()) {
      const CayleyBall& cb = need_ball();
      ScanOptions options;
      options.force = c.force;
      options.seed = c.seed;
      auto thin = thin_triangle_delta(distance_matrix(*cb.graph), options);
      if (g.group().relators().empty()) {
        // No relators: the Cayley graph is a tree.
        delta = 0;
        delta_source = "exact: the Cayley graph is a tree (thin-triangle scan of the ball gives " +
                       std::to_string(thin.delta) + ")";
      } else {
        delta = thin.delta;
        delta_source = "estimate: thin-triangle scan of B(e, " + std::to_string(a.ball_radius) + ")";
      }
    }
    if (!entropy) {
      if (auto base = g.group().entropy_base()) {
        entropy = Entropy::log_of(*base);
      } else {
        const CayleyBall& cb = need_ball();
        entropy = Entropy::estimated(entropy_estimate(cb.growth).upper_bound);
      }
    }
  } else if (a.delta.empty() || !entropy) {
    throw PreconditionError("pass --group, or --delta together with --entropy or --entropy-base");
  }
  r.config["delta"] = a.delta.empty() ? json(nullptr) : json(a.delta);
  r.config["entropy"] = a.entropy.empty() ? json(nullptr) : json(a.entropy);
  r.config["entropy_base"] = a.entropy_base.empty() ? json(nullptr) : json(a.entropy_base);

  ThresholdReport t = threshold_p(delta, *entropy);
  t.delta_source = delta_source;
  r.result = to_json(t);
  r.provenance = {{"delta", delta_source}, {"entropy", entropy->declared ? "declared" : "estimated upper bound"}};
  return r;
}

// ---- conditions ----------------------------------------------------------

struct ConditionArgs {
  std::string condition = "5";
  std::string delta = "1";
  std::string l = "1";
  std::string phi = "power:2";
  std::string psi = "power:2";
  std::string schedule = "lp";
  std::string n_min = "10";
  std::string n_max = "1000000";
  std::size_t samples_per_decade = 20;
  std::string group;
  std::string growth_csv;
  std::string entropy_base;
  std::optional<unsigned> degree;
};

// "lp", "exp:p,eta,q", or a plain schedule spec.
Schedule parse_schedule_flag(const std::string& text, const Rational& delta) {
  if (text == "lp") return lp_schedule(delta);
  if (text.rfind("exp:", 0) == 0) {
    auto parts = split_list(text.substr(4));
    if (parts.size() != 3) throw ParseError("exp schedule must look like exp:p,eta,q");
    return exp_schedule(parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]));
  }
  return Schedule::parse(text);
}

Report run_conditions(const ConditionArgs& a, const Common&) {
  Report r{"conditions"};
  RigidityConditions rc;
  rc.delta = parse_rational(a.delta);
  rc.l = parse_rational(a.l);
  rc.phi = IntegrabilityFunction::parse(a.phi);
  rc.psi = IntegrabilityFunction::parse(a.psi);
  rc.r = parse_schedule_flag(a.schedule, rc.delta);
  rc.n_min = parse_rational(a.n_min);
  rc.n_max = parse_rational(a.n_max);
  rc.samples_per_decade = a.samples_per_decade;
  r.config = to_json(rc);
  r.config["condition"] = a.condition;
  r.config["schedule_flag"] = a.schedule;

  if (a.condition == "5") {
    GrowthTable table;
    GrowthClass gc;
    if (!a.group.empty()) {
      MarkedGroup g = parse_group(a.group);
      table = growth_table(g, condition_5_required_radius(rc));
      gc = growth_class(g.group());
      r.config["group"] = g.expression();
      r.provenance["growth"] = g.group().volume(0) ? "closed form" : "exact BFS count";
    } else if (!a.growth_csv.empty()) {
      table = growth_from_csv(read_file(a.growth_csv));
      r.config["growth_csv"] = a.growth_csv;
      r.provenance["growth"] = "table";
    } else {
      throw PreconditionError("condition (5) needs --group or --growth-csv");
    }
    if (!a.entropy_base.empty()) gc.entropy = Entropy::log_of(parse_rational(a.entropy_base));
    if (a.degree) gc.polynomial_degree = *a.degree;
    r.config["entropy_base"] = a.entropy_base.empty() ? json(nullptr) : json(a.entropy_base);
    r.result = to_json(check_condition_5(rc, table, gc));
  } else if (a.condition == "6" || a.condition == "7") {
    auto mode = a.condition == "6" ? ConditionMode::thm41 : ConditionMode::thm42;
    r.result = to_json(check_condition_6_7(rc, mode));
  } else {
    throw PreconditionError("--condition must be 5, 6 or 7");
  }
  r.provenance["samples"] = "long double evaluation on a log-spaced grid";
  return r;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolicity constants, cycle-embedding obstructions, growth thresholds and "
               "measure-equivalence couplings."};
  app.name("hypme");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  std::uint64_t budget = 0;
  app.add_option("--out", common.out, "report file (default: stdout)");
  app.add_option("--seed", common.seed, "seed for sampled scans");
  auto* budget_opt = app.add_option("--budget", budget, "work budget; overrides HYPME_BUDGET");
  app.add_option("--threads", common.threads, "cap on worker threads (0: all cores)");
  app.add_flag("--force", common.force, "run exhaustive scans on large hosts");

  std::function<Report()> run;

  AnalyzeArgs analyze;
  auto* ga = app.add_subcommand("graph-analyze", "thin-triangle and four-point constants of a graph");
  add_graph_options(ga, analyze.graph);
  ga->add_option("--samples", analyze.samples, "sample count when the host is too large to scan");
  ga->callback([&] { run = [&] { return run_graph_analyze(analyze, common); }; });

  FindArgs find;
  auto* fc = app.add_subcommand("find-cycles", "search for a fat cycle embedding");
  add_graph_options(fc, find.graph);
  fc->add_option("--min-a", find.min_a, "lower bi-Lipschitz constant to reach");
  fc->add_option("--min-n", find.min_n, "minimum cycle length");
  fc->add_option("--mode", find.mode, "auto, exhaustive or heuristic");
  fc->callback([&] { run = [&] { return run_find_cycles(find, common); }; });

  ObstructionArgs obstruction;
  auto* co = app.add_subcommand("check-obstruction", "test a cycle embedding against the obstruction bound");
  add_graph_options(co, obstruction.graph);
  co->add_option("--embedding", obstruction.embedding, "embedding JSON or find-cycles report");
  co->add_option("--images", obstruction.images, "comma-separated image vertices");
  co->add_option("--delta", obstruction.delta, "hyperbolicity constant (default: certified from the host)");
  co->add_option("--min-a", obstruction.min_a, "search threshold when no embedding is given");
  co->add_option("--min-n", obstruction.min_n, "search length when no embedding is given");
  co->callback([&] { run = [&] { return run_check_obstruction(obstruction, common); }; });

  BallArgs ball_args;
  auto* gb = app.add_subcommand("group-ball", "exact Cayley ball, growth table and entropy estimate");
  gb->add_option("--group", ball_args.group, "group expression, e.g. F2, Z^2, C2*C3")->required();
  gb->add_option("--radius", ball_args.radius, "ball radius");
  gb->add_option("--csv", ball_args.csv, "also write the growth table as CSV");
  gb->add_flag("--graph", ball_args.graph, "include the Cayley graph of the ball");
  gb->callback([&] { run = [&] { return run_group_ball(ball_args, common); }; });

  CouplingInput build;
  auto* cb = app.add_subcommand("coupling-build", "build a subgroup coupling and its fundamental domains");
  add_coupling_options(cb, build);
  cb->callback([&] { run = [&] { return run_coupling_build(build, common); }; });

  VerifyArgs verify;
  auto* cv = app.add_subcommand("coupling-verify", "exhaustive cocycle and fundamental-domain checks");
  add_coupling_options(cv, verify.coupling);
  cv->add_option("--radius", verify.radius, "word-length radius of the identity checks");
  cv->add_option("--axiom-radius", verify.axiom_radius, "radius of the domain axiom checks");
  cv->callback([&] { run = [&] { return run_coupling_verify(verify, common); }; });

  IntegrabilityArgs integ;
  auto* ig = app.add_subcommand("integrability", "the integrals K and L of a coupling");
  add_coupling_options(ig, integ.coupling);
  ig->add_option("--phi", integ.phi, "function for alpha, e.g. power:2, exp_power:1@1/2");
  ig->add_option("--psi", integ.psi, "function for beta");
  ig->callback([&] { run = [&] { return run_integrability(integ, common); }; });

  ClaimArgs claim;
  auto* cc = app.add_subcommand("claim-check", "measure bound on pairs of Lambda elements");
  add_coupling_options(cc, claim.coupling);
  cc->add_option("--u", claim.u, "first element of Lambda (single check)");
  cc->add_option("--v", claim.v, "second element of Lambda (single check)");
  cc->add_option("--lambda-radius", claim.lambda_radius, "sweep all pairs in this Lambda ball");
  cc->add_option("--radii", claim.radii, "comma-separated radii R");
  cc->add_option("--phi", claim.phis, "integrability function (repeatable)");
  cc->add_flag("--strengthen", claim.strengthen, "pass to the product coupling when X_Gamma is not in X_Lambda");
  cc->callback([&] { run = [&] { return run_claim_check(claim, common); }; });

  ThresholdArgs threshold;
  auto* th = app.add_subcommand("threshold", "the L^p threshold 108 delta Ent + 2");
  th->add_option("--group", threshold.group, "group expression");
  th->add_option("--delta", threshold.delta, "hyperbolicity constant");
  th->add_option("--entropy", threshold.entropy, "entropy as an exact rational");
  th->add_option("--entropy-base", threshold.entropy_base, "entropy given as ln(base)");
  th->add_option("--ball-radius", threshold.ball_radius, "ball used to estimate delta or entropy");
  th->callback([&] { run = [&] { return run_threshold(threshold, common); }; });

  ConditionArgs cond;
  auto* cs = app.add_subcommand("conditions", "evaluate condition (5), (6) or (7) on a range of n");
  cs->add_option("--condition", cond.condition, "5, 6 or 7");
  cs->add_option("--delta", cond.delta, "hyperbolicity constant of Gamma");
  cs->add_option("--L", cond.l, "bound on the psi-integral");
  cs->add_option("--phi", cond.phi, "phi");
  cs->add_option("--psi", cond.psi, "psi");
  cs->add_option("--schedule", cond.schedule, "lp, exp:p,eta,q, log:c, power:e or table:n=r,...");
  cs->add_option("--n-min", cond.n_min, "start of the range");
  cs->add_option("--n-max", cond.n_max, "end of the range");
  cs->add_option("--samples-per-decade", cond.samples_per_decade, "grid density");
  cs->add_option("--group", cond.group, "group supplying Vol (condition 5)");
  cs->add_option("--growth-csv", cond.growth_csv, "growth table n,vol (condition 5)");
  cs->add_option("--entropy-base", cond.entropy_base, "declared entropy ln(base) for the analytic verdict");
  cs->add_option("--degree", cond.degree, "declared polynomial growth degree");
  cs->callback([&] { run = [&] { return run_conditions(cond, common); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  if (budget_opt->count()) common.budget = budget;
  set_thread_limit(common.threads);

  try {
    Report r = run();
    emit(r, common, out);
    return r.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace hypme
