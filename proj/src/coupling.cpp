#include "hypme/coupling.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "hypme/error.hpp"
#include "hypme/parallel.hpp"

namespace hypme {

namespace {

constexpr std::size_t kMaxExamples = 5;

void record(CheckReport& r, const std::string& example) {
  ++r.violations;
  if (r.examples.size() < kMaxExamples) r.examples.push_back(example);
}

// Per-slot partial reports merged in slot order, so parallel sweeps stay deterministic.
CheckReport merge(std::string name, const std::vector<CheckReport>& parts) {
  CheckReport r;
  r.name = std::move(name);
  for (const auto& p : parts) {
    r.cases += p.cases;
    r.violations += p.violations;
    for (const auto& e : p.examples)
      if (r.examples.size() < kMaxExamples) r.examples.push_back(e);
  }
  return r;
}

Code point_key(const Point& p) {
  Code k = p.omega;
  k.push_back(static_cast<std::int32_t>(p.fiber));
  return k;
}

nlohmann::json interval_json(const RationalInterval& v) {
  if (v.is_exact()) return {{"exact", true}, {"value", to_string(v.lo)}};
  return {{"exact", false}, {"lo", to_string(v.lo)}, {"hi", to_string(v.hi)},
          {"approx", static_cast<double>(to_long_double(v.lo))}};
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RationalInterval scale(const RationalInterval& a, const Rational& w) { return {a.lo * w, a.hi * w}; }

std::vector<Code> parse_all(const MarkedGroup& g, const std::vector<std::string>& words) {
  std::vector<Code> out;
  for (const auto& w : words) out.push_back(g.parse(w));
  return out;
}

}  // namespace

nlohmann::json to_json(const CouplingSpec& s) {
  nlohmann::json j{{"group", s.group}, {"subgroup_generators", s.subgroup_generators}, {"x_gamma", s.x_gamma}};
  if (!s.transversal.empty()) j["transversal"] = s.transversal;
  if (!s.fibers.empty()) j["fibers"] = s.fibers;
  return j;
}

CouplingSpec coupling_spec_from_json(const nlohmann::json& j) {
  try {
    CouplingSpec s;
    s.group = j.at("group").get<std::string>();
    s.subgroup_generators = j.at("subgroup_generators").get<std::vector<std::string>>();
    if (j.contains("x_gamma")) s.x_gamma = j.at("x_gamma").get<std::string>();
    if (j.contains("transversal")) s.transversal = j.at("transversal").get<std::vector<std::string>>();
    if (j.contains("fibers")) s.fibers = j.at("fibers").get<std::vector<std::string>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid coupling spec: ") + e.what());
  }
}

Coupling Coupling::build(const CouplingSpec& spec, const CosetOptions& options) {
  Coupling c;
  c.spec_ = spec;
  c.ambient_ = parse_group(spec.group);
  const auto& G = c.ambient_;
  c.subgroup_ = std::make_shared<FiniteIndexSubgroup>(G, parse_all(G, spec.subgroup_generators), options);
  c.metric_ = std::make_shared<SubgroupMetric>(G, c.subgroup_->schreier_generators());
  const std::size_t index = c.subgroup_->index();

  std::vector<Code> transversal = c.subgroup_->transversal();
  if (!spec.transversal.empty()) {
    auto given = parse_all(G, spec.transversal);
    if (given.size() != index)
      throw PreconditionError("transversal has " + std::to_string(given.size()) + " elements, index is " +
                              std::to_string(index));
    std::vector<char> hit(index, 0);
    for (const auto& t : given) {
      auto k = c.subgroup_->coset_of(t);
      if (hit[k]) throw PreconditionError("transversal repeats the coset of " + G.format(t));
      hit[k] = 1;
      transversal[k] = t;
    }
  }

  if (spec.fibers.empty()) {
    c.fibers_ = {G.identity()};
  } else {
    c.fibers_ = parse_all(G, spec.fibers);
    std::set<Code> seen;
    for (const auto& f : c.fibers_) {
      if (!c.subgroup_->contains(f)) throw PreconditionError("fiber element " + G.format(f) + " is not in the subgroup");
      if (!seen.insert(f).second) throw PreconditionError("fiber element " + G.format(f) + " is repeated");
    }
  }
  const std::size_t m = c.fibers_.size();
  c.gamma_ = m == 1 ? G : MarkedGroup(direct_product({G.ptr(), cyclic_group(m, true)}, false));

  // f * X_Λ = {t f^-1 : t in T}.
  c.reps_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& t : transversal) c.reps_[i].push_back(G.multiply(t, G.inverse(c.fibers_[i])));

  Code omega = G.parse(spec.x_gamma);
  c.x_gamma_ = {omega, 0};
  if (!spec.fibers.empty()) {
    auto k = c.subgroup_->coset_of(omega);
    bool found = false;
    for (std::size_t i = 0; i < m && !found; ++i)
      if (c.reps_[i][k] == omega) {
        c.x_gamma_.fiber = i;
        found = true;
      }
    if (!found)
      throw PreconditionError("F is not a coboundedness witness: " + G.format(omega) + " is not in F*X_Lambda");
  }
  return c;
}

std::vector<Point> Coupling::x_lambda() const {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < reps_.size(); ++i)
    for (const auto& r : reps_[i]) pts.push_back({r, i});
  return pts;
}

Code Coupling::gamma_element(const Code& g, std::size_t k) const {
  if (fibers_.size() == 1) return g;
  return join_direct_product({g, Code{static_cast<std::int32_t>(k)}});
}

std::pair<Code, std::size_t> Coupling::gamma_parts(const Code& g) const {
  if (fibers_.size() == 1) return {g, 0};
  auto parts = split_direct_product(g, 2);
  return {parts[0], std::size_t(parts[1].at(0))};
}

Point Coupling::gamma_act(const Code& g, const Point& p) const {
  auto [gamma, k] = gamma_parts(g);
  return {ambient_.multiply(gamma, p.omega), (p.fiber + k) % fibers_.size()};
}

Point Coupling::lambda_act(const Code& l, const Point& p) const {
  return {ambient_.multiply(p.omega, ambient_.inverse(l)), p.fiber};
}

Code Coupling::gamma_between(const Point& p, const Point& q) const {
  const std::size_t m = fibers_.size();
  return gamma_element(ambient_.multiply(q.omega, ambient_.inverse(p.omega)), (q.fiber + m - p.fiber) % m);
}

bool Coupling::in_x_lambda(const Point& p) const {
  return p.fiber < reps_.size() && reps_[p.fiber][subgroup_->coset_of(p.omega)] == p.omega;
}

Point Coupling::lambda_representative(const Point& p) const {
  return {reps_.at(p.fiber)[subgroup_->coset_of(p.omega)], p.fiber};
}

Code Coupling::lambda_correction(const Point& p) const {
  // λ*p = ωλ^-1 = r gives λ = r^-1 ω.
  return ambient_.multiply(ambient_.inverse(lambda_representative(p).omega), p.omega);
}

Code Coupling::alpha(const Code& g, const Point& x) const {
  if (!in_x_lambda(x)) throw PreconditionError("point " + format(x) + " is outside X_Lambda");
  return lambda_correction(gamma_act(g, x));
}

Point Coupling::induced_gamma(const Code& g, const Point& x) const {
  if (!in_x_lambda(x)) throw PreconditionError("point " + format(x) + " is outside X_Lambda");
  return lambda_representative(gamma_act(g, x));
}

Code Coupling::beta(const Code& l, const Point& x) const {
  if (!in_x_gamma(x)) throw PreconditionError("point " + format(x) + " is outside X_Gamma");
  return gamma_between(lambda_act(l, x), x_gamma_);
}

Point Coupling::induced_lambda(const Code& l, const Point& x) const {
  return gamma_act(beta(l, x), lambda_act(l, x));
}

std::uint64_t Coupling::domain_constant() const {
  std::uint64_t c = ambient_.word_length(x_gamma_.omega);
  for (const auto& fiber : reps_)
    for (const auto& r : fiber) c = std::max(c, ambient_.word_length(r));
  return c + (fibers_.size() > 1 ? 1 : 0);
}

std::string Coupling::format(const Point& p) const {
  std::string s = ambient_.format(p.omega);
  if (fibered()) s += "@" + std::to_string(p.fiber);
  return s;
}

Point Coupling::parse_point(const std::string& omega, std::size_t fiber) const {
  return {ambient_.parse(omega), fiber};
}

nlohmann::json to_json(const Coupling& c) {
  const auto& G = c.ambient();
  std::vector<std::string> t, s, x_lambda, fibers;
  for (const auto& x : c.subgroup().transversal()) t.push_back(G.format(x));
  for (const auto& x : c.lambda_generators()) s.push_back(G.format(x));
  for (const auto& p : c.x_lambda()) x_lambda.push_back(c.format(p));
  for (const auto& f : c.fibers()) fibers.push_back(G.format(f));
  return {{"spec", to_json(c.spec())},
          {"group", G.expression()},
          {"gamma_group", c.gamma().expression()},
          {"index", c.index()},
          {"coset_transversal", t},
          {"lambda_generators", s},
          {"x_gamma", c.format(c.x_gamma())},
          {"x_lambda", x_lambda},
          {"fibers", fibers},
          {"point_weight", to_string(c.weight())},
          {"measure_x_gamma", to_string(c.weight())},
          {"measure_x_lambda", to_string(c.weight() * Rational(c.x_lambda().size()))},
          {"x_gamma_in_x_lambda", c.x_gamma_in_x_lambda()}};
}

nlohmann::json to_json(const CheckReport& r) {
  return {{"name", r.name}, {"cases", r.cases}, {"violations", r.violations}, {"examples", r.examples},
          {"pass", r.pass()}};
}

CocycleIdentityReport check_cocycle_identity(const Coupling& c, std::uint64_t radius) {
  CocycleIdentityReport report;
  report.alpha.name = "alpha cocycle identity";
  report.beta.name = "beta cocycle identity";
  if (radius == 0) return report;

  const auto& Gt = c.gamma();
  const auto& G = c.ambient();
  auto gball = ball(Gt, radius, {.max_elements = 5'000'000, .build_graph = false});
  const auto points = c.x_lambda();
  const std::size_t nb = gball.elements.size(), np = points.size();
  std::vector<Code> alpha(nb * np);
  std::vector<Point> moved(nb * np);
  parallel_for(0, nb, [&](std::size_t i) {
    for (std::size_t x = 0; x < np; ++x) {
      alpha[i * np + x] = c.alpha(gball.elements[i], points[x]);
      moved[i * np + x] = c.induced_gamma(gball.elements[i], points[x]);
    }
  });
  std::vector<CheckReport> parts(nb);
  parallel_for(0, nb, [&](std::size_t i) {
    const auto& g = gball.elements[i];
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& h = gball.elements[j];
      Code hg = Gt.multiply(h, g);
      for (std::size_t x = 0; x < np; ++x) {
        ++parts[i].cases;
        Code lhs = c.alpha(hg, points[x]);
        Code rhs = G.multiply(c.alpha(h, moved[i * np + x]), alpha[i * np + x]);
        if (lhs != rhs)
          record(parts[i], "alpha(" + Gt.format(hg) + "," + c.format(points[x]) + ")=" + G.format(lhs) +
                               " but product is " + G.format(rhs));
      }
    }
  });
  report.alpha = merge(report.alpha.name, parts);

  const auto lball = c.lambda_ball(radius);
  const Point& x = c.x_gamma();
  const std::size_t nl = lball.size();
  std::vector<Code> beta(nl);
  std::vector<Point> shifted(nl);
  for (std::size_t i = 0; i < nl; ++i) {
    beta[i] = c.beta(lball[i], x);
    shifted[i] = c.induced_lambda(lball[i], x);
  }
  std::vector<CheckReport> bparts(nl);
  parallel_for(0, nl, [&](std::size_t i) {
    for (std::size_t j = 0; j < nl; ++j) {
      ++bparts[i].cases;
      Code ll = G.multiply(lball[j], lball[i]);
      Code lhs = c.beta(ll, x);
      Code rhs = Gt.multiply(c.beta(lball[j], shifted[i]), beta[i]);
      if (lhs != rhs)
        record(bparts[i], "beta(" + G.format(ll) + ") =" + Gt.format(lhs) + " but product is " + Gt.format(rhs));
    }
  });
  report.beta = merge(report.beta.name, bparts);
  return report;
}

CheckReport check_inverse_relation(const Coupling& c, std::uint64_t radius) {
  if (!c.x_gamma_in_x_lambda())
    throw PreconditionError("X_Gamma is not contained in X_Lambda; run strengthen_coboundedness first");
  CheckReport r;
  r.name = "inverse relation alpha(beta(l,x),x) = l";
  const auto& G = c.ambient();
  const Point& x = c.x_gamma();
  for (const auto& l : c.lambda_ball(radius)) {
    ++r.cases;
    Code back = c.alpha(c.beta(l, x), x);
    if (back != l) record(r, "lambda=" + G.format(l) + " gives " + G.format(back));
  }
  return r;
}

CheckReport check_identity_8(const Coupling& c, std::uint64_t radius) {
  CheckReport r;
  r.name = "b_x(u)^-1 b_x(v) = beta(v^-1 u, u^-1 . x)^-1";
  const auto& G = c.ambient();
  const auto& Gt = c.gamma();
  const Point& x = c.x_gamma();
  const auto lball = c.lambda_ball(radius);
  const std::size_t n = lball.size();
  std::vector<Code> b(n);
  std::vector<Point> back(n);
  for (std::size_t i = 0; i < n; ++i) {
    Code inv = G.inverse(lball[i]);
    b[i] = Gt.inverse(c.beta(inv, x));
    back[i] = c.induced_lambda(inv, x);
  }
  std::vector<CheckReport> parts(n);
  parallel_for(0, n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      ++parts[i].cases;
      Code lhs = Gt.multiply(Gt.inverse(b[i]), b[j]);
      Code rhs = Gt.inverse(c.beta(G.multiply(G.inverse(lball[j]), lball[i]), back[i]));
      if (lhs != rhs)
        record(parts[i], "u=" + G.format(lball[i]) + " v=" + G.format(lball[j]) + ": " + Gt.format(lhs) +
                             " vs " + Gt.format(rhs));
    }
  });
  return merge(r.name, parts);
}

DomainAxiomReport check_domain_axioms(const Coupling& c, std::uint64_t radius) {
  DomainAxiomReport r;
  r.radius = radius;
  r.constant = c.domain_constant();
  r.gamma_injective.name = "gamma action injective on ball x X_Gamma";
  r.gamma_covers.name = "gamma translates cover B(r - c)";
  r.lambda_injective.name = "lambda action injective on ball x X_Lambda";
  r.lambda_covers.name = "lambda translates cover B(r - c)";
  r.transversal.name = "unique coset representative";
  const auto& G = c.ambient();
  const std::size_t m = c.fiber_count();

  std::vector<Point> inner;
  if (radius >= r.constant) {
    auto b = ball(G, radius - r.constant, {.max_elements = 5'000'000, .build_graph = false});
    for (const auto& w : b.elements)
      for (std::size_t i = 0; i < m; ++i) inner.push_back({w, i});
  }
  auto check_cover = [&](CheckReport& report, const std::unordered_set<Code, CodeHash>& image) {
    for (const auto& p : inner) {
      ++report.cases;
      if (!image.count(point_key(p))) record(report, "point " + c.format(p) + " not reached");
    }
  };

  {
    auto gball = ball(c.gamma(), radius, {.max_elements = 5'000'000, .build_graph = false});
    std::unordered_set<Code, CodeHash> image;
    for (const auto& g : gball.elements) {
      ++r.gamma_injective.cases;
      Point p = c.gamma_act(g, c.x_gamma());
      if (!image.insert(point_key(p)).second) record(r.gamma_injective, "repeated image " + c.format(p));
    }
    check_cover(r.gamma_covers, image);
  }
  {
    auto lball = c.lambda_ball(radius);
    std::unordered_set<Code, CodeHash> image;
    for (const auto& l : lball)
      for (const auto& x : c.x_lambda()) {
        ++r.lambda_injective.cases;
        Point p = c.lambda_act(l, x);
        if (!image.insert(point_key(p)).second) record(r.lambda_injective, "repeated image " + c.format(p));
      }
    check_cover(r.lambda_covers, image);
  }
  {
    auto b = ball(G, radius, {.max_elements = 5'000'000, .build_graph = false});
    auto domain = c.x_lambda();
    for (const auto& w : b.elements)
      for (std::size_t i = 0; i < m; ++i) {
        ++r.transversal.cases;
        std::size_t hits = 0;
        for (const auto& x : domain)
          if (x.fiber == i && c.subgroup().contains(G.multiply(G.inverse(x.omega), w))) ++hits;
        if (hits != 1)
          record(r.transversal, c.format({w, i}) + " has " + std::to_string(hits) + " representatives");
      }
  }
  return r;
}

nlohmann::json to_json(const DomainAxiomReport& r) {
  return {{"radius", r.radius},
          {"constant", r.constant},
          {"gamma_injective", to_json(r.gamma_injective)},
          {"gamma_covers", to_json(r.gamma_covers)},
          {"lambda_injective", to_json(r.lambda_injective)},
          {"lambda_covers", to_json(r.lambda_covers)},
          {"transversal", to_json(r.transversal)},
          {"pass", r.pass()},
          {"truncated", true}};
}

ProjectionReport projection_and_similarity(const Coupling& c, Side side, const std::vector<Code>& x1,
                                           const std::vector<Code>& x2, const IntegrabilityFunction& phi) {
  if (c.fibered()) throw PreconditionError("projections are computed on the plain coupling");
  const auto& G = c.ambient();
  const auto& H = c.subgroup();
  ProjectionReport r;
  r.side = side;
  r.similarity_integral = RationalInterval::exact(0);
  std::map<std::string, Code> corrections;

  if (side == Side::lambda) {
    auto validate = [&](const std::vector<Code>& x, const char* name) {
      if (x.size() != H.index())
        throw PreconditionError(std::string(name) + " is not a fundamental domain for the Lambda action: wrong size");
      std::vector<int> hit(H.index(), 0);
      for (const auto& t : x)
        if (hit[H.coset_of(t)]++)
          throw PreconditionError(std::string(name) + " meets the coset of " + G.format(t) + " twice");
    };
    validate(x1, "X1");
    validate(x2, "X2");
    std::vector<Code> by_coset(H.index());
    for (const auto& t : x2) by_coset[H.coset_of(t)] = t;
    for (const auto& x : x1) {
      const Code& y = by_coset[H.coset_of(x)];
      Code l = G.multiply(G.inverse(y), x);  // l*x = x l^-1 = y
      r.projection.push_back({{x, 0}, {y, 0}});
      corrections.emplace(G.format(l), l);
      Rational d(c.lambda_length(l));
      r.similarity_integral = r.similarity_integral + scale(phi.eval(d), c.weight());
    }
  } else {
    if (x1.size() != 1 || x2.size() != 1)
      throw PreconditionError("fundamental domains of the Gamma action on G are single points");
    Code g = G.multiply(x2[0], G.inverse(x1[0]));
    r.projection.push_back({{x1[0], 0}, {x2[0], 0}});
    corrections.emplace(G.format(g), g);
    r.similarity_integral = scale(phi.eval(Rational(G.word_length(g))), c.weight());
  }
  for (auto& [name, x] : corrections) r.corrections.push_back(x);
  r.linf_equivalent = true;
  return r;
}

nlohmann::json to_json(const ProjectionReport& r, const Coupling& c) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [x, y] : r.projection) pairs.push_back({c.format(x), c.format(y)});
  std::vector<std::string> corr;
  for (const auto& g : r.corrections) corr.push_back(c.ambient().format(g));
  return {{"side", r.side == Side::gamma ? "gamma" : "lambda"},
          {"projection", pairs},
          {"corrections", corr},
          {"linf_equivalent", r.linf_equivalent},
          {"similarity_integral", interval_json(r.similarity_integral)}};
}

IntegrabilityReport integrability_report(const Coupling& c, const IntegrabilityFunction& phi,
                                         const IntegrabilityFunction& psi) {
  IntegrabilityReport r;
  r.phi = phi.spec();
  r.psi = psi.spec();
  const auto& Gt = c.gamma();
  const auto points = c.x_lambda();
  bool first = true;
  for (std::size_t s = 0; s < Gt.generator_count(); ++s) {
    RationalInterval sum = RationalInterval::exact(0);
    for (const auto& x : points)
      sum = sum + scale(phi.eval(Rational(c.lambda_length(c.alpha(Gt.generator(s), x)))), c.weight());
    if (first || sum.hi > r.k.hi) r.k_argmax = Gt.generator(s);
    r.k = first ? sum : RationalInterval{std::max(r.k.lo, sum.lo), std::max(r.k.hi, sum.hi)};
    first = false;
  }
  if (first) r.k = RationalInterval::exact(0);
  first = true;
  for (const auto& t : c.lambda_generators()) {
    std::uint64_t len = c.gamma_length(c.beta(t, c.x_gamma()));
    r.beta_sup = std::max(r.beta_sup, len);
    RationalInterval sum = scale(psi.eval(Rational(len)), c.weight());
    if (first || sum.hi > r.l.hi) r.l_argmax = t;
    r.l = first ? sum : RationalInterval{std::max(r.l.lo, sum.lo), std::max(r.l.hi, sum.hi)};
    first = false;
  }
  if (first) r.l = RationalInterval::exact(0);
  return r;
}

nlohmann::json to_json(const IntegrabilityReport& r, const Coupling& c) {
  return {{"phi", r.phi},
          {"psi", r.psi},
          {"K", interval_json(r.k)},
          {"K_argmax", c.gamma().format(r.k_argmax)},
          {"L", interval_json(r.l)},
          {"L_argmax", c.ambient().format(r.l_argmax)},
          {"beta_ess_sup", r.beta_sup},
          {"finite", true}};
}

std::vector<Code> coboundedness_witness(const Coupling& c) {
  const auto& G = c.ambient();
  const Point& x = c.x_gamma();
  // x = λ*r = r λ^-1 for the representative r of x's Λ-orbit.
  Code r = c.lambda_representative(x).omega;
  return {G.multiply(G.inverse(x.omega), r)};
}

StrengthenResult strengthen_coboundedness(const Coupling& c, const std::vector<Code>& f,
                                          std::uint64_t axiom_radius) {
  if (c.fibered()) throw PreconditionError("the coupling is already fibred");
  if (f.empty()) throw PreconditionError("F must be non-empty");
  CouplingSpec spec = c.spec();
  for (const auto& x : f) spec.fibers.push_back(c.ambient().format(x));
  StrengthenResult r{Coupling::build(spec), {}, {}, {}, {}};
  const Coupling& n = r.coupling;

  r.axioms = check_domain_axioms(n, axiom_radius);

  r.inclusion.name = "X_Gamma~ contained in X_Lambda~";
  r.inclusion.cases = 1;
  if (!n.x_gamma_in_x_lambda()) record(r.inclusion, n.format(n.x_gamma()) + " is not in X_Lambda~");

  r.step_bound.name = "d((x,f),(x,f')) <= 1";
  const std::size_t m = n.fiber_count();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ++r.step_bound.cases;
      Point p{n.x_gamma().omega, i}, q{n.x_gamma().omega, j};
      auto d = n.gamma_length(n.gamma_between(p, q));
      if (d > 1) record(r.step_bound, "fibers " + std::to_string(i) + "," + std::to_string(j) + " at distance " + std::to_string(d));
    }

  r.growth.name = "Vol_Gamma~(r) <= |K_grp| Vol_Gamma(r)";
  auto big = ball(n.gamma(), 6, {.max_elements = 5'000'000, .build_graph = false});
  auto small = ball(c.gamma(), 6, {.max_elements = 5'000'000, .build_graph = false});
  for (std::size_t k = 0; k <= 6; ++k) {
    ++r.growth.cases;
    if (big.growth.volume[k] > BigInt(m) * small.growth.volume[k])
      record(r.growth, "r=" + std::to_string(k) + ": " + to_string(big.growth.volume[k]) + " > " +
                           std::to_string(m) + "*" + to_string(small.growth.volume[k]));
  }
  return r;
}

nlohmann::json to_json(const StrengthenResult& r) {
  return {{"coupling", to_json(r.coupling)},
          {"axioms", to_json(r.axioms)},
          {"inclusion", to_json(r.inclusion)},
          {"step_bound", to_json(r.step_bound)},
          {"growth", to_json(r.growth)},
          {"k_grp_order", r.coupling.fiber_count()},
          {"pass", r.pass()}};
}

namespace {

RationalInterval k_constant(const Coupling& c, const IntegrabilityFunction& phi) {
  return integrability_report(c, phi, IntegrabilityFunction::power(1)).k;
}

// Decides measured * phi(d / R) <= K R Vol with interval enclosures.
std::optional<bool> claim_verdict(const Rational& measured, const RationalInterval& phi_value,
                                  const RationalInterval& k, const Rational& r_vol) {
  if (measured * phi_value.hi <= k.lo * r_vol) return true;
  if (measured * phi_value.lo > k.hi * r_vol) return false;
  return std::nullopt;
}

}  // namespace

ClaimReport claim_bound_check(const Coupling& c, const Code& u, const Code& v, std::uint64_t radius,
                              const IntegrabilityFunction& phi) {
  if (!c.x_gamma_in_x_lambda())
    throw PreconditionError("X_Gamma is not contained in X_Lambda; run strengthen_coboundedness first");
  if (radius == 0) throw PreconditionError("R must be positive");
  const auto& G = c.ambient();
  const auto& Gt = c.gamma();
  if (!c.subgroup().contains(u) || !c.subgroup().contains(v))
    throw PreconditionError("u and v must lie in the subgroup");
  ClaimReport r;
  r.radius = radius;
  const Point& x = c.x_gamma();

  r.identity_8.name = "identity (8) at u, v";
  r.identity_8.cases = 1;
  Code bu = Gt.inverse(c.beta(G.inverse(u), x));
  Code bv = Gt.inverse(c.beta(G.inverse(v), x));
  Code lhs = Gt.multiply(Gt.inverse(bu), bv);
  Code rhs = Gt.inverse(c.beta(G.multiply(G.inverse(v), u), c.induced_lambda(G.inverse(u), x)));
  if (lhs != rhs) record(r.identity_8, Gt.format(lhs) + " vs " + Gt.format(rhs));

  r.measured = c.gamma_length(lhs) <= radius ? c.weight() : Rational(0);
  if (u == v) {
    r.degenerate = true;
    return r;
  }
  r.lambda_distance = c.lambda_length(G.multiply(G.inverse(u), v));
  RationalInterval phi_value = phi.eval(Rational(r.lambda_distance) / Rational(radius));
  if (phi_value.lo <= 0) {
    r.degenerate = true;
    return r;
  }
  auto k = k_constant(c, phi);
  auto gball = ball(Gt, radius, {.max_elements = 5'000'000, .build_graph = false});
  Rational r_vol = Rational(radius) * Rational(gball.growth.volume[radius]);
  r.bound = {k.lo * r_vol / phi_value.hi, k.hi * r_vol / phi_value.lo};
  r.pass = claim_verdict(r.measured, phi_value, k, r_vol);
  return r;
}

nlohmann::json to_json(const ClaimReport& r) {
  nlohmann::json j{{"degenerate", r.degenerate},
                   {"lambda_distance", r.lambda_distance},
                   {"R", r.radius},
                   {"measured", to_string(r.measured)},
                   {"identity_8", to_json(r.identity_8)}};
  if (r.degenerate) {
    j["status"] = "degenerate, skipped";
  } else {
    j["bound"] = interval_json(r.bound);
    j["status"] = r.pass ? (*r.pass ? "pass" : "fail") : "inconclusive";
  }
  return j;
}

ClaimSweepReport claim_sweep(const Coupling& c, std::uint64_t lambda_radius,
                             const std::vector<std::uint64_t>& radii,
                             const std::vector<IntegrabilityFunction>& phis) {
  if (!c.x_gamma_in_x_lambda())
    throw PreconditionError("X_Gamma is not contained in X_Lambda; run strengthen_coboundedness first");
  const auto& G = c.ambient();
  const auto& Gt = c.gamma();
  ClaimSweepReport r;
  r.lambda_radius = lambda_radius;
  r.radii = radii;
  for (const auto& phi : phis) r.phis.push_back(phi.spec());

  std::uint64_t max_r = 0;
  for (auto R : radii) {
    if (R == 0) throw PreconditionError("R must be positive");
    max_r = std::max(max_r, R);
  }
  auto gball = ball(Gt, max_r, {.max_elements = 5'000'000, .build_graph = false});
  std::vector<RationalInterval> ks;
  for (const auto& phi : phis) ks.push_back(k_constant(c, phi));

  const auto lball = c.lambda_ball(lambda_radius);
  const Point& x = c.x_gamma();
  std::vector<Code> b;
  for (const auto& u : lball) b.push_back(Gt.inverse(c.beta(G.inverse(u), x)));

  std::map<std::tuple<std::uint64_t, std::uint64_t, std::size_t, std::uint64_t>, std::optional<bool>> cache;
  for (std::size_t i = 0; i < lball.size(); ++i)
    for (std::size_t j = 0; j < lball.size(); ++j) {
      if (i == j) {
        r.degenerate += radii.size() * phis.size();
        continue;
      }
      std::uint64_t d = c.lambda_length(G.multiply(G.inverse(lball[i]), lball[j]));
      std::uint64_t gd = c.gamma_length(Gt.multiply(Gt.inverse(b[i]), b[j]));
      for (auto R : radii) {
        Rational measured = gd <= R ? c.weight() : Rational(0);
        std::uint64_t hit = gd <= R ? 1 : 0;
        for (std::size_t p = 0; p < phis.size(); ++p) {
          ++r.checked;
          auto key = std::make_tuple(d, R, p, hit);
          auto it = cache.find(key);
          if (it == cache.end()) {
            RationalInterval phi_value = phis[p].eval(Rational(d) / Rational(R));
            Rational r_vol = Rational(R) * Rational(gball.growth.volume[R]);
            std::optional<bool> verdict =
                phi_value.lo <= 0 ? std::optional<bool>(true) : claim_verdict(measured, phi_value, ks[p], r_vol);
            it = cache.emplace(key, verdict).first;
          }
          if (!it->second) {
            ++r.inconclusive;
          } else if (!*it->second) {
            ++r.failures;
            if (r.examples.size() < kMaxExamples)
              r.examples.push_back("u=" + G.format(lball[i]) + " v=" + G.format(lball[j]) + " R=" +
                                   std::to_string(R) + " phi=" + r.phis[p]);
          }
        }
      }
    }
  return r;
}

nlohmann::json to_json(const ClaimSweepReport& r) {
  return {{"lambda_radius", r.lambda_radius}, {"radii", r.radii},         {"phis", r.phis},
          {"checked", r.checked},             {"degenerate", r.degenerate}, {"failures", r.failures},
          {"inconclusive", r.inconclusive},   {"examples", r.examples},     {"pass", r.pass()}};
}

}  // namespace hypme
