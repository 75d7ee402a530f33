#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypme/coset_enumeration.hpp"
#include "hypme/group.hpp"
#include "hypme/integrability.hpp"

namespace hypme {

/// Textual description of a subgroup coupling, the JSON interchange format.
///
/// The coupling space is G itself (or G x F when `fibers` is set), Γ = G
/// acts by left multiplication and Λ by λ*ω = ωλ^-1.
struct CouplingSpec {
  std::string group;
  std::vector<std::string> subgroup_generators;
  std::string x_gamma = "e";
  /// Left-coset transversal used as X_Λ; defaults to the BFS-minimal one.
  std::vector<std::string> transversal;
  /// Elements of Λ indexing the fibres of Ω x F; empty for the plain coupling.
  std::vector<std::string> fibers;
};

nlohmann::json to_json(const CouplingSpec& s);
CouplingSpec coupling_spec_from_json(const nlohmann::json& j);

/// A point (ω, i) of Ω x F; i = 0 on the plain coupling.
struct Point {
  Code omega;
  std::size_t fiber = 0;
  bool operator==(const Point&) const = default;
};

class Coupling {
 public:
  static Coupling build(const CouplingSpec& spec, const CosetOptions& options = {});

  const CouplingSpec& spec() const { return spec_; }
  const MarkedGroup& ambient() const { return ambient_; }
  /// Γ, or Γ x K_grp with K_grp cyclic of order |F| on the fibred space.
  const MarkedGroup& gamma() const { return gamma_; }
  const FiniteIndexSubgroup& subgroup() const { return *subgroup_; }
  const std::vector<Code>& lambda_generators() const { return subgroup_->schreier_generators(); }
  std::size_t index() const { return subgroup_->index(); }
  std::size_t fiber_count() const { return fibers_.size(); }
  const std::vector<Code>& fibers() const { return fibers_; }
  bool fibered() const { return !spec_.fibers.empty(); }

  const Point& x_gamma() const { return x_gamma_; }
  std::vector<Point> x_lambda() const;
  /// Mass of a single point; μ(X_Γ) = 1.
  const Rational& weight() const { return weight_; }

  Point gamma_act(const Code& g, const Point& p) const;
  Point lambda_act(const Code& l, const Point& p) const;
  /// Unique Γ-element g with g*p = q.
  Code gamma_between(const Point& p, const Point& q) const;

  bool in_x_lambda(const Point& p) const;
  bool in_x_gamma(const Point& p) const { return p == x_gamma_; }
  bool x_gamma_in_x_lambda() const { return in_x_lambda(x_gamma_); }
  /// The point of X_Λ in the Λ-orbit of p, and the λ with λ*p equal to it.
  Point lambda_representative(const Point& p) const;
  Code lambda_correction(const Point& p) const;

  /// α(γ, x) for x in X_Λ: the unique λ with λ*(γ*x) in X_Λ.
  Code alpha(const Code& g, const Point& x) const;
  Point induced_gamma(const Code& g, const Point& x) const;
  /// β(λ, x) for x in X_Γ: the unique γ with γ*(λ*x) in X_Γ.
  Code beta(const Code& l, const Point& x) const;
  Point induced_lambda(const Code& l, const Point& x) const;

  std::uint64_t lambda_length(const Code& l) const { return metric_->length(l); }
  std::uint64_t gamma_length(const Code& g) const { return gamma_.word_length(g); }
  /// Elements of Λ of S_Λ-length <= radius, in BFS order.
  std::vector<Code> lambda_ball(std::uint64_t radius) const { return metric_->ball(radius); }
  /// Largest word length of a domain point over X_Γ ∪ X_Λ, plus one on the
  /// fibred space.
  std::uint64_t domain_constant() const;

  std::string format(const Point& p) const;
  Point parse_point(const std::string& omega, std::size_t fiber = 0) const;

 private:
  Coupling() = default;

  Code gamma_element(const Code& g, std::size_t k) const;
  std::pair<Code, std::size_t> gamma_parts(const Code& g) const;

  CouplingSpec spec_;
  MarkedGroup ambient_{free_group(1)};
  MarkedGroup gamma_{free_group(1)};
  std::shared_ptr<FiniteIndexSubgroup> subgroup_;
  std::shared_ptr<SubgroupMetric> metric_;
  std::vector<Code> fibers_;
  std::vector<std::vector<Code>> reps_;  // reps_[fiber][coset]
  Point x_gamma_;
  Rational weight_ = 1;
};

nlohmann::json to_json(const Coupling& c);

/// Outcome of an exhaustive identity check.
struct CheckReport {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> examples;  // first few violations
  bool pass() const { return violations == 0; }
};

nlohmann::json to_json(const CheckReport& r);

/// α(γ'γ, x) = α(γ', γ·x) α(γ, x) over |γ|, |γ'| <= radius, x in X_Λ, and
/// β(λ'λ, x) = β(λ', λ·x) β(λ, x) over |λ|, |λ'| <= radius, x in X_Γ.
struct CocycleIdentityReport {
  CheckReport alpha;
  CheckReport beta;
};

CocycleIdentityReport check_cocycle_identity(const Coupling& c, std::uint64_t radius);
/// α(β(λ, x), x) = λ for |λ| <= radius, x in X_Γ. Needs X_Γ ⊆ X_Λ.
CheckReport check_inverse_relation(const Coupling& c, std::uint64_t radius);
/// b_x(u)^-1 b_x(v) = β(v^-1 u, u^-1·x)^-1 with b_x(λ) = β(λ^-1, x)^-1.
CheckReport check_identity_8(const Coupling& c, std::uint64_t radius);

/// Ball truncations of the fundamental-domain axioms: (g, x) -> g*x is
/// injective for |g| <= radius and covers every point with |ω| <= radius - c.
struct DomainAxiomReport {
  std::uint64_t radius = 0;
  std::uint64_t constant = 0;
  CheckReport gamma_injective;
  CheckReport gamma_covers;
  CheckReport lambda_injective;
  CheckReport lambda_covers;
  CheckReport transversal;  // each sampled ω has exactly one coset representative
  bool pass() const {
    return gamma_injective.pass() && gamma_covers.pass() && lambda_injective.pass() &&
           lambda_covers.pass() && transversal.pass();
  }
};

DomainAxiomReport check_domain_axioms(const Coupling& c, std::uint64_t radius);
nlohmann::json to_json(const DomainAxiomReport& r);

enum class Side { gamma, lambda };

/// π_{X1,X2} between two fundamental domains of the same action.
struct ProjectionReport {
  Side side = Side::lambda;
  std::vector<std::pair<Point, Point>> projection;
  /// Correction elements g with g*x = π(x); finite, hence L∞-equivalent.
  std::vector<Code> corrections;
  bool linf_equivalent = true;
  RationalInterval similarity_integral;
};

/// X1 and X2 are given as ω-words on the plain coupling.
ProjectionReport projection_and_similarity(const Coupling& c, Side side,
                                           const std::vector<Code>& x1,
                                           const std::vector<Code>& x2,
                                           const IntegrabilityFunction& phi);
nlohmann::json to_json(const ProjectionReport& r, const Coupling& c);

struct IntegrabilityReport {
  /// K = max over s in S_Γ of Σ_{x in X_Λ} φ(|α(s, x)|_{S_Λ}) μ(x).
  RationalInterval k;
  Code k_argmax;
  /// L = max over t in S_Λ of Σ_{x in X_Γ} ψ(|β(t, x)|_{S_Γ}) μ(x).
  RationalInterval l;
  Code l_argmax;
  /// max over t in S_Λ, x in X_Γ of |β(t, x)|_{S_Γ}.
  std::uint64_t beta_sup = 0;
  std::string phi;
  std::string psi;
};

IntegrabilityReport integrability_report(const Coupling& c, const IntegrabilityFunction& phi,
                                         const IntegrabilityFunction& psi);
nlohmann::json to_json(const IntegrabilityReport& r, const Coupling& c);

/// Smallest F ⊂ Λ with X_Γ ⊆ F*X_Λ. On these couplings it is a single element.
std::vector<Code> coboundedness_witness(const Coupling& c);

struct StrengthenResult {
  Coupling coupling;
  DomainAxiomReport axioms;
  CheckReport inclusion;   // X̃_Γ̃ ⊆ X̃_Λ
  CheckReport step_bound;  // d((x, f), (x, f')) <= 1
  CheckReport growth;      // Vol_Γ̃(r) <= |K_grp| Vol_Γ(r), r <= 6
  bool pass() const { return axioms.pass() && inclusion.pass() && step_bound.pass() && growth.pass(); }
};

/// The Ω x F construction. F must contain a coboundedness witness.
StrengthenResult strengthen_coboundedness(const Coupling& c, const std::vector<Code>& f,
                                          std::uint64_t axiom_radius = 3);
nlohmann::json to_json(const StrengthenResult& r);

struct ClaimReport {
  bool degenerate = false;  // u = v, not asserted
  std::uint64_t lambda_distance = 0;
  std::uint64_t radius = 0;
  Rational measured;
  RationalInterval bound;
  /// nullopt when the enclosures overlap.
  std::optional<bool> pass;
  CheckReport identity_8;
};

/// μ{x in X_Γ : d(b_x(u), b_x(v)) <= R} against K R Vol_{S_Γ}(R) / φ(d_{S_Λ}(u, v) / R).
ClaimReport claim_bound_check(const Coupling& c, const Code& u, const Code& v, std::uint64_t radius,
                              const IntegrabilityFunction& phi);
nlohmann::json to_json(const ClaimReport& r);

struct ClaimSweepReport {
  std::uint64_t lambda_radius = 0;
  std::vector<std::uint64_t> radii;
  std::vector<std::string> phis;
  std::uint64_t checked = 0;
  std::uint64_t degenerate = 0;
  std::uint64_t failures = 0;
  std::uint64_t inconclusive = 0;
  std::vector<std::string> examples;
  bool pass() const { return failures == 0 && inconclusive == 0; }
};

/// Every pair u != v in B_Λ(lambda_radius), every R, every φ.
ClaimSweepReport claim_sweep(const Coupling& c, std::uint64_t lambda_radius,
                             const std::vector<std::uint64_t>& radii,
                             const std::vector<IntegrabilityFunction>& phis);
nlohmann::json to_json(const ClaimSweepReport& r);

}  // namespace hypme
