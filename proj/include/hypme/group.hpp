#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hypme/graph.hpp"
#include "hypme/numeric.hpp"

namespace hypme {

/// Canonical normal form of a group element. The layout is family specific.
using Code = std::vector<std::int32_t>;

struct CodeHash {
  std::size_t operator()(const Code& c) const noexcept;
};

/// A word is a sequence of indices into the generator list.
using Word = std::vector<std::size_t>;

struct Generator {
  Code code;
  std::size_t inverse = 0;  // index of the inverse generator (itself for involutions)
};

/// A group with a fixed finite symmetric generating set and exact normal forms.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string expression() const = 0;
  virtual Code identity() const = 0;
  virtual Code multiply(const Code& x, const Code& y) const = 0;
  virtual Code inverse(const Code& x) const = 0;
  /// A shortest word representing x.
  virtual Word geodesic_word(const Code& x) const = 0;
  virtual std::uint64_t word_length(const Code& x) const { return geodesic_word(x).size(); }
  /// Group order, or nullopt for infinite groups.
  virtual std::optional<BigInt> order() const = 0;
  /// Rank of the abelianisation modulo torsion, and the image of x there.
  virtual std::size_t free_rank() const = 0;
  virtual std::vector<std::int64_t> abelian_image(const Code& x) const = 0;
  /// Defining relators over the generator indices.
  virtual std::vector<Word> relators() const = 0;
  /// Ent(S) = ln(base) when known exactly for this generating set.
  virtual std::optional<Rational> entropy_base() const = 0;
  /// Closed-form Vol_S(R) when the family has one.
  virtual std::optional<BigInt> volume(std::uint64_t) const { return std::nullopt; }

  const std::vector<Generator>& generators() const { return generators_; }

 protected:
  std::vector<Generator> generators_;
};

using GroupPtr = std::shared_ptr<const Group>;

GroupPtr free_group(std::size_t rank);
GroupPtr free_abelian_group(std::size_t rank);
/// Cyclic group of order n. With `all_generators` every non-identity residue
/// is a generator, so every non-trivial element has length 1.
GroupPtr cyclic_group(std::size_t n, bool all_generators = false);
GroupPtr free_product(std::vector<GroupPtr> factors);
/// Nested products are flattened unless `flatten` is false.
GroupPtr direct_product(std::vector<GroupPtr> factors, bool flatten = true);
/// Codes of direct products are the factor codes, each prefixed by its length.
std::vector<Code> split_direct_product(const Code& x, std::size_t factor_count);
Code join_direct_product(const std::vector<Code>& parts);

/// Group expression grammar: F<k>, Z, Z^<d>, C<n>, parentheses, free
/// product '*', direct product 'x'. 'x' binds tighter than '*'.
GroupPtr parse_group_expression(std::string_view text);

/// A group together with the naming of its generators: letters a, b, c, d,
/// f, ... (e is reserved for the identity), uppercase for inverses.
class MarkedGroup {
 public:
  explicit MarkedGroup(GroupPtr group);

  const Group& group() const { return *group_; }
  const GroupPtr& ptr() const { return group_; }
  std::string expression() const { return group_->expression(); }
  std::size_t generator_count() const { return group_->generators().size(); }
  const Code& generator(std::size_t i) const { return group_->generators()[i].code; }
  std::size_t inverse_generator(std::size_t i) const { return group_->generators()[i].inverse; }
  char letter(std::size_t i) const { return letters_[i]; }

  Code identity() const { return group_->identity(); }
  Code multiply(const Code& x, const Code& y) const { return group_->multiply(x, y); }
  Code inverse(const Code& x) const { return group_->inverse(x); }
  std::uint64_t word_length(const Code& x) const { return group_->word_length(x); }
  Code evaluate(const Word& w) const;

  /// Accepts "e", letter words, and "(w1,w2,...)" for direct products.
  Code parse(std::string_view text) const;
  Word parse_word(std::string_view text) const;
  /// Canonical text of an element: its geodesic word, or a tuple of words
  /// for direct products.
  std::string format(const Code& x) const;
  std::string format_word(const Word& w) const;

 private:
  GroupPtr group_;
  std::vector<char> letters_;
  std::unordered_map<char, std::size_t> by_letter_;
  /// For direct products, the generator index range of each factor.
  std::vector<std::pair<std::size_t, std::size_t>> factor_ranges_;
};

MarkedGroup parse_group(std::string_view text);

struct GrowthTable {
  std::vector<BigInt> volume;  // volume[n] = Vol_S(n)
  std::size_t max_radius() const { return volume.empty() ? 0 : volume.size() - 1; }
};

std::string to_csv(const GrowthTable& t);
GrowthTable growth_from_csv(std::string_view text);

struct BallOptions {
  std::size_t max_elements = 5'000'000;
  bool build_graph = true;
};

struct CayleyBall {
  std::uint64_t radius = 0;
  std::vector<Code> elements;        // BFS order
  std::vector<std::uint32_t> length;  // word length of each element
  GrowthTable growth;
  std::optional<Graph> graph;        // Cayley graph restricted to the ball
  std::unordered_map<Code, std::uint32_t, CodeHash> index;

  std::optional<std::uint32_t> find(const Code& x) const;
};

/// Exact BFS ball B(e, R) by right multiplication with generators.
CayleyBall ball(const MarkedGroup& g, std::uint64_t radius, const BallOptions& options = {});
nlohmann::json to_json(const CayleyBall& b, const MarkedGroup& g);

struct EntropyEstimate {
  /// ln Vol(n) / n for n = 1..R.
  std::vector<long double> point_estimates;
  /// ln Vol(R) / R rounded up. Ball growth is submultiplicative, so this
  /// bounds the entropy from above.
  Rational upper_bound;
  std::optional<Rational> declared_base;  // Ent = ln(declared_base)
  std::optional<RationalInterval> declared;
};

EntropyEstimate entropy_estimate(const GrowthTable& t,
                                 const std::optional<Rational>& declared_base = std::nullopt);
nlohmann::json to_json(const EntropyEstimate& e);

}  // namespace hypme
