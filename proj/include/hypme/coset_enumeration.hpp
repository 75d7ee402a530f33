#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypme/group.hpp"

namespace hypme {

struct CosetOptions {
  std::size_t max_cosets = 200'000;
};

/// Coset table of right cosets H w; coset 0 is H itself.
struct CosetTable {
  std::vector<std::vector<std::uint32_t>> next;  // next[c][s] = c . s

  std::size_t index() const { return next.size(); }
  std::uint32_t trace(std::uint32_t coset, const Word& w) const;
};

/// Todd-Coxeter (HLT strategy with coincidence processing). Subgroups whose
/// abelianised image has smaller rank than the group's have infinite index
/// and are rejected with a PreconditionError before enumerating. Running
/// past max_cosets raises BudgetExceeded.
CosetTable enumerate_cosets(const Group& g, const std::vector<Word>& subgroup_generators,
                            const CosetOptions& options = {});

/// Rank of the subgroup of Z^r spanned by the vectors.
std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors);

/// A finite-index subgroup with its left cosets G = ⊔ t Λ.
class FiniteIndexSubgroup {
 public:
  FiniteIndexSubgroup(MarkedGroup ambient, std::vector<Code> generators,
                      const CosetOptions& options = {});

  const MarkedGroup& ambient() const { return ambient_; }
  std::size_t index() const { return transversal_.size(); }
  const std::vector<Code>& generators() const { return generators_; }
  /// Left-coset representatives of minimal word length, found by BFS;
  /// transversal()[0] is the identity.
  const std::vector<Code>& transversal() const { return transversal_; }
  /// Index of the left coset x Λ.
  std::size_t coset_of(const Code& x) const;
  const Code& representative(const Code& x) const { return transversal_[coset_of(x)]; }
  bool contains(const Code& x) const { return coset_of(x) == 0; }
  /// rep(s t)^-1 s t over generators s and representatives t: non-trivial,
  /// closed under inverses, sorted by (length, word).
  const std::vector<Code>& schreier_generators() const { return schreier_; }

 private:
  MarkedGroup ambient_;
  std::vector<Code> generators_;
  CosetTable table_;
  std::vector<std::size_t> left_of_right_;
  std::vector<Code> transversal_;
  std::vector<Code> schreier_;
};

/// Word metric of a subgroup for an explicit generating set, evaluated by
/// breadth-first search in the subgroup's Cayley graph. Results are cached.
class SubgroupMetric {
 public:
  SubgroupMetric(MarkedGroup ambient, std::vector<Code> generators,
                 std::size_t max_elements = 2'000'000);

  /// |x| for x in the span of the generators; BudgetExceeded past max_elements.
  std::uint64_t length(const Code& x);
  std::uint64_t distance(const Code& u, const Code& v) {
    return length(ambient_.multiply(ambient_.inverse(u), v));
  }
  /// All elements of length <= radius, in BFS order.
  std::vector<Code> ball(std::uint64_t radius);
  const std::vector<Code>& generators() const { return generators_; }

 private:
  void grow();

  MarkedGroup ambient_;
  std::vector<Code> generators_;
  std::size_t max_elements_;
  std::unordered_map<Code, std::uint64_t, CodeHash> dist_;
  std::vector<Code> order_;
  std::size_t layer_start_ = 0;
  std::uint64_t radius_ = 0;
};

}  // namespace hypme
