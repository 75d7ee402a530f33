#include "hypme/coset_enumeration.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "hypme/error.hpp"

namespace hypme {

std::uint32_t CosetTable::trace(std::uint32_t coset, const Word& w) const {
  for (auto s : w) coset = next[coset][s];
  return coset;
}

std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors) {
  if (vectors.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& v : vectors) m.emplace_back(v.begin(), v.end());
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

namespace {

constexpr std::int64_t kUndefined = -1;

class ToddCoxeter {
 public:
  ToddCoxeter(const Group& g, std::size_t max_cosets) : max_cosets_(max_cosets) {
    for (const auto& gen : g.generators()) inverse_.push_back(gen.inverse);
    columns_ = inverse_.size();
    new_coset();
  }

  CosetTable run(const std::vector<Word>& relators, const std::vector<Word>& subgroup) {
    for (const auto& w : subgroup)
      if (!w.empty()) scan_and_fill(0, w);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      for (const auto& r : relators) {
        if (parent_[c] != static_cast<std::int64_t>(c)) break;
        scan_and_fill(c, r);
      }
      for (std::size_t s = 0; s < columns_; ++s) {
        if (parent_[c] != static_cast<std::int64_t>(c)) break;
        if (at(c, s) == kUndefined) define(c, s);
      }
    }
    return standardize();
  }

 private:
  std::int64_t& at(std::size_t c, std::size_t s) { return table_[c * columns_ + s]; }

  std::size_t new_coset() {
    if (live_ >= max_cosets_)
      throw BudgetExceeded("coset enumeration exceeded " + std::to_string(max_cosets_) +
                           " cosets; the index is undetermined within budget");
    std::size_t c = parent_.size();
    parent_.push_back(static_cast<std::int64_t>(c));
    table_.resize(table_.size() + columns_, kUndefined);
    ++live_;
    return c;
  }

  void define(std::size_t c, std::size_t s) {
    std::size_t d = new_coset();
    at(c, s) = static_cast<std::int64_t>(d);
    at(d, inverse_[s]) = static_cast<std::int64_t>(c);
  }

  void scan_and_fill(std::size_t c, const Word& w) {
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // scan the half-open range [i, j)
    while (true) {
      while (i < j && at(f, w[i]) != kUndefined) f = std::size_t(at(f, w[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && at(b, inverse_[w[j - 1]]) != kUndefined) b = std::size_t(at(b, inverse_[w[--j]]));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        at(f, w[i]) = static_cast<std::int64_t>(b);
        at(b, inverse_[w[i]]) = static_cast<std::int64_t>(f);
        return;
      }
      define(f, w[i]);
    }
  }

  std::size_t rep(std::size_t c) {
    std::size_t root = c;
    while (parent_[root] != static_cast<std::int64_t>(root)) root = std::size_t(parent_[root]);
    while (parent_[c] != static_cast<std::int64_t>(root)) {
      std::size_t up = std::size_t(parent_[c]);
      parent_[c] = static_cast<std::int64_t>(root);
      c = up;
    }
    return root;
  }

  void merge(std::size_t k, std::size_t l, std::deque<std::size_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent_[l] = static_cast<std::int64_t>(k);
    --live_;
    queue.push_back(l);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::deque<std::size_t> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      std::size_t e = queue.front();
      queue.pop_front();
      for (std::size_t s = 0; s < columns_; ++s) {
        if (at(e, s) == kUndefined) continue;
        std::size_t f = std::size_t(at(e, s));
        if (at(f, inverse_[s]) == static_cast<std::int64_t>(e)) at(f, inverse_[s]) = kUndefined;
        std::size_t e1 = rep(e), f1 = rep(f);
        if (at(e1, s) != kUndefined) {
          merge(f1, std::size_t(at(e1, s)), queue);
        } else if (at(f1, inverse_[s]) != kUndefined) {
          merge(e1, std::size_t(at(f1, inverse_[s])), queue);
        } else {
          at(e1, s) = static_cast<std::int64_t>(f1);
          at(f1, inverse_[s]) = static_cast<std::int64_t>(e1);
        }
      }
    }
  }

  CosetTable standardize() {
    std::vector<std::int64_t> renumber(parent_.size(), kUndefined);
    std::vector<std::size_t> order{0};
    renumber[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t s = 0; s < columns_; ++s) {
        std::size_t d = rep(std::size_t(at(order[k], s)));
        if (renumber[d] == kUndefined) {
          renumber[d] = static_cast<std::int64_t>(order.size());
          order.push_back(d);
        }
      }
    CosetTable t;
    t.next.assign(order.size(), std::vector<std::uint32_t>(columns_));
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t s = 0; s < columns_; ++s)
        t.next[k][s] = static_cast<std::uint32_t>(renumber[rep(std::size_t(at(order[k], s)))]);
    return t;
  }

  std::size_t max_cosets_;
  std::size_t columns_ = 0;
  std::size_t live_ = 0;
  std::vector<std::size_t> inverse_;
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> table_;
};

}  // namespace

CosetTable enumerate_cosets(const Group& g, const std::vector<Word>& subgroup_generators,
                            const CosetOptions& options) {
  std::size_t r = g.free_rank();
  if (r > 0) {
    std::vector<std::vector<std::int64_t>> images;
    for (const auto& w : subgroup_generators) {
      Code x = g.identity();
      for (auto s : w) x = g.multiply(x, g.generators()[s].code);
      images.push_back(g.abelian_image(x));
    }
    std::size_t k = integer_rank(images);
    if (k < r)
      throw PreconditionError("subgroup has infinite index: its abelianised image has rank " +
                              std::to_string(k) + " < " + std::to_string(r));
  }
  if (g.generators().empty()) {
    CosetTable t;
    t.next.assign(1, {});
    return t;
  }
  return ToddCoxeter(g, options.max_cosets).run(g.relators(), subgroup_generators);
}

FiniteIndexSubgroup::FiniteIndexSubgroup(MarkedGroup ambient, std::vector<Code> generators,
                                         const CosetOptions& options)
    : ambient_(std::move(ambient)), generators_(std::move(generators)) {
  const Group& g = ambient_.group();
  std::vector<Word> words;
  for (const auto& x : generators_) words.push_back(g.geodesic_word(x));
  table_ = enumerate_cosets(g, words, options);

  // Left coset x Λ corresponds to the right coset Λ x^-1; s (t Λ) = (s t) Λ
  // is the right coset reached from Λ t^-1 along s^-1.
  const std::size_t n = table_.index();
  left_of_right_.assign(n, n);
  left_of_right_[0] = 0;
  std::vector<std::size_t> right_of_left{0};
  transversal_.push_back(ambient_.identity());
  for (std::size_t k = 0; k < right_of_left.size(); ++k)
    for (std::size_t s = 0; s < ambient_.generator_count(); ++s) {
      std::size_t d = table_.next[right_of_left[k]][ambient_.inverse_generator(s)];
      if (left_of_right_[d] != n) continue;
      left_of_right_[d] = right_of_left.size();
      right_of_left.push_back(d);
      transversal_.push_back(ambient_.multiply(ambient_.generator(s), transversal_[k]));
    }

  std::map<std::tuple<std::uint64_t, std::string>, Code> found;
  auto add = [&](const Code& x) {
    if (x == ambient_.identity()) return;
    found.emplace(std::make_tuple(ambient_.word_length(x), ambient_.format(x)), x);
  };
  for (const auto& t : transversal_)
    for (std::size_t s = 0; s < ambient_.generator_count(); ++s) {
      Code st = ambient_.multiply(ambient_.generator(s), t);
      Code h = ambient_.multiply(ambient_.inverse(representative(st)), st);
      add(h);
      add(ambient_.inverse(h));
    }
  for (auto& [key, x] : found) schreier_.push_back(x);
}

std::size_t FiniteIndexSubgroup::coset_of(const Code& x) const {
  const Group& g = ambient_.group();
  return left_of_right_[table_.trace(0, g.geodesic_word(g.inverse(x)))];
}

SubgroupMetric::SubgroupMetric(MarkedGroup ambient, std::vector<Code> generators,
                               std::size_t max_elements)
    : ambient_(std::move(ambient)), generators_(std::move(generators)), max_elements_(max_elements) {
  Code e = ambient_.identity();
  dist_.emplace(e, 0);
  order_.push_back(e);
}

void SubgroupMetric::grow() {
  std::size_t end = order_.size();
  for (std::size_t i = layer_start_; i < end; ++i)
    for (const auto& s : generators_) {
      Code y = ambient_.multiply(order_[i], s);
      if (dist_.count(y)) continue;
      if (order_.size() >= max_elements_)
        throw BudgetExceeded("subgroup word-metric search exceeded " + std::to_string(max_elements_) +
                             " elements at radius " + std::to_string(radius_ + 1));
      dist_.emplace(y, radius_ + 1);
      order_.push_back(std::move(y));
    }
  layer_start_ = end;
  ++radius_;
}

std::uint64_t SubgroupMetric::length(const Code& x) {
  while (true) {
    auto it = dist_.find(x);
    if (it != dist_.end()) return it->second;
    if (layer_start_ == order_.size())
      throw PreconditionError("element " + ambient_.format(x) + " is not in the subgroup");
    grow();
  }
}

std::vector<Code> SubgroupMetric::ball(std::uint64_t radius) {
  while (radius_ < radius && layer_start_ < order_.size()) grow();
  std::vector<Code> out;
  for (const auto& x : order_)
    if (dist_.at(x) <= radius) out.push_back(x);
  return out;
}

}  // namespace hypme
