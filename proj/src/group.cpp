#include "hypme/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <boost/container_hash/hash.hpp>

#include "hypme/error.hpp"

namespace hypme {

std::size_t CodeHash::operator()(const Code& c) const noexcept {
  return boost::hash_range(c.begin(), c.end());
}

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt free_volume(std::size_t rank, std::uint64_t radius) {
  if (rank == 0) return 1;
  if (rank == 1) return BigInt(2 * radius + 1);
  BigInt q = boost::multiprecision::pow(BigInt(2 * rank - 1), static_cast<unsigned>(radius));
  return (BigInt(rank) * q - 1) / (rank - 1);
}

class FreeGroup final : public Group {
 public:
  explicit FreeGroup(std::size_t rank) : rank_(rank) {
    for (std::size_t i = 0; i < rank; ++i) {
      auto letter = static_cast<std::int32_t>(i + 1);
      generators_.push_back({{letter}, 2 * i + 1});
      generators_.push_back({{-letter}, 2 * i});
    }
  }

  std::string expression() const override { return "F" + std::to_string(rank_); }
  Code identity() const override { return {}; }

  Code multiply(const Code& x, const Code& y) const override {
    Code r = x;
    for (auto l : y) {
      if (!r.empty() && r.back() == -l)
        r.pop_back();
      else
        r.push_back(l);
    }
    return r;
  }

  Code inverse(const Code& x) const override {
    Code r(x.rbegin(), x.rend());
    for (auto& l : r) l = -l;
    return r;
  }

  Word geodesic_word(const Code& x) const override {
    Word w;
    w.reserve(x.size());
    for (auto l : x) w.push_back(l > 0 ? 2 * std::size_t(l - 1) : 2 * std::size_t(-l - 1) + 1);
    return w;
  }

  std::uint64_t word_length(const Code& x) const override { return x.size(); }
  std::optional<BigInt> order() const override {
    return rank_ == 0 ? std::optional<BigInt>(1) : std::nullopt;
  }
  std::size_t free_rank() const override { return rank_; }

  std::vector<std::int64_t> abelian_image(const Code& x) const override {
    std::vector<std::int64_t> v(rank_, 0);
    for (auto l : x) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
    return v;
  }

  std::vector<Word> relators() const override { return {}; }
  std::optional<Rational> entropy_base() const override {
    return Rational(rank_ == 0 ? 1 : 2 * rank_ - 1);
  }
  std::optional<BigInt> volume(std::uint64_t radius) const override {
    return free_volume(rank_, radius);
  }

 private:
  std::size_t rank_;
};

class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(std::size_t rank) : rank_(rank) {
    for (std::size_t i = 0; i < rank; ++i) {
      Code plus(rank, 0), minus(rank, 0);
      plus[i] = 1;
      minus[i] = -1;
      generators_.push_back({plus, 2 * i + 1});
      generators_.push_back({minus, 2 * i});
    }
  }

  std::string expression() const override {
    return rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_);
  }
  Code identity() const override { return Code(rank_, 0); }

  Code multiply(const Code& x, const Code& y) const override {
    Code r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r[i] = x[i] + y[i];
    return r;
  }

  Code inverse(const Code& x) const override {
    Code r(rank_);
    for (std::size_t i = 0; i < rank_; ++i) r[i] = -x[i];
    return r;
  }

  Word geodesic_word(const Code& x) const override {
    Word w;
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::int32_t k = 0; k < std::abs(x[i]); ++k) w.push_back(x[i] > 0 ? 2 * i : 2 * i + 1);
    return w;
  }

  std::uint64_t word_length(const Code& x) const override {
    std::uint64_t s = 0;
    for (auto v : x) s += static_cast<std::uint64_t>(std::abs(std::int64_t(v)));
    return s;
  }

  std::optional<BigInt> order() const override {
    return rank_ == 0 ? std::optional<BigInt>(1) : std::nullopt;
  }
  std::size_t free_rank() const override { return rank_; }
  std::vector<std::int64_t> abelian_image(const Code& x) const override {
    return {x.begin(), x.end()};
  }

  std::vector<Word> relators() const override {
    std::vector<Word> rels;
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = i + 1; j < rank_; ++j) rels.push_back({2 * i, 2 * j, 2 * i + 1, 2 * j + 1});
    return rels;
  }

  std::optional<Rational> entropy_base() const override { return Rational(1); }

  std::optional<BigInt> volume(std::uint64_t radius) const override {
    BigInt total = 0;
    for (std::uint64_t i = 0; i <= std::min<std::uint64_t>(rank_, radius); ++i)
      total += (BigInt(1) << i) * binomial(rank_, i) * binomial(radius, i);
    return total;
  }

 private:
  std::size_t rank_;
};

class CyclicGroup final : public Group {
 public:
  CyclicGroup(std::size_t n, bool all) : n_(n), all_(all) {
    if (n == 0) throw PreconditionError("cyclic group order must be positive");
    auto code = [](std::size_t r) { return Code{static_cast<std::int32_t>(r)}; };
    all_ = all && n > 3;
    if (!all_) {
      if (n == 2) {
        generators_.push_back({code(1), 0});
      } else if (n >= 3) {
        generators_.push_back({code(1), 1});
        generators_.push_back({code(n - 1), 0});
      }
      return;
    }
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      std::size_t i = generators_.size();
      if (2 * k == n) {
        generators_.push_back({code(k), i});
      } else {
        generators_.push_back({code(k), i + 1});
        generators_.push_back({code(n - k), i});
      }
    }
  }

  std::string expression() const override {
    return "C" + std::to_string(n_) + (all_ ? "[all]" : "");
  }
  Code identity() const override { return {0}; }

  Code multiply(const Code& x, const Code& y) const override {
    return {static_cast<std::int32_t>((std::size_t(x[0]) + std::size_t(y[0])) % n_)};
  }
  Code inverse(const Code& x) const override {
    return {static_cast<std::int32_t>((n_ - std::size_t(x[0])) % n_)};
  }

  Word geodesic_word(const Code& x) const override {
    auto r = std::size_t(x[0]);
    if (r == 0) return {};
    if (all_) {
      for (std::size_t i = 0; i < generators_.size(); ++i)
        if (std::size_t(generators_[i].code[0]) == r) return {i};
    }
    if (n_ == 2) return {0};
    if (r <= n_ - r) return Word(r, 0);
    return Word(n_ - r, 1);
  }

  std::optional<BigInt> order() const override { return BigInt(n_); }
  std::size_t free_rank() const override { return 0; }
  std::vector<std::int64_t> abelian_image(const Code&) const override { return {}; }

  std::vector<Word> relators() const override {
    if (n_ == 1) return {};
    std::vector<Word> rels{Word(n_, 0)};
    std::size_t back = generators_[0].inverse;
    for (std::size_t i = 1; i < generators_.size(); ++i) {
      if (i == back) continue;
      Word w{i};
      w.insert(w.end(), std::size_t(generators_[i].code[0]), back);
      rels.push_back(w);
    }
    return rels;
  }

  std::optional<Rational> entropy_base() const override { return Rational(1); }

  std::optional<BigInt> volume(std::uint64_t radius) const override {
    if (n_ == 1 || radius == 0) return BigInt(1);
    if (all_) return BigInt(n_);
    if (n_ == 2) return BigInt(2);
    return BigInt(std::min<std::uint64_t>(2 * radius + 1, n_));
  }

 private:
  std::size_t n_;
  bool all_;
};

// A factor is free on its generators when it is infinite, has no relators
// and only paired generators.
std::optional<std::size_t> free_basis_rank(const Group& g) {
  if (g.order() || !g.relators().empty()) return std::nullopt;
  for (std::size_t i = 0; i < g.generators().size(); ++i)
    if (g.generators()[i].inverse == i) return std::nullopt;
  return g.generators().size() / 2;
}

bool trivial(const Group& g) {
  auto o = g.order();
  return o && *o == 1;
}

std::string wrap(const Group& g, char op) {
  std::string e = g.expression();
  bool needs = e.find(op == 'x' ? '*' : '\0') != std::string::npos;
  return needs ? "(" + e + ")" : e;
}

class CompositeGroup : public Group {
 public:
  explicit CompositeGroup(std::vector<GroupPtr> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      offsets_.push_back(generators_.size());
      for (const auto& gen : f->generators()) generators_.push_back({{}, gen.inverse + offsets_.back()});
    }
    offsets_.push_back(generators_.size());
  }

  const std::vector<GroupPtr>& factors() const { return factors_; }
  std::pair<std::size_t, std::size_t> generator_range(std::size_t factor) const {
    return {offsets_[factor], offsets_[factor + 1]};
  }

  std::size_t free_rank() const override {
    std::size_t r = 0;
    for (const auto& f : factors_) r += f->free_rank();
    return r;
  }

  std::vector<Word> relators() const override {
    std::vector<Word> rels;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      for (auto w : factors_[i]->relators()) {
        for (auto& s : w) s += offsets_[i];
        rels.push_back(std::move(w));
      }
    return rels;
  }

 protected:
  std::vector<GroupPtr> factors_;
  std::vector<std::size_t> offsets_;
};

// Direct product codes: for each factor, its code length followed by the code.
class DirectProductGroup final : public CompositeGroup {
 public:
  explicit DirectProductGroup(std::vector<GroupPtr> factors) : CompositeGroup(std::move(factors)) {
    std::vector<Code> parts;
    for (const auto& f : factors_) parts.push_back(f->identity());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& gens = factors_[i]->generators();
      for (std::size_t j = 0; j < gens.size(); ++j) {
        auto p = parts;
        p[i] = gens[j].code;
        generators_[offsets_[i] + j].code = join(p);
      }
    }
  }

  std::string expression() const override {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "x";
      s += wrap(*factors_[i], 'x');
    }
    return s;
  }

  Code identity() const override {
    std::vector<Code> parts;
    for (const auto& f : factors_) parts.push_back(f->identity());
    return join(parts);
  }

  Code multiply(const Code& x, const Code& y) const override {
    auto a = split(x), b = split(y);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = factors_[i]->multiply(a[i], b[i]);
    return join(a);
  }

  Code inverse(const Code& x) const override {
    auto a = split(x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = factors_[i]->inverse(a[i]);
    return join(a);
  }

  Word geodesic_word(const Code& x) const override {
    auto a = split(x);
    Word w;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (auto s : factors_[i]->geodesic_word(a[i])) w.push_back(s + offsets_[i]);
    return w;
  }

  std::uint64_t word_length(const Code& x) const override {
    auto a = split(x);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += factors_[i]->word_length(a[i]);
    return s;
  }

  std::optional<BigInt> order() const override {
    BigInt o = 1;
    for (const auto& f : factors_) {
      auto fo = f->order();
      if (!fo) return std::nullopt;
      o *= *fo;
    }
    return o;
  }

  std::vector<std::int64_t> abelian_image(const Code& x) const override {
    auto a = split(x);
    std::vector<std::int64_t> v;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto part = factors_[i]->abelian_image(a[i]);
      v.insert(v.end(), part.begin(), part.end());
    }
    return v;
  }

  std::vector<Word> relators() const override {
    auto rels = CompositeGroup::relators();
    auto primary = [&](std::size_t s) { return generators_[s].inverse >= s; };
    for (std::size_t i = 0; i < factors_.size(); ++i)
      for (std::size_t j = i + 1; j < factors_.size(); ++j)
        for (std::size_t s = offsets_[i]; s < offsets_[i + 1]; ++s)
          for (std::size_t t = offsets_[j]; t < offsets_[j + 1]; ++t)
            if (primary(s) && primary(t))
              rels.push_back({s, t, generators_[s].inverse, generators_[t].inverse});
    return rels;
  }

  std::optional<Rational> entropy_base() const override {
    std::optional<Rational> result = Rational(1);
    int positive = 0;
    for (const auto& f : factors_) {
      auto b = f->entropy_base();
      if (!b) return std::nullopt;
      if (*b > 1) {
        ++positive;
        result = b;
      }
    }
    if (positive > 1) return std::nullopt;
    return result;
  }

  // Vol(R) = sum_k |S_first(k)| * Vol_rest(R - k).
  std::optional<BigInt> volume(std::uint64_t radius) const override {
    return volume_from(0, radius);
  }

  std::vector<Code> split(const Code& x) const { return split_direct_product(x, factors_.size()); }

  static Code join(const std::vector<Code>& parts) {
    Code c;
    for (const auto& p : parts) {
      c.push_back(static_cast<std::int32_t>(p.size()));
      c.insert(c.end(), p.begin(), p.end());
    }
    return c;
  }

 private:
  std::optional<BigInt> volume_from(std::size_t i, std::uint64_t radius) const {
    if (i + 1 == factors_.size()) return factors_[i]->volume(radius);
    BigInt total = 0;
    BigInt previous = 0;
    for (std::uint64_t k = 0; k <= radius; ++k) {
      auto vk = factors_[i]->volume(k);
      auto rest = volume_from(i + 1, radius - k);
      if (!vk || !rest) return std::nullopt;
      total += (*vk - previous) * *rest;
      previous = *vk;
    }
    return total;
  }
};

// Free product codes: syllables (factor, length, code...) with consecutive
// syllables in different factors and no trivial syllable.
class FreeProductGroup final : public CompositeGroup {
 public:
  explicit FreeProductGroup(std::vector<GroupPtr> factors) : CompositeGroup(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& gens = factors_[i]->generators();
      for (std::size_t j = 0; j < gens.size(); ++j)
        generators_[offsets_[i] + j].code = encode({{i, gens[j].code}});
    }
  }

  std::string expression() const override {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "*";
      s += factors_[i]->expression();
    }
    return s;
  }

  Code identity() const override { return {}; }

  Code multiply(const Code& x, const Code& y) const override {
    auto a = decode(x), b = decode(y);
    std::size_t j = 0;
    while (!a.empty() && j < b.size() && a.back().first == b[j].first) {
      std::size_t f = b[j].first;
      Code prod = factors_[f]->multiply(a.back().second, b[j].second);
      a.pop_back();
      ++j;
      if (prod != factors_[f]->identity()) {
        a.emplace_back(f, std::move(prod));
        break;
      }
    }
    a.insert(a.end(), b.begin() + j, b.end());
    return encode(a);
  }

  Code inverse(const Code& x) const override {
    auto a = decode(x);
    std::reverse(a.begin(), a.end());
    for (auto& [f, c] : a) c = factors_[f]->inverse(c);
    return encode(a);
  }

  Word geodesic_word(const Code& x) const override {
    Word w;
    for (const auto& [f, c] : decode(x))
      for (auto s : factors_[f]->geodesic_word(c)) w.push_back(s + offsets_[f]);
    return w;
  }

  std::uint64_t word_length(const Code& x) const override {
    std::uint64_t s = 0;
    for (const auto& [f, c] : decode(x)) s += factors_[f]->word_length(c);
    return s;
  }

  std::optional<BigInt> order() const override {
    std::optional<BigInt> result = BigInt(1);
    int nontrivial = 0;
    for (const auto& f : factors_)
      if (!trivial(*f)) {
        ++nontrivial;
        result = f->order();
      }
    if (nontrivial > 1) return std::nullopt;
    return result;
  }

  std::vector<std::int64_t> abelian_image(const Code& x) const override {
    std::vector<std::size_t> start;
    std::size_t total = 0;
    for (const auto& f : factors_) {
      start.push_back(total);
      total += f->free_rank();
    }
    std::vector<std::int64_t> v(total, 0);
    for (const auto& [f, c] : decode(x)) {
      auto part = factors_[f]->abelian_image(c);
      for (std::size_t k = 0; k < part.size(); ++k) v[start[f] + k] += part[k];
    }
    return v;
  }

  std::optional<Rational> entropy_base() const override {
    std::vector<GroupPtr> live;
    for (const auto& f : factors_)
      if (!trivial(*f)) live.push_back(f);
    if (live.empty()) return Rational(1);
    if (live.size() == 1) return live[0]->entropy_base();
    std::size_t rank = 0;
    bool all_free = true;
    for (const auto& f : live) {
      auto r = free_basis_rank(*f);
      if (!r) {
        all_free = false;
        break;
      }
      rank += *r;
    }
    if (all_free) return Rational(2 * rank - 1);
    // The infinite dihedral group C2*C2 grows linearly.
    if (live.size() == 2 && std::all_of(live.begin(), live.end(), [](const GroupPtr& f) {
          return f->order() == BigInt(2) && f->generators().size() == 1;
        }))
      return Rational(1);
    return std::nullopt;
  }

  std::optional<BigInt> volume(std::uint64_t radius) const override {
    std::vector<GroupPtr> live;
    for (const auto& f : factors_)
      if (!trivial(*f)) live.push_back(f);
    if (live.empty()) return BigInt(1);
    if (live.size() == 1) return live[0]->volume(radius);
    std::size_t rank = 0;
    for (const auto& f : live) {
      auto r = free_basis_rank(*f);
      if (!r) return std::nullopt;
      rank += *r;
    }
    return free_volume(rank, radius);
  }

 private:
  using Syllables = std::vector<std::pair<std::size_t, Code>>;

  static Syllables decode(const Code& x) {
    Syllables s;
    std::size_t pos = 0;
    while (pos < x.size()) {
      auto f = std::size_t(x[pos]);
      auto len = std::size_t(x[pos + 1]);
      s.emplace_back(f, Code(x.begin() + pos + 2, x.begin() + pos + 2 + len));
      pos += 2 + len;
    }
    return s;
  }

  static Code encode(const Syllables& s) {
    Code c;
    for (const auto& [f, code] : s) {
      c.push_back(static_cast<std::int32_t>(f));
      c.push_back(static_cast<std::int32_t>(code.size()));
      c.insert(c.end(), code.begin(), code.end());
    }
    return c;
  }
};

template <class Product>
GroupPtr flatten_product(std::vector<GroupPtr> factors) {
  if (factors.empty()) throw PreconditionError("a product needs at least one factor");
  std::vector<GroupPtr> flat;
  for (auto& f : factors) {
    if (auto* p = dynamic_cast<const Product*>(f.get()))
      flat.insert(flat.end(), p->factors().begin(), p->factors().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.size() == 1) return flat.front();
  return std::make_shared<Product>(std::move(flat));
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
  }

  GroupPtr parse() {
    if (text_.empty()) fail("empty group expression");
    auto g = free_product_expr();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return g;
  }

 private:
  GroupPtr free_product_expr() {
    std::vector<GroupPtr> factors{direct_product_expr()};
    while (accept('*')) factors.push_back(direct_product_expr());
    return flatten_product<FreeProductGroup>(std::move(factors));
  }

  GroupPtr direct_product_expr() {
    std::vector<GroupPtr> factors{atom()};
    while (accept('x')) factors.push_back(atom());
    return flatten_product<DirectProductGroup>(std::move(factors));
  }

  GroupPtr atom() {
    if (accept('(')) {
      auto g = free_product_expr();
      if (!accept(')')) fail("expected ')'");
      return g;
    }
    if (accept('F')) {
      auto k = number();
      if (k == 0) fail("free group rank must be at least 1");
      return free_group(k);
    }
    if (accept('Z')) {
      if (!accept('^')) return free_abelian_group(1);
      auto d = number();
      if (d == 0) fail("free abelian rank must be at least 1");
      return free_abelian_group(d);
    }
    if (accept('C')) {
      auto n = number();
      if (n == 0) fail("cyclic order must be at least 1");
      return cyclic_group(n);
    }
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    fail("unexpected end of expression");
  }

  std::size_t number() {
    std::size_t start = pos_;
    std::size_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + std::size_t(text_[pos_] - '0');
      if (v > 1'000'000) fail("number too large");
      ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return v;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("group expression '" + text_ + "' at position " + std::to_string(pos_) + ": " +
                     message);
  }

  std::string text_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kLetters = "abcdfghijklmnopqrstuvwxyz";

nlohmann::json big_to_json(const BigInt& v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return to_string(v);
}

}  // namespace

GroupPtr free_group(std::size_t rank) { return std::make_shared<FreeGroup>(rank); }
GroupPtr free_abelian_group(std::size_t rank) { return std::make_shared<FreeAbelianGroup>(rank); }
GroupPtr cyclic_group(std::size_t n, bool all_generators) {
  return std::make_shared<CyclicGroup>(n, all_generators);
}
GroupPtr free_product(std::vector<GroupPtr> factors) {
  return flatten_product<FreeProductGroup>(std::move(factors));
}
GroupPtr direct_product(std::vector<GroupPtr> factors, bool flatten) {
  if (flatten || factors.size() < 2) return flatten_product<DirectProductGroup>(std::move(factors));
  return std::make_shared<DirectProductGroup>(std::move(factors));
}

std::vector<Code> split_direct_product(const Code& x, std::size_t factor_count) {
  std::vector<Code> parts;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < factor_count; ++i) {
    if (pos >= x.size()) throw PreconditionError("code is not a direct-product element");
    auto len = std::size_t(x[pos]);
    parts.emplace_back(x.begin() + pos + 1, x.begin() + pos + 1 + len);
    pos += 1 + len;
  }
  return parts;
}

Code join_direct_product(const std::vector<Code>& parts) { return DirectProductGroup::join(parts); }

GroupPtr parse_group_expression(std::string_view text) { return ExpressionParser(text).parse(); }

MarkedGroup::MarkedGroup(GroupPtr group) : group_(std::move(group)) {
  const auto& gens = group_->generators();
  letters_.assign(gens.size(), '?');
  std::size_t next = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].inverse < i) continue;
    if (next == kLetters.size()) throw PreconditionError("too many generators to name with letters");
    char c = kLetters[next++];
    letters_[i] = c;
    by_letter_[c] = i;
    if (gens[i].inverse != i) {
      char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      letters_[gens[i].inverse] = upper;
      by_letter_[upper] = gens[i].inverse;
    } else {
      by_letter_[static_cast<char>(std::toupper(static_cast<unsigned char>(c)))] = i;
    }
  }
  if (auto* dp = dynamic_cast<const DirectProductGroup*>(group_.get()))
    for (std::size_t f = 0; f < dp->factors().size(); ++f) factor_ranges_.push_back(dp->generator_range(f));
}

Code MarkedGroup::evaluate(const Word& w) const {
  Code x = identity();
  for (auto s : w) x = multiply(x, generator(s));
  return x;
}

Word MarkedGroup::parse_word(std::string_view text) const {
  if (text == "e") return {};
  if (text.empty()) throw ParseError("empty word");
  Word w;
  for (char c : text) {
    auto it = by_letter_.find(c);
    if (it == by_letter_.end())
      throw ParseError("word '" + std::string(text) + "': unknown generator '" + std::string(1, c) +
                       "' for group " + expression());
    w.push_back(it->second);
  }
  return w;
}

Code MarkedGroup::parse(std::string_view text) const {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (!t.empty() && t.front() == '(') {
    if (factor_ranges_.empty() || t.back() != ')')
      throw ParseError("tuple syntax '" + t + "' needs a direct product group");
    std::vector<std::string> parts;
    std::stringstream ss(t.substr(1, t.size() - 2));
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    if (parts.size() != factor_ranges_.size())
      throw ParseError("tuple '" + t + "' has " + std::to_string(parts.size()) + " entries, expected " +
                       std::to_string(factor_ranges_.size()));
    Code x = identity();
    for (std::size_t f = 0; f < parts.size(); ++f) {
      Word w = parse_word(parts[f]);
      for (auto s : w)
        if (s < factor_ranges_[f].first || s >= factor_ranges_[f].second)
          throw ParseError("tuple entry '" + parts[f] + "' uses a generator of another factor");
      x = multiply(x, evaluate(w));
    }
    return x;
  }
  return evaluate(parse_word(t));
}

std::string MarkedGroup::format_word(const Word& w) const {
  if (w.empty()) return "e";
  std::string s;
  for (auto i : w) s.push_back(letters_[i]);
  return s;
}

std::string MarkedGroup::format(const Code& x) const {
  Word w = group_->geodesic_word(x);
  if (factor_ranges_.empty()) return format_word(w);
  std::string s = "(";
  for (std::size_t f = 0; f < factor_ranges_.size(); ++f) {
    Word part;
    for (auto i : w)
      if (i >= factor_ranges_[f].first && i < factor_ranges_[f].second) part.push_back(i);
    if (f) s += ",";
    s += format_word(part);
  }
  return s + ")";
}

MarkedGroup parse_group(std::string_view text) { return MarkedGroup(parse_group_expression(text)); }

std::string to_csv(const GrowthTable& t) {
  std::string s = "n,vol\n";
  for (std::size_t n = 0; n < t.volume.size(); ++n) s += std::to_string(n) + "," + to_string(t.volume[n]) + "\n";
  return s;
}

GrowthTable growth_from_csv(std::string_view text) {
  GrowthTable t;
  std::stringstream ss{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "n,vol") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("growth CSV line " + std::to_string(line_no) + ": expected n,vol");
    try {
      auto n = std::stoull(line.substr(0, comma));
      if (n != t.volume.size())
        throw ParseError("growth CSV line " + std::to_string(line_no) + ": radii must be consecutive from 0");
      t.volume.emplace_back(line.substr(comma + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("growth CSV line " + std::to_string(line_no) + ": malformed number");
    }
    if (t.volume.back() < 1) throw ParseError("growth CSV line " + std::to_string(line_no) + ": volume must be positive");
  }
  if (t.volume.empty()) throw ParseError("growth CSV has no rows");
  return t;
}

std::optional<std::uint32_t> CayleyBall::find(const Code& x) const {
  auto it = index.find(x);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

CayleyBall ball(const MarkedGroup& g, std::uint64_t radius, const BallOptions& options) {
  CayleyBall b;
  b.radius = radius;
  b.elements.push_back(g.identity());
  b.length.push_back(0);
  b.index.emplace(b.elements.front(), 0);
  b.growth.volume.push_back(1);
  std::size_t start = 0;
  for (std::uint64_t r = 1; r <= radius; ++r) {
    std::size_t end = b.elements.size();
    for (std::size_t i = start; i < end; ++i) {
      for (std::size_t s = 0; s < g.generator_count(); ++s) {
        Code y = g.multiply(b.elements[i], g.generator(s));
        if (b.index.count(y)) continue;
        if (b.elements.size() >= options.max_elements)
          throw BudgetExceeded("ball of " + g.expression() + " exceeds " + std::to_string(options.max_elements) +
                               " elements at radius " + std::to_string(r) + "; complete through radius " +
                               std::to_string(r - 1));
        b.index.emplace(y, static_cast<std::uint32_t>(b.elements.size()));
        b.elements.push_back(std::move(y));
        b.length.push_back(static_cast<std::uint32_t>(r));
      }
    }
    start = end;
    b.growth.volume.push_back(b.elements.size());
  }
  if (options.build_graph) {
    std::vector<VertexPair> edges;
    for (std::size_t i = 0; i < b.elements.size(); ++i)
      for (std::size_t s = 0; s < g.generator_count(); ++s) {
        auto j = b.find(g.multiply(b.elements[i], g.generator(s)));
        if (j && *j > i) edges.emplace_back(Vertex(i), *j);
      }
    Graph graph(b.elements.size(), edges);
    std::vector<std::string> labels;
    labels.reserve(b.elements.size());
    for (const auto& x : b.elements) labels.push_back(g.format(x));
    graph.set_labels(std::move(labels));
    b.graph = std::move(graph);
  }
  return b;
}

nlohmann::json to_json(const CayleyBall& b, const MarkedGroup& g) {
  nlohmann::json vols = nlohmann::json::array();
  for (const auto& v : b.growth.volume) vols.push_back(big_to_json(v));
  nlohmann::json j{{"group", g.expression()}, {"radius", b.radius}, {"volumes", vols}};
  j["graph"] = b.graph ? to_json(*b.graph) : nlohmann::json(nullptr);
  return j;
}

EntropyEstimate entropy_estimate(const GrowthTable& t, const std::optional<Rational>& declared_base) {
  if (t.volume.size() < 3) throw PreconditionError("entropy estimate needs a growth table through radius 2");
  EntropyEstimate e;
  for (std::size_t n = 1; n < t.volume.size(); ++n)
    e.point_estimates.push_back(log_big(t.volume[n]) / static_cast<long double>(n));
  std::size_t r = t.max_radius();
  e.upper_bound = ln_upper(Rational(t.volume[r])) / Rational(r);
  if (declared_base) {
    e.declared_base = declared_base;
    if (*declared_base == 1)
      e.declared = RationalInterval::exact(0);
    else
      e.declared = RationalInterval{ln_lower(*declared_base), ln_upper(*declared_base)};
  }
  return e;
}

nlohmann::json to_json(const EntropyEstimate& e) {
  nlohmann::json j{{"point_estimates", e.point_estimates}, {"upper_bound", to_string(e.upper_bound)}};
  if (e.declared) {
    j["declared"] = {{"ln_of", to_string(*e.declared_base)},
                     {"lo", to_string(e.declared->lo)},
                     {"hi", to_string(e.declared->hi)}};
    j["source"] = "declared";
  } else {
    j["declared"] = nullptr;
    j["source"] = "estimated";
  }
  return j;
}

}  // namespace hypme
