#include <random>
#include <set>

#include "doctest.h"
#include "hypme/coset_enumeration.hpp"
#include "hypme/error.hpp"

using namespace hypme;

namespace {

std::vector<Code> parse_all(const MarkedGroup& g, std::initializer_list<const char*> words) {
  std::vector<Code> out;
  for (const char* w : words) out.push_back(g.parse(w));
  return out;
}

// a-exponent sum mod 2, the kernel that defines the index-2 subgroup.
int a_parity(const MarkedGroup& g, const Code& x) {
  auto image = g.group().abelian_image(x);
  return int(((image[0] % 2) + 2) % 2);
}

}  // namespace

TEST_CASE("the index-2 subgroup of F2") {
  MarkedGroup f2 = parse_group("F2");
  FiniteIndexSubgroup h(f2, parse_all(f2, {"aa", "b", "abA"}));
  CHECK(h.index() == 2);
  REQUIRE(h.transversal().size() == 2);
  CHECK(f2.format(h.transversal()[0]) == "e");
  CHECK(f2.format(h.transversal()[1]) == "a");
  auto ball = hypme::ball(f2, 5, {5'000'000, false});
  for (const auto& x : ball.elements) {
    CHECK(h.contains(x) == (a_parity(f2, x) == 0));
    // x lies in rep(x) Λ.
    CHECK(h.contains(f2.multiply(f2.inverse(h.representative(x)), x)));
  }
  // Schreier generators lie in the subgroup, are closed under inverses and sorted.
  std::set<Code> gens(h.schreier_generators().begin(), h.schreier_generators().end());
  for (const auto& s : h.schreier_generators()) {
    CHECK(h.contains(s));
    CHECK(s != f2.identity());
    CHECK(gens.count(f2.inverse(s)) == 1);
  }
  for (std::size_t i = 1; i < h.schreier_generators().size(); ++i)
    CHECK(f2.word_length(h.schreier_generators()[i - 1]) <= f2.word_length(h.schreier_generators()[i]));
  // Rank of the index-2 subgroup of F2 is 3 (Schreier index formula: 1 + 2(2-1)).
  CHECK(h.schreier_generators().size() == 6);
}

TEST_CASE("Z^2 and finite quotients") {
  MarkedGroup z2 = parse_group("Z^2");
  FiniteIndexSubgroup h(z2, parse_all(z2, {"aa", "b"}));
  CHECK(h.index() == 2);
  CHECK(z2.format(h.transversal()[1]) == "a");
  FiniteIndexSubgroup h6(z2, parse_all(z2, {"aaa", "bb"}));
  CHECK(h6.index() == 6);
  MarkedGroup c = parse_group("C6xC4");
  FiniteIndexSubgroup hc(c, parse_all(c, {"(aaa,e)"}));
  CHECK(hc.index() == 12);
  MarkedGroup cp = parse_group("C2*C3");
  FiniteIndexSubgroup k(cp, parse_all(cp, {"b", "abA"}));
  CHECK(k.index() == 2);
}

TEST_CASE("coset enumeration against a brute-force partition on a finite group") {
  MarkedGroup g = parse_group("C4xC6");
  auto all = hypme::ball(g, 20, {5'000'000, false}).elements;
  REQUIRE(all.size() == 24);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Code gen = all[uniform_below(rng, all.size())];
    FiniteIndexSubgroup h(g, {gen});
    // The cyclic subgroup generated by gen, computed directly.
    std::set<Code> sub{g.identity()};
    for (Code x = gen; x != g.identity(); x = g.multiply(x, gen)) sub.insert(x);
    CHECK(h.index() * sub.size() == 24);
    for (const auto& x : all) CHECK(h.contains(x) == (sub.count(x) == 1));
  }
}

TEST_CASE("infinite index and budgets are reported") {
  MarkedGroup f2 = parse_group("F2");
  CHECK_THROWS_AS(FiniteIndexSubgroup(f2, parse_all(f2, {"a"})), PreconditionError);
  MarkedGroup cp = parse_group("C2*C3");
  CHECK_THROWS_AS(FiniteIndexSubgroup(cp, parse_all(cp, {"a"}), {5000}), BudgetExceeded);
  CHECK(integer_rank({{2, 0}, {0, 1}, {2, 1}}) == 2);
  CHECK(integer_rank({{1, 1}, {2, 2}}) == 1);
}

TEST_CASE("subgroup word metric") {
  MarkedGroup f2 = parse_group("F2");
  FiniteIndexSubgroup h(f2, parse_all(f2, {"aa", "b", "abA"}));
  SubgroupMetric m(f2, h.schreier_generators());
  for (const auto& s : h.schreier_generators()) CHECK(m.length(s) == 1);
  CHECK(m.length(f2.identity()) == 0);
  CHECK(m.length(f2.parse("aabb")) <= 3);
  auto b2 = m.ball(2);
  CHECK(b2.size() == 1 + 6 + 6 * 5);  // free of rank 3 on 6 symmetric generators
  // The subgroup ball never runs out, so a non-member exhausts the budget.
  CHECK_THROWS_AS(m.length(f2.parse("a")), BudgetExceeded);
  CHECK(m.distance(f2.parse("b"), f2.parse("bb")) == 1);
}
