#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "perex/monoids.hpp"
#include "perex/words.hpp"

using namespace perex;

namespace {

MonoidOracle heisenberg() { return semidirect_oracle(Mat2{{{1, 1}, {0, 1}}}); }

std::vector<Element> sample(const MonoidOracle& o, std::mt19937_64& rng, std::size_t count, std::size_t len) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < count; ++i) {
    GenWord w(rng() % (len + 1));
    for (auto& g : w) g = static_cast<int>(rng() % o.generators.size());
    out.push_back(o.evaluate(w));
  }
  return out;
}

void check_laws(const MonoidOracle& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto xs = sample(o, rng, 60, 8);
  CHECK(o.nf(o.identity).empty());
  for (const auto& g : o.generator_elements) CHECK_FALSE(o.is_identity(g));
  for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
    const auto &x = xs[i], &y = xs[i + 1], &z = xs[i + 2];
    REQUIRE(o.mul(o.mul(x, y), z) == o.mul(x, o.mul(y, z)));
    REQUIRE(o.mul(o.identity, x) == x);
    REQUIRE(o.mul(x, o.identity) == x);
    REQUIRE(o.evaluate(o.nf(x)) == x);
    REQUIRE(o.decode(o.encode(x)) == x);
    if (o.has_invert()) REQUIRE(o.is_identity(o.mul(x, o.inverse(x))));
  }
}

}  // namespace

TEST_CASE("oracle laws") {
  check_laws(integer_oracle(), 1);
  check_laws(cyclic_group_oracle(5), 2);
  check_laws(free_monoid_oracle("ab"), 3);
  check_laws(zn_oracle(3), 4);
  check_laws(heisenberg(), 5);
  check_laws(semidirect_oracle(Mat2{{{2, 1}, {1, 1}}}), 6);
  check_laws(oracle_from_json({{"kind", "bs"}, {"p", 2}, {"q", 3}}), 7);
  check_laws(oracle_from_json({{"kind", "free_group"}, {"letters", "ab"}}), 8);
}

TEST_CASE("integers") {
  const auto z = integer_oracle();
  CHECK(z.nf_string(Element{3}) == "+1 +1 +1");
  CHECK(z.nf_string(Element{-2}) == "-1 -1");
  CHECK(z.square_roots(Element{4}) == std::vector<Element>{Element{2}});
  CHECK(z.square_roots(Element{3}).empty());
  CHECK(z.finite_power_submonoid(Element{0}));
  CHECK_FALSE(z.finite_power_submonoid(Element{1}));
  CHECK(z.parse("-7") == Element{-7});
  CHECK_THROWS_AS(z.mul(Element{INT64_MAX}, Element{1}), std::overflow_error);
}

TEST_CASE("finite tables") {
  const auto z2 = cyclic_group_oracle(2);
  const auto roots = z2.square_roots(z2.identity);
  CHECK(roots.size() == 2);
  CHECK_FALSE(z2.sqrt_of_identity_trivial);
  const auto z3 = cyclic_group_oracle(3);
  CHECK(z3.square_roots(Element{1}) == std::vector<Element>{Element{2}});
  const auto triv = finite_monoid_oracle({{0}});
  CHECK(triv.generators.empty());
  CHECK(triv.square_roots(triv.identity) == std::vector<Element>{triv.identity});
  CHECK(triv.sqrt_of_identity_trivial);
  CHECK_THROWS_AS(finite_monoid_oracle({{0, 1}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(finite_monoid_oracle({{0, 1}, {1}}), std::invalid_argument);
  // {0,1} under min has identity 1 but is not a group
  const auto m = finite_monoid_oracle({{0, 0}, {0, 1}});
  CHECK_FALSE(m.is_group);
  CHECK(m.identity == Element{1});
}

TEST_CASE("polycyclic oracles") {
  const auto z2 = zn_oracle(2);
  CHECK(z2.mul(Element{1, 0}, Element{0, 1}) == Element{1, 1});
  CHECK(z2.nf_string(Element{1, 1}) == "g1 g2");
  const auto h = heisenberg();
  CHECK(h.mul(Element{1, 0, 0}, Element{0, 0, 1}) == h.mul(Element{0, 0, 1}, Element{1, 0, 0}));
  CHECK(h.mul(Element{0, 1, 0}, Element{0, 0, 1}) == Element{0, 1, 1});
  CHECK(h.mul(Element{0, 0, 1}, Element{0, 1, 0}) == Element{1, 1, 1});
  CHECK_NOTHROW(semidirect_oracle(Mat2{{{2, 1}, {1, 1}}}));
  CHECK_THROWS_AS(semidirect_oracle(Mat2{{{2, 0}, {0, 1}}}), std::invalid_argument);
}

TEST_CASE("polycyclic normal forms contain long factors") {
  std::mt19937_64 rng(31);
  for (const auto& o : {zn_oracle(3), heisenberg()}) {
    const std::size_t n = o.generators.size() / 2;
    for (const auto& x : sample(o, rng, 300, 12)) {
      const auto w = o.nf(x);
      REQUIRE(o.nf_exp(x) >= (w.size() + n - 1) / n);
    }
  }
}

TEST_CASE("unique square roots agree with ball search") {
  for (const auto& o : {zn_oracle(2), heisenberg()}) {
    const auto b = ball(o, 4);
    std::map<Element, std::set<Element>> roots;
    for (const auto& [x, w] : b) roots[o.mul(x, x)].insert(x);
    for (const auto& [x, w] : b) {
      const auto r = o.square_roots(x);
      REQUIRE(r.size() <= 1);
      // every root found inside the ball must be reported
      if (roots.contains(x)) {
        REQUIRE(r.size() == 1);
        REQUIRE(roots[x].contains(r[0]));
      }
      for (const auto& y : r) REQUIRE(o.mul(y, y) == x);
    }
  }
}

TEST_CASE("power profiles") {
  const auto z = integer_oracle();
  const auto p0 = power_profile(z, Element{0}, 10);
  REQUIRE(std::holds_alternative<FinitePowers>(p0));
  CHECK(std::get<FinitePowers>(p0).r == 0);
  CHECK(std::get<FinitePowers>(p0).p == 1);
  const auto p1 = power_profile(z, Element{1}, 100);
  REQUIRE(std::holds_alternative<NoRepetitionWithin>(p1));
  CHECK(std::get<NoRepetitionWithin>(p1).bound == 100);
  const auto z2 = cyclic_group_oracle(2);
  const auto p2 = power_profile(z2, Element{1}, 10);
  REQUIRE(std::holds_alternative<FinitePowers>(p2));
  CHECK(std::get<FinitePowers>(p2).r + std::get<FinitePowers>(p2).p <= 2);
}

TEST_CASE("rational pumping") {
  const auto z = integer_oracle();
  MAutomaton loop{1, {0}, {0}, {{0, Element{1}, 0}}};
  const auto p = rational_pump(loop, z);
  REQUIRE(p.has_value());
  CHECK(p->u == Element{0});
  CHECK(p->p == Element{1});
  CHECK(p->v == Element{0});
  MAutomaton line{2, {0}, {1}, {{0, Element{1}, 1}}};
  CHECK_FALSE(rational_pump(line, z).has_value());
  MAutomaton trivial_loop{1, {0}, {0}, {{0, Element{0}, 0}}};
  CHECK_FALSE(rational_pump(trivial_loop, z).has_value());

  const auto z2 = zn_oracle(2);
  MAutomaton a{2, {0}, {1}, {{0, Element{5, 0}, 1}, {1, Element{1, 1}, 1}}};
  const auto q = rational_pump(a, z2);
  REQUIRE(q.has_value());
  CHECK(q->p == Element{1, 1});
  for (std::size_t n = 1; n <= 50; ++n) {
    const Element x = z2.mul(z2.mul(q->u, z2.power(q->p, n)), q->v);
    REQUIRE(z2.nf_exp(x) >= n);
  }
}

TEST_CASE("oracle json") {
  CHECK(oracle_from_json({{"kind", "int"}}).kind == "int");
  CHECK(oracle_from_json({{"kind", "zn"}, {"n", 2}}).generators.size() == 4);
  CHECK(oracle_from_json({{"kind", "cyclic"}, {"n", 4}}).generators.size() == 3);
  CHECK_THROWS_AS(oracle_from_json({{"kind", "nope"}}), std::invalid_argument);
  CHECK_THROWS_AS(oracle_from_json({{"kind", "semidirect"}, {"matrix", {{1, 2}}}}), std::invalid_argument);
}
