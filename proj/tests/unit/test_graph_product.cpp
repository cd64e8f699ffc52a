#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "perex/bs.hpp"
#include "perex/graph_product.hpp"
#include "perex/monoids.hpp"
#include "perex/traces.hpp"
#include "perex/words.hpp"

using namespace perex;

namespace {

GPSpec two_ints(bool commuting) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (commuting) pairs.emplace_back("x", "y");
  return GPSpec({{"x", integer_oracle()}, {"y", integer_oracle()}}, pairs);
}

IndepAlphabet four_cycle() { return IndepAlphabet("abcd", {{'a', 'b'}, {'b', 'd'}, {'a', 'c'}, {'c', 'd'}}); }

// Letter-level RAAG oracle: letters (color, +-1); cancel x ... x^-1 when
// everything between commutes with x, then pick the smallest minimal letter
// repeatedly.
using SignedLetter = std::pair<std::size_t, int>;

std::vector<SignedLetter> raag_canonical(const GPSpec& spec, std::vector<SignedLetter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        if (w[j].first == w[i].first) {
          if (w[j].second == -w[i].second) {
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
          }
          break;
        }
        if (!spec.independent(w[j].first, w[i].first)) break;
      }
    }
  }
  std::vector<SignedLetter> out;
  while (!w.empty()) {
    std::size_t best = w.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < i && minimal; ++j) minimal = spec.independent(w[i].first, w[j].first);
      if (!minimal) continue;
      // generator "+1" precedes "-1"
      const auto key = [](const SignedLetter& l) { return std::make_pair(l.first, l.second > 0 ? 0 : 1); };
      if (best == w.size() || key(w[i]) < key(w[best])) best = i;
    }
    out.push_back(w[best]);
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

std::vector<SignedLetter> as_signed(const GPWord& w) {
  std::vector<SignedLetter> out;
  for (const auto& l : w) out.emplace_back(l.color, l.gen == 0 ? 1 : -1);
  return out;
}

std::vector<SignedLetter> random_signed(const GPSpec& spec, std::mt19937_64& rng, std::size_t max_len) {
  std::vector<SignedLetter> w(rng() % (max_len + 1));
  for (auto& l : w) l = {rng() % spec.size(), rng() % 2 ? 1 : -1};
  return w;
}

GPElement from_signed(const GPSpec& spec, const std::vector<SignedLetter>& w) {
  GPWord g;
  for (const auto& [c, s] : w) g.push_back(GPLetter{c, s > 0 ? 0 : 1});
  return evaluate(spec, g);
}

GPElement random_element(const GPSpec& spec, std::mt19937_64& rng, std::size_t max_len) {
  GPWord w(rng() % (max_len + 1));
  for (auto& l : w) {
    l.color = rng() % spec.size();
    l.gen = static_cast<int>(rng() % spec.local(l.color).generators.size());
  }
  return evaluate(spec, w);
}

MonoidOracle heisenberg() { return semidirect_oracle(Mat2{{{1, 1}, {0, 1}}}); }

GPSpec mixed_spec() {
  return GPSpec({{"z", integer_oracle()}, {"h", heisenberg()}, {"b", bs_oracle(BSSpec{2, 3})}}, {{"z", "h"}});
}

}  // namespace

TEST_CASE("multiplication examples") {
  const auto fp = two_ints(false);
  CHECK(gp_multiply(fp, gp_parse(fp, "x"), gp_parse(fp, "x^-1")).empty());
  CHECK(gp_multiply(fp, gp_parse(fp, "x"), gp_parse(fp, "y")).size() == 2);
  const auto dp = two_ints(true);
  const auto x = gp_multiply(dp, gp_parse(dp, "x^2 y"), gp_parse(dp, "x^3"));
  REQUIRE(x.size() == 2);
  CHECK(x.letters[0] == Syllable{0, Element{5}});
  CHECK(x.letters[1] == Syllable{1, Element{1}});
  CHECK(gp_parse(fp, "x y x^-1") == gp_parse(fp, "x * y * x^-1"));
}

TEST_CASE("reduction agrees with letter-level RAAG rewriting") {
  std::mt19937_64 rng(11);
  const auto specs = {two_ints(false), two_ints(true), raag_spec(four_cycle()),
                      raag_spec(IndepAlphabet("abc", {{'a', 'b'}}))};
  for (const auto& spec : specs) {
    for (int t = 0; t < 400; ++t) {
      const auto w = random_signed(spec, rng, 10);
      const auto x = from_signed(spec, w);
      REQUIRE(as_signed(nf_global(spec, x)) == raag_canonical(spec, w));
    }
  }
}

TEST_CASE("multiplication is associative") {
  std::mt19937_64 rng(12);
  for (const auto& spec : {raag_spec(four_cycle()), mixed_spec()}) {
    for (int t = 0; t < 300; ++t) {
      const auto x = random_element(spec, rng, 4);
      const auto y = random_element(spec, rng, 4);
      const auto z = random_element(spec, rng, 4);
      const auto xy = gp_multiply(spec, x, y);
      REQUIRE(gp_multiply(spec, xy, z) == gp_multiply(spec, x, gp_multiply(spec, y, z)));
      REQUIRE(xy.size() <= x.size() + y.size());
      REQUIRE(gp_multiply(spec, x, gp_inverse(spec, x)).empty());
    }
  }
}

TEST_CASE("normal forms") {
  const auto dp = two_ints(true);
  CHECK(render(dp, nf_global(dp, gp_parse(dp, "y^3 x^2"))) == "x x y y y");
  const auto fp = two_ints(false);
  CHECK(render(fp, nf_global(fp, gp_parse(fp, "x y x"))) == "x y x");
  CHECK(render(fp, nf_global(fp, gp_parse(fp, "x^-1"))) == "x^-1");

  const auto alph = four_cycle();
  const auto spec = raag_spec(alph);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 300; ++t) {
    std::string w(rng() % 9, 'a');
    for (auto& c : w) c = "abcd"[rng() % 4];
    std::string spaced;
    for (char c : w) spaced += std::string(spaced.empty() ? "" : " ") + c;
    const auto x = gp_parse(spec, spaced);
    std::string expect;
    for (char c : lex_nf(w, alph)) expect += std::string(expect.empty() ? "" : " ") + c;
    REQUIRE(render(spec, nf_global(spec, x)) == expect);
  }
}

TEST_CASE("normal forms separate short elements") {
  const auto spec = std::make_shared<const GPSpec>(raag_spec(four_cycle()));
  const auto o = gp_oracle(spec);
  std::map<std::vector<GPLetter>, Element> seen;
  for (const auto& [e, w] : ball(o, 3)) {
    const auto x = gp_decode(e);
    const auto nf = nf_global(*spec, x);
    REQUIRE(evaluate(*spec, nf) == x);
    const auto [it, fresh] = seen.emplace(nf, e);
    REQUIRE((fresh || it->second == e));
  }
}

TEST_CASE("global normal forms are geodesic") {
  for (const auto& s : {two_ints(false), two_ints(true), raag_spec(four_cycle())}) {
    const auto spec = std::make_shared<const GPSpec>(s);
    const auto o = gp_oracle(spec);
    for (const auto& [e, w] : ball(o, 3)) REQUIRE(nf_global(*spec, gp_decode(e)).size() == w.size());
  }
}

TEST_CASE("finite power submonoids") {
  const auto z2 = [] { return cyclic_group_oracle(2); };
  const GPSpec commuting({{"x", z2()}, {"y", z2()}}, {{"x", "y"}});
  const GPSpec free({{"x", z2()}, {"y", z2()}}, {});
  CHECK(has_finite_power_submonoid(commuting, gp_parse(commuting, "x y")));
  CHECK_FALSE(has_finite_power_submonoid(free, gp_parse(free, "x y")));
  CHECK(has_finite_power_submonoid(free, gp_parse(free, "x y x")));
  CHECK(has_finite_power_submonoid(free, GPElement{}));

  const auto ints = two_ints(false);
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto y = random_element(ints, rng, 6);
    CHECK(has_finite_power_submonoid(ints, y) == y.empty());
  }
}

TEST_CASE("torsion-free locals give a torsion-free product") {
  const auto spec = std::make_shared<const GPSpec>(mixed_spec());
  const auto o = gp_oracle(spec);
  std::mt19937_64 rng(15);
  int tested = 0;
  while (tested < 60) {
    const auto y = random_element(*spec, rng, 4);
    if (y.empty()) continue;
    ++tested;
    REQUIRE_FALSE(has_finite_power_submonoid(*spec, y));
    REQUIRE(std::holds_alternative<NoRepetitionWithin>(power_profile(o, gp_encode(y), 60)));
  }
}

TEST_CASE("transposition orbit") {
  const auto fp = two_ints(false);
  const auto orbit = gp_transposition_orbit(fp, gp_parse(fp, "x y"));
  CHECK(orbit.size() == 2);
  CHECK(orbit.contains(gp_parse(fp, "y x")));
  // rotating 1 2 1^-1 collapses to the single syllable 2
  CHECK(gp_transposition_orbit(fp, gp_parse(fp, "x y x^-1")).contains(gp_parse(fp, "y")));
}

TEST_CASE("square root examples") {
  const auto dp = two_ints(true);
  const auto r = gp_square_roots(dp, gp_parse(dp, "x^2 y^2"));
  REQUIRE(r.size() == 1);
  CHECK(*r.begin() == gp_parse(dp, "x y"));
  const auto fp = two_ints(false);
  CHECK(gp_square_roots(fp, gp_parse(fp, "x y")).empty());
  CHECK(gp_square_roots(fp, gp_parse(fp, "x y x y")) == std::set<GPElement>{gp_parse(fp, "x y")});
  const GPSpec with_bs({{"z", integer_oracle()}, {"h", heisenberg()}, {"b", bs_oracle(BSSpec{3, 5})}}, {{"z", "h"}});
  for (const auto& spec : {dp, fp, raag_spec(four_cycle()), with_bs}) {
    CHECK(gp_square_roots(spec, GPElement{}) == std::set<GPElement>{GPElement{}});
  }
}

TEST_CASE("square roots require the local hypotheses") {
  const GPSpec torsion({{"x", cyclic_group_oracle(2)}, {"y", integer_oracle()}}, {});
  CHECK_THROWS_AS(gp_square_roots(torsion, gp_parse(torsion, "y")), std::domain_error);
  auto bare = integer_oracle();
  bare.square_roots = nullptr;
  const GPSpec missing({{"x", bare}, {"y", integer_oracle()}}, {});
  CHECK_THROWS_AS(gp_square_roots(missing, gp_parse(missing, "y")), std::logic_error);
}

TEST_CASE("square roots agree with ball search") {
  const auto specs = {two_ints(false), two_ints(true), GPSpec({{"x", integer_oracle()}, {"y", integer_oracle()},
                                                               {"w", integer_oracle()}},
                                                              {{"x", "y"}})};
  for (const auto& s : specs) {
    const auto spec = std::make_shared<const GPSpec>(s);
    const auto o = gp_oracle(spec);
    const auto b = ball(o, 3);
    std::map<Element, std::set<Element>> roots;
    for (const auto& [x, w] : b) roots[o.mul(x, x)].insert(x);
    for (const auto& [w, word] : b) {
      std::set<Element> got;
      for (const auto& r : gp_square_roots(*spec, gp_decode(w))) {
        REQUIRE(o.mul(gp_encode(r), gp_encode(r)) == w);
        got.insert(gp_encode(r));
      }
      for (const auto& r : roots[w]) REQUIRE(got.contains(r));
    }
    // every square of a ball element finds its root
    for (const auto& [x, w] : b) REQUIRE(gp_square_roots(*spec, gp_decode(o.mul(x, x))).contains(gp_decode(x)));
  }
}

TEST_CASE("pumping families") {
  const auto dp = two_ints(true);
  const auto fam = pump_family_nf(dp, GPElement{}, gp_parse(dp, "x y"), GPElement{}, 12);
  REQUIRE(fam.size() == 13);
  for (const auto& f : fam) CHECK(f.exp == f.n);
  CHECK_THROWS_AS(pump_family_nf(dp, GPElement{}, GPElement{}, GPElement{}, 3), std::invalid_argument);

  const auto alph = four_cycle();
  const auto spec = raag_spec(alph);
  const auto pumped = pump_family_nf(spec, gp_parse(spec, "b"), gp_parse(spec, "a b c d"), gp_parse(spec, "c"), 15);
  for (const auto& f : pumped) {
    std::string w = "b";
    for (std::size_t i = 0; i < f.n; ++i) w += "abcd";
    w += "c";
    REQUIRE(f.exp == exponent_of_periodicity(lex_nf(w, alph)));
    if (f.n >= 1) REQUIRE(f.exp + 1 >= f.n);
  }
}

TEST_CASE("pumping a free product with a Heisenberg factor") {
  const GPSpec spec({{"z", integer_oracle()}, {"h", heisenberg()}}, {});
  std::mt19937_64 rng(16);
  for (int t = 0; t < 20; ++t) {
    const auto u = random_element(spec, rng, 2);
    const auto v = random_element(spec, rng, 2);
    GPElement p;
    while (p.empty()) p = random_element(spec, rng, 2);
    const auto fam = pump_family_nf(spec, u, p, v, 40);
    std::vector<std::size_t> tail_min(fam.size() + 1, SIZE_MAX);
    for (std::size_t n = fam.size(); n-- > 0;) tail_min[n] = std::min(tail_min[n + 1], fam[n].exp);
    for (std::size_t n = 1; n < fam.size(); ++n) REQUIRE(tail_min[n] >= tail_min[n - 1]);
    REQUIRE(tail_min[40] > tail_min[1]);
  }
}

TEST_CASE("spec json") {
  const nlohmann::json j = {{"colors",
                             {{{"name", "x"}, {"oracle", {{"kind", "int"}}}},
                              {{"name", "y"}, {"oracle", {{"kind", "cyclic"}, {"n", 3}}}}}},
                            {"independence", nlohmann::json::array({nlohmann::json::array({"x", "y"})})},
                            {"color_order", {"y", "x"}}};
  const auto spec = gp_spec_from_json(j);
  CHECK(spec.color(0).name == "y");
  CHECK(spec.independent(0, 1));
  const auto back = gp_spec_from_json(gp_spec_to_json(spec));
  CHECK(gp_spec_to_json(back) == gp_spec_to_json(spec));
  const auto x = gp_parse(spec, "x^2 y=2");
  CHECK(gp_from_json(spec, gp_to_json(spec, x)) == x);
  CHECK(gp_decode(gp_encode(x)) == x);
  CHECK_THROWS_AS(gp_spec_from_json({{"colors", {{{"name", "x"}, {"oracle", {{"kind", "int"}}}}}},
                                     {"independence", nlohmann::json::array({nlohmann::json::array({"x", "x"})})}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gp_parse(spec, "q"), std::invalid_argument);
}
