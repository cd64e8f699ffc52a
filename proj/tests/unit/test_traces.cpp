#include <doctest.h>

#include <random>
#include <stdexcept>

#include "perex/traces.hpp"

using namespace perex;

namespace {

AlphabetPtr example_alphabet() {
  return std::make_shared<const IndepAlphabet>(
      "abcd", std::vector<std::pair<char, char>>{{'a', 'b'}, {'b', 'd'}, {'a', 'c'}, {'c', 'd'}});
}

AlphabetPtr alph(const std::string& letters, const std::vector<std::pair<char, char>>& pairs) {
  return std::make_shared<const IndepAlphabet>(letters, pairs);
}

std::vector<Word> all_words(const std::string& alphabet, std::size_t max_len) {
  std::vector<Word> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (char c : alphabet) out.push_back(out[i] + c);
  }
  return out;
}

// All words equivalent to w under adjacent swaps of independent letters.
std::set<Word> commutation_class(const Word& w, const IndepAlphabet& a) {
  std::set<Word> seen{w};
  std::vector<Word> todo{w};
  while (!todo.empty()) {
    Word x = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (!a.independent(x[i], x[i + 1])) continue;
      Word y = x;
      std::swap(y[i], y[i + 1]);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return seen;
}

AlphabetPtr random_alphabet(std::mt19937_64& rng) {
  std::vector<std::pair<char, char>> pairs;
  const std::string l = "abcd";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (rng() % 2) pairs.emplace_back(l[i], l[j]);
    }
  }
  return alph(l, pairs);
}

// Brute force: traces induced by down-closed (up-closed) position sets.
std::set<Word> closed_subsets(const Trace& x, bool down) {
  const auto prec = precedence(x);
  const std::size_t m = x.size();
  std::set<Word> out;
  for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      for (std::size_t j = 0; j < m && ok; ++j) {
        if (!prec[i][j]) continue;
        const bool in_i = mask >> i & 1U;
        const bool in_j = mask >> j & 1U;
        ok = down ? (!in_j || in_i) : (!in_i || in_j);
      }
    }
    if (!ok) continue;
    Word w;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1U) w += x.word()[i];
    }
    out.insert(lex_nf(w, x.alphabet()));
  }
  return out;
}

std::set<Word> words_of(const std::set<Trace>& s) {
  std::set<Word> out;
  for (const auto& t : s) out.insert(t.word());
  return out;
}

// Closure under all factorizations x = uv -> vu over every word of the class.
std::set<Word> orbit_brute(const Trace& x) {
  std::set<Word> seen{x.word()};
  std::vector<Word> todo{x.word()};
  while (!todo.empty()) {
    const Word t = todo.back();
    todo.pop_back();
    for (const auto& w : commutation_class(t, x.alphabet())) {
      for (std::size_t k = 0; k <= w.size(); ++k) {
        const Word y = lex_nf(w.substr(k) + w.substr(0, k), x.alphabet());
        if (seen.insert(y).second) todo.push_back(y);
      }
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("alphabet validation") {
  CHECK_THROWS_AS(IndepAlphabet("aa", {}), std::invalid_argument);
  CHECK_THROWS_AS(IndepAlphabet("ab", {{'a', 'a'}}), std::invalid_argument);
  CHECK_THROWS_AS(IndepAlphabet("ab", {{'a', 'c'}}), std::invalid_argument);
  CHECK_THROWS_AS(IndepAlphabet("abAB", {{'a', 'b'}}, {{'a', 'A'}, {'A', 'a'}, {'b', 'B'}, {'B', 'b'}}),
                  std::invalid_argument);
  CHECK_NOTHROW(IndepAlphabet("abAB", {{'a', 'b'}, {'A', 'b'}, {'a', 'B'}, {'A', 'B'}},
                              {{'a', 'A'}, {'A', 'a'}, {'b', 'B'}, {'B', 'b'}}));
  const auto a = *example_alphabet();
  CHECK(alphabet_from_json(alphabet_to_json(a)) == a);
}

TEST_CASE("lexicographic normal forms") {
  CHECK(lex_nf("ca", *alph("ac", {{'a', 'c'}})) == "ac");
  CHECK(lex_nf("babcdc", *example_alphabet()) == "abbccd");
  CHECK(lex_nf("ba", *alph("ab", {})) == "ba");
  CHECK_THROWS_AS(lex_nf("ax", *example_alphabet()), std::invalid_argument);
  CHECK(is_lex_nf("ac", *alph("ac", {{'a', 'c'}})));
  CHECK_FALSE(is_lex_nf("ca", *alph("ac", {{'a', 'c'}})));
  CHECK(is_lex_nf("abbccd", *example_alphabet()));
}

TEST_CASE("normal forms are the least words of their class") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_alphabet(rng);
    for (const auto& w : all_words("abcd", 5)) {
      const auto cls = commutation_class(w, *a);
      const Word nf = lex_nf(w, *a);
      REQUIRE(nf == *cls.begin());
      REQUIRE(is_lex_nf(nf, *a));
      REQUIRE(trace_equal(w, nf, *a));
    }
  }
}

TEST_CASE("is_lex_nf and the normal form automaton agree with lex_nf") {
  const auto a = example_alphabet();
  const Dfa d = lexnf_dfa(*a);
  for (const auto& w : all_words("abcd", 6)) {
    const bool nf = lex_nf(w, *a) == w;
    REQUIRE(is_lex_nf(w, *a) == nf);
    REQUIRE(d.accepts(w) == nf);
  }
}

TEST_CASE("trace equality") {
  const auto ac = alph("abc", {{'a', 'c'}});
  CHECK(trace_equal("cab", "acb", *ac));
  CHECK_FALSE(trace_equal("ab", "ba", *alph("ab", {})));
  CHECK(trace_equal("babcdc", "abbccd", *example_alphabet()));
}

TEST_CASE("trace equality agrees with projections onto dependent pairs") {
  const auto a = example_alphabet();
  auto projection_key = [&](const Word& w) {
    std::vector<std::string> key;
    for (char x : a->letters()) {
      for (char y : a->letters()) {
        if (x > y || a->independent(x, y)) continue;
        std::string p;
        for (char c : w) {
          if (c == x || c == y) p += c;
        }
        key.push_back(p);
      }
    }
    return key;
  };
  const auto ws = all_words("abcd", 4);
  for (const auto& u : ws) {
    for (const auto& v : ws) {
      if (u.size() != v.size()) continue;
      REQUIRE(trace_equal(u, v, *a) == (projection_key(u) == projection_key(v)));
    }
  }
}

TEST_CASE("dependence graph and Hasse diagram") {
  const auto ab = alph("ab", {{'a', 'b'}});
  CHECK(dependence_graph(Trace(ab, "ab")).edges.empty());
  const auto aa = dependence_graph(Trace(alph("a", {}), "aa"));
  REQUIRE(aa.edges.size() == 1);
  CHECK(aa.edges[0] == std::pair<std::size_t, std::size_t>{0, 1});
  const Trace x(example_alphabet(), "abbccd");
  const auto g = dependence_graph(x);
  const auto h = hasse(x);
  // brute-force transitive closure of the edge set
  const std::size_t m = x.size();
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (auto [i, j] : g.edges) reach[i][j] = true;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  CHECK(reach == precedence(x));
  for (auto [i, j] : h.edges) {
    for (std::size_t k = 0; k < m; ++k) CHECK_FALSE((reach[i][k] && reach[k][j]));
  }
  std::size_t covers = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!reach[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < m; ++k) cover = cover && !(reach[i][k] && reach[k][j]);
      covers += cover;
    }
  }
  CHECK(covers == h.edges.size());
}

TEST_CASE("steps") {
  const auto ab = alph("ab", {{'a', 'b'}});
  CHECK(min_step(Trace(ab, "ab")) == "ab");
  CHECK(max_step(Trace(ab, "ab")) == "ab");
  const auto a = alph("a", {});
  CHECK(min_step(Trace(a, "aa")) == "a");
  CHECK(max_step(Trace(a, "aa")) == "a");
  const Trace x = lex_nf("babcdc", example_alphabet());
  const auto prec = precedence(x);
  Word mn, mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool is_min = true, is_max = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (prec[j][i]) is_min = false;
      if (prec[i][j]) is_max = false;
    }
    if (is_min) mn += x.word()[i];
    if (is_max) mx += x.word()[i];
  }
  std::sort(mn.begin(), mn.end());
  std::sort(mx.begin(), mx.end());
  CHECK(min_step(x) == mn);
  CHECK(max_step(x) == mx);
}

TEST_CASE("a position both minimal and maximal forces a short or disconnected trace") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_alphabet(rng);
    for (const auto& w : all_words("abcd", 4)) {
      const Trace x(a, w);
      const auto prec = precedence(x);
      bool isolated = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        bool is_min = true, is_max = true;
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (prec[j][i]) is_min = false;
          if (prec[i][j]) is_max = false;
        }
        isolated = isolated || (is_min && is_max);
      }
      if (isolated) REQUIRE((x.size() <= 1 || connected_components(x).size() > 1));
    }
  }
}

TEST_CASE("connected components") {
  const auto ab = alph("ab", {{'a', 'b'}});
  const auto c = connected_components(Trace(ab, "ab"));
  REQUIRE(c.size() == 2);
  CHECK(c[0].word() == "a");
  CHECK(c[1].word() == "b");
  CHECK(connected_components(Trace(alph("ab", {}), "ab")).size() == 1);
  // a-d and b-c are the only dependent pairs among distinct letters
  const auto ex = connected_components(Trace(example_alphabet(), "abbccd"));
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].word() == "ad");
  CHECK(ex[1].word() == "bbcc");
  CHECK(connected_components(Trace(example_alphabet(), "abcd")).size() == 2);
  CHECK(connected_components(Trace(example_alphabet(), "adbc")).size() == 2);
  CHECK(connected_components(Trace(alph("abc", {{'a', 'c'}}), "abc")).size() == 1);
}

TEST_CASE("convex factorization") {
  const auto a = alph("a", {});
  const auto f = factorize_convex(Trace(a, "aa"), {0});
  CHECK(f.p.empty());
  CHECK(f.u.word() == "a");
  CHECK(f.v.empty());
  CHECK(f.q.word() == "a");
  const auto ab = alph("ab", {{'a', 'b'}});
  const auto g = factorize_convex(Trace(ab, "ab"), {1});
  CHECK(g.u.word() == "b");
  CHECK(multiply(multiply(multiply(g.p, g.u), g.v), g.q) == Trace(ab, "ab"));
  CHECK_THROWS_WITH_AS(factorize_convex(Trace(a, "aaa"), {0, 2}), "non-convex subset", std::invalid_argument);

  std::mt19937_64 rng(9);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const auto al = random_alphabet(rng);
    std::string w(1 + rng() % 6, 'a');
    for (auto& c : w) c = "abcd"[rng() % 4];
    const Trace x(al, w);
    std::set<std::size_t> u;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (rng() % 2) u.insert(i);
    }
    try {
      const auto fx = factorize_convex(x, u);
      REQUIRE(multiply(multiply(multiply(fx.p, fx.u), fx.v), fx.q) == x);
      for (char c : fx.u.word()) REQUIRE(al->independent_of(c, fx.v.word()));
      REQUIRE(fx.u.size() == u.size());
      ++checked;
    } catch (const std::invalid_argument&) {
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("prefixes and suffixes") {
  const auto ab = alph("ab", {{'a', 'b'}});
  CHECK(words_of(prefixes(Trace(ab, "ab"))) == std::set<Word>{"", "a", "b", "ab"});
  CHECK(words_of(prefixes(Trace(alph("a", {}), "aa"))) == std::set<Word>{"", "a", "aa"});
  const Trace x = lex_nf("abcd", example_alphabet());
  CHECK(words_of(suffixes(x)) == closed_subsets(x, false));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const auto al = random_alphabet(rng);
    std::string w(rng() % 7, 'a');
    for (auto& c : w) c = "abcd"[rng() % 4];
    const Trace y(al, w);
    REQUIRE(words_of(prefixes(y)) == closed_subsets(y, true));
    REQUIRE(words_of(suffixes(y)) == closed_subsets(y, false));
  }
}

TEST_CASE("quotients") {
  const auto ab = alph("abc", {{'a', 'b'}});
  const Trace x(ab, "bac");
  CHECK(left_quotient(x, 'b')->word() == "ac");
  CHECK_FALSE(left_quotient(x, 'c').has_value());
  CHECK(right_quotient(x, 'c')->word() == "ab");
  CHECK_FALSE(right_quotient(x, 'a').has_value());
}

TEST_CASE("transposition orbits") {
  const auto dep = alph("ac", {});
  CHECK(words_of(transposition_orbit(Trace(dep, "ac"))) == std::set<Word>{"ac", "ca"});
  CHECK(transposition_orbit(Trace(alph("ab", {{'a', 'b'}}), "ab")).size() == 1);
  CHECK(words_of(transposition_orbit(Trace(example_alphabet(), "abcd"))) ==
        orbit_brute(Trace(example_alphabet(), "abcd")));
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const auto al = random_alphabet(rng);
    std::string w(rng() % 7, 'a');
    for (auto& c : w) c = "abcd"[rng() % 4];
    const Trace y(al, w);
    REQUIRE(words_of(transposition_orbit(y)) == orbit_brute(y));
  }
}

TEST_CASE("traces keep length and letter counts") {
  const auto a = example_alphabet();
  for (const auto& w : all_words("abcd", 5)) {
    const Trace x(a, w);
    REQUIRE(x.size() == w.size());
    for (char c : a->letters()) REQUIRE(x.count(c) == static_cast<std::size_t>(std::count(w.begin(), w.end(), c)));
  }
}
