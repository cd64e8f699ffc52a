#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "perex/fsa.hpp"
#include "perex/words.hpp"

namespace perex {

/// Ordered finite alphabet of single-character letters with an irreflexive,
/// symmetric independence relation and an optional involution. At most 64
/// letters.
class IndepAlphabet {
 public:
  IndepAlphabet() = default;
  /// `letters` lists the alphabet in increasing order. Throws
  /// std::invalid_argument on duplicate letters, reflexive pairs, pairs with
  /// foreign letters, or an involution that is not compatible with I.
  IndepAlphabet(std::string_view letters,
                const std::vector<std::pair<char, char>>& independence,
                const std::map<char, char>& involution = {});

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool contains(char c) const { return rank(c) >= 0; }
  /// Position of c in the order, or -1.
  int rank(char c) const { return rank_[static_cast<unsigned char>(c)]; }
  bool less(char a, char b) const { return rank(a) < rank(b); }
  bool independent(char a, char b) const;
  /// True iff a is independent of every letter of w.
  bool independent_of(char a, std::string_view w) const;
  /// Independence as a list of pairs (a, b) with a before b in the order.
  std::vector<std::pair<char, char>> independence_pairs() const;
  const std::map<char, char>& involution() const { return involution_; }

  /// Sub-alphabet on the letters of `keep` (order and I inherited; the
  /// involution is dropped unless closed on the subset).
  IndepAlphabet restrict(std::string_view keep) const;

  /// Throws std::invalid_argument naming the first letter of w outside the
  /// alphabet.
  void check_word(std::string_view w) const;

  friend bool operator==(const IndepAlphabet& a, const IndepAlphabet& b) {
    return a.letters_ == b.letters_ && a.indep_ == b.indep_ && a.involution_ == b.involution_;
  }

 private:
  std::string letters_;
  std::array<int, 256> rank_ = make_empty_rank();
  std::vector<std::uint64_t> indep_;  // indep_[rank] = bitmask of independent ranks
  std::map<char, char> involution_;

  static std::array<int, 256> make_empty_rank() {
    std::array<int, 256> r{};
    r.fill(-1);
    return r;
  }
};

using AlphabetPtr = std::shared_ptr<const IndepAlphabet>;

/// {"letters": [..] or "abcd", "independence": [[a, b], ...], "involution": {..}}
IndepAlphabet alphabet_from_json(const nlohmann::json& j);
nlohmann::json alphabet_to_json(const IndepAlphabet& a);

/// Lexicographic normal form of a sequence under a partial commutation.
/// `less` orders the letters, `indep` is the independence relation. Greedy:
/// repeatedly emit the least letter among the minimal positions.
template <class T, class Less, class Indep>
std::vector<T> lex_normal_form(const std::vector<T>& w, Less less, Indep indep) {
  std::vector<T> out;
  out.reserve(w.size());
  std::vector<std::size_t> rest(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) rest[i] = i;
  std::vector<T> seen;  // distinct letters before the scanned position
  while (!rest.empty()) {
    std::size_t pick = rest.size();
    seen.clear();
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const T& c = w[rest[k]];
      bool minimal = true;
      bool fresh = true;
      for (const T& s : seen) {
        if (s == c) fresh = false;
        if (!indep(s, c)) {
          minimal = false;
          break;
        }
      }
      if (minimal && (pick == rest.size() || less(c, w[rest[pick]]))) pick = k;
      if (fresh && !minimal) {
        fresh = std::find(seen.begin(), seen.end(), c) == seen.end();
      }
      if (fresh) seen.push_back(c);
    }
    out.push_back(w[rest[pick]]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

/// Element of M(Γ, I), stored as its lexicographic normal form.
class Trace {
 public:
  Trace() = default;
  /// Normalizes w; throws std::invalid_argument on a foreign letter.
  Trace(AlphabetPtr alphabet, std::string_view w);

  const Word& word() const { return nf_; }
  const IndepAlphabet& alphabet() const { return *alph_; }
  const AlphabetPtr& alphabet_ptr() const { return alph_; }
  std::size_t size() const { return nf_.size(); }
  bool empty() const { return nf_.empty(); }
  std::size_t count(char a) const;

  friend bool operator==(const Trace& x, const Trace& y) { return x.nf_ == y.nf_; }
  friend auto operator<=>(const Trace& x, const Trace& y) { return x.nf_ <=> y.nf_; }

 private:
  struct Normalized {};
  Trace(AlphabetPtr alphabet, Word nf, Normalized) : alph_(std::move(alphabet)), nf_(std::move(nf)) {}
  friend Trace trace_from_nf(AlphabetPtr, Word);

  AlphabetPtr alph_;
  Word nf_;
};

/// Wraps a word already known to be in lexicographic normal form.
Trace trace_from_nf(AlphabetPtr alphabet, Word nf);

Word lex_nf(std::string_view w, const IndepAlphabet& alph);
Trace lex_nf(std::string_view w, const AlphabetPtr& alph);

/// True iff w has no factor b y a with a < b and a independent of b y.
bool is_lex_nf(std::string_view w, const IndepAlphabet& alph);

/// DFA accepting exactly the lexicographic normal forms. States are
/// forbidden-letter sets; all states are final.
Dfa lexnf_dfa(const IndepAlphabet& alph);

bool trace_equal(std::string_view w1, std::string_view w2, const IndepAlphabet& alph);

Trace multiply(const Trace& x, const Trace& y);

/// Positions are 0-based; edges (i, j) with i < j and dependent labels.
struct DepGraph {
  Word labels;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

DepGraph dependence_graph(const Trace& x);
/// Covering arcs of the order induced by the dependence graph.
DepGraph hasse(const Trace& x);
/// reach[i][j]: i strictly precedes j in the induced order.
std::vector<std::vector<bool>> precedence(const Trace& x);

/// Labels of the minimal (maximal) positions, sorted by the letter order.
Word min_step(const Trace& x);
Word max_step(const Trace& x);

/// Connected components of the dependence graph, ordered by first position.
std::vector<Trace> connected_components(const Trace& x);

struct ConvexFactorization {
  Trace p;
  Trace u;
  Trace v;
  Trace q;
};

/// x = p u v q with u induced by the positions in U (0-based) and (u, v)
/// independent. Throws std::invalid_argument("non-convex subset") if U is not
/// convex and std::out_of_range for positions beyond |x|.
ConvexFactorization factorize_convex(const Trace& x, const std::set<std::size_t>& positions);

/// a^{-1} x if a is a minimal letter of x.
std::optional<Trace> left_quotient(const Trace& x, char a);
/// x a^{-1} if a is a maximal letter of x.
std::optional<Trace> right_quotient(const Trace& x, char a);

std::set<Trace> prefixes(const Trace& x);
std::set<Trace> suffixes(const Trace& x);

/// Closure of {x} under uv -> vu, generated by single-letter rotations.
std::set<Trace> transposition_orbit(const Trace& x);

}  // namespace perex
