#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "perex/words.hpp"

namespace perex {

/// Deterministic finite automaton with a partial transition function over a
/// finite alphabet of single-character letters.
class Dfa {
 public:
  static constexpr int kNone = -1;

  Dfa() = default;
  /// The alphabet is sorted and deduplicated.
  explicit Dfa(std::string_view alphabet);

  const std::string& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return finals_.size(); }
  int initial() const { return initial_; }
  bool is_final(int state) const { return finals_[static_cast<std::size_t>(state)]; }
  const std::string& name(int state) const { return names_[static_cast<std::size_t>(state)]; }

  /// Index of c in the alphabet, or kNone.
  int letter_index(char c) const;

  int add_state(bool final, std::string name = {});
  void set_initial(int state);
  void set_final(int state, bool final);
  void set_transition(int from, char letter, int to);

  /// Target state, or kNone if undefined (or c is not a letter).
  int step(int state, char c) const;
  int step_index(int state, std::size_t letter) const {
    return delta_[static_cast<std::size_t>(state)][letter];
  }
  /// Run from `from` (initial by default); kNone once a transition is missing.
  int run(std::string_view w, int from = kNone) const;
  bool accepts(std::string_view w) const;

 private:
  std::string alphabet_;
  std::vector<std::vector<int>> delta_;
  std::vector<bool> finals_;
  std::vector<std::string> names_;
  int initial_ = 0;
};

/// Build a DFA from explicit data: transitions are (from, letter, to).
Dfa make_dfa(std::string_view alphabet, std::size_t states, int initial,
             const std::vector<int>& finals,
             const std::vector<std::tuple<int, char, int>>& transitions);

/// Accepts every word over the alphabet.
Dfa universal_dfa(std::string_view alphabet);
/// Accepts nothing: a single non-final initial state.
Dfa empty_dfa(std::string_view alphabet);

/// Keep only states on some accepting path. An empty language yields a single
/// non-final initial state without transitions.
Dfa trim(const Dfa& a);

/// Accepts L(a) ∩ L(b); only reachable pairs are built. Throws
/// std::invalid_argument if the alphabets differ.
Dfa product(const Dfa& a, const Dfa& b);

/// Component id of every state (Tarjan); ids are in reverse topological order.
std::vector<int> strongly_connected_components(const Dfa& a);

bool is_infinite(const Dfa& a);

struct PumpTriple {
  Word u;
  Word p;
  Word v;
};

/// u p* v ⊆ L(a) with p nonempty. Throws std::domain_error("finite language").
PumpTriple pump_triple(const Dfa& a);

/// Periodic perfectness of L(a): in the trimmed automaton every strongly
/// connected component is a single simple cycle, i.e. no state has two
/// outgoing transitions that stay inside its component.
bool is_periodically_perfect(const Dfa& a);

/// Length of the longest cycle of the trimmed automaton (0 if acyclic).
/// Only meaningful when the automaton is periodically perfect.
std::size_t longest_cycle(const Dfa& a);

/// N = |Q| (n+1) c_max + |Q| for the trimmed automaton: every accepted word of
/// length >= N has exp >= n. Throws std::domain_error when the language is
/// not periodically perfect.
std::size_t perfectness_bound(const Dfa& a, std::size_t n);

/// A state q with two distinct simple cycles u, v (different first letters),
/// reached by r from the initial state and leading to a final state by s.
struct TwoCycleWitness {
  Word r;
  Word u;
  Word v;
  Word s;
};
std::optional<TwoCycleWitness> two_cycle_witness(const Dfa& a);

/// Calls f on every accepted word with min_len <= |w| <= max_len, ordered by
/// length and then lexicographically.
void for_each_accepted(const Dfa& a, std::size_t min_len, std::size_t max_len,
                       const std::function<void(std::string_view)>& f);
std::vector<Word> accepted_words(const Dfa& a, std::size_t max_len);

/// {"states":[names], "alphabet":[letters], "initial":name, "finals":[names],
///  "transitions":[[from, letter, to], ...]}
nlohmann::json dfa_to_json(const Dfa& a);
Dfa dfa_from_json(const nlohmann::json& j);

}  // namespace perex
