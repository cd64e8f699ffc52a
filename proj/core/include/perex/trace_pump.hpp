#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "perex/fsa.hpp"
#include "perex/traces.hpp"

namespace perex {

/// A non-sink state (r, q, s) of the prefix automaton: r a suffix of u, q in
/// the transposition orbit of p, s a suffix of v.
struct PrefState {
  Trace r;
  Trace q;
  Trace s;
  friend bool operator==(const PrefState&, const PrefState&) = default;
  friend auto operator<=>(const PrefState&, const PrefState&) = default;
};

struct PrefAutomaton {
  /// The alphabet restricted to the letters of u p v.
  AlphabetPtr alphabet;
  /// Complete DFA; every state except the sink is final.
  Dfa dfa;
  /// states[i] describes DFA state i; nullopt for the sink.
  std::vector<std::optional<PrefState>> states;
  int sink = Dfa::kNone;
};

/// Lazily built automaton for the prefixes of u p* v, starting at (u, p, v).
/// Reading a from (r, q, s):
///   r = a r'                          -> (r', q, s)
///   q = a q', a independent of r      -> (r, q' a, s)
///   s = a s', a independent of r q    -> (r, q, s')
///   otherwise                         -> sink.
/// Throws std::invalid_argument if p is empty.
PrefAutomaton build_pref_automaton(const Trace& u, const Trace& p, const Trace& v);

/// Trim product with the lexicographic normal-form automaton. The alphabet
/// of `a` must be a subset of the letters of `alph`.
Dfa lex_filter(const Dfa& a, const IndepAlphabet& alph);

struct PumpedNormalForm {
  std::size_t n = 0;
  Word word;
  std::size_t exp = 0;
  /// The prefix of length min(n, |word|) is accepted by the filtered automaton.
  bool prefix_accepted = false;
};

struct PumpingCertificate {
  bool perfect = false;
  std::vector<PumpedNormalForm> normal_forms;
  Dfa automaton;
  /// perfect and every prefix check passed.
  bool ok() const;
};

/// Builds and filters the prefix automaton, checks periodic perfectness and
/// lists nf_lex(u p^n v) for 0 <= n <= n_max.
PumpingCertificate certify_pumping_family(const Trace& u, const Trace& p, const Trace& v,
                                          std::size_t n_max);

/// {"perfect", "normal_forms": [{n, word, exp, prefix_accepted}], "automaton"}
nlohmann::json certificate_to_json(const PumpingCertificate& c);

}  // namespace perex
