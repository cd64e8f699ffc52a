#include "perex/traces.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace perex {

namespace {

std::string letter_str(char c) { return std::string(1, c); }

char json_letter(const nlohmann::json& v) {
  const auto s = v.get<std::string>();
  if (s.size() != 1) throw std::invalid_argument("alphabet: letters must be single characters, got '" + s + "'");
  return s[0];
}

}  // namespace

IndepAlphabet::IndepAlphabet(std::string_view letters,
                             const std::vector<std::pair<char, char>>& independence,
                             const std::map<char, char>& involution)
    : letters_(letters), indep_(letters.size(), 0), involution_(involution) {
  if (letters_.size() > 64) throw std::invalid_argument("alphabet: at most 64 letters");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    auto& r = rank_[static_cast<unsigned char>(letters_[i])];
    if (r >= 0) throw std::invalid_argument("alphabet: duplicate letter '" + letter_str(letters_[i]) + "'");
    r = static_cast<int>(i);
  }
  for (const auto& [a, b] : independence) {
    if (!contains(a) || !contains(b)) {
      throw std::invalid_argument("alphabet: independence pair (" + letter_str(a) + "," +
                                  letter_str(b) + ") uses a foreign letter");
    }
    if (a == b) throw std::invalid_argument("alphabet: independence must be irreflexive");
    indep_[static_cast<std::size_t>(rank(a))] |= std::uint64_t{1} << rank(b);
    indep_[static_cast<std::size_t>(rank(b))] |= std::uint64_t{1} << rank(a);
  }
  for (const auto& [a, b] : involution_) {
    if (!contains(a) || !contains(b)) throw std::invalid_argument("alphabet: involution uses a foreign letter");
    auto back = involution_.find(b);
    if (back == involution_.end() || back->second != a) {
      throw std::invalid_argument("alphabet: involution is not an involution at '" + letter_str(a) + "'");
    }
    for (char c : letters_) {
      if (independent(a, c) != independent(b, c)) {
        throw std::invalid_argument("alphabet: involution does not preserve independence at '" +
                                    letter_str(a) + "'");
      }
    }
  }
}

bool IndepAlphabet::independent(char a, char b) const {
  const int ra = rank(a), rb = rank(b);
  if (ra < 0 || rb < 0) return false;
  return (indep_[static_cast<std::size_t>(ra)] >> rb) & 1U;
}

bool IndepAlphabet::independent_of(char a, std::string_view w) const {
  return std::all_of(w.begin(), w.end(), [&](char c) { return independent(a, c); });
}

std::vector<std::pair<char, char>> IndepAlphabet::independence_pairs() const {
  std::vector<std::pair<char, char>> out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    for (std::size_t j = i + 1; j < letters_.size(); ++j) {
      if (independent(letters_[i], letters_[j])) out.emplace_back(letters_[i], letters_[j]);
    }
  }
  return out;
}

IndepAlphabet IndepAlphabet::restrict(std::string_view keep) const {
  std::string sub;
  for (char c : letters_) {
    if (keep.find(c) != std::string_view::npos) sub.push_back(c);
  }
  std::vector<std::pair<char, char>> pairs;
  for (const auto& [a, b] : independence_pairs()) {
    if (sub.find(a) != std::string::npos && sub.find(b) != std::string::npos) pairs.emplace_back(a, b);
  }
  std::map<char, char> inv;
  bool closed = true;
  for (const auto& [a, b] : involution_) {
    const bool ka = sub.find(a) != std::string::npos, kb = sub.find(b) != std::string::npos;
    if (ka && kb) inv[a] = b;
    if (ka != kb) closed = false;
  }
  return IndepAlphabet(sub, pairs, closed ? inv : std::map<char, char>{});
}

void IndepAlphabet::check_word(std::string_view w) const {
  for (char c : w) {
    if (!contains(c)) throw std::invalid_argument("letter '" + letter_str(c) + "' is not in the alphabet");
  }
}

IndepAlphabet alphabet_from_json(const nlohmann::json& j) {
  std::string letters;
  const auto& l = j.at("letters");
  if (l.is_string()) {
    letters = l.get<std::string>();
  } else {
    for (const auto& c : l) letters.push_back(json_letter(c));
  }
  std::vector<std::pair<char, char>> pairs;
  if (j.contains("independence")) {
    for (const auto& p : j.at("independence")) {
      if (p.is_string()) {
        const auto s = p.get<std::string>();
        if (s.size() != 2) throw std::invalid_argument("alphabet: independence pair '" + s + "' must have two letters");
        pairs.emplace_back(s[0], s[1]);
      } else {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("alphabet: independence pairs have two entries");
        pairs.emplace_back(json_letter(p[0]), json_letter(p[1]));
      }
    }
  }
  std::map<char, char> inv;
  if (j.contains("involution")) {
    for (const auto& [k, v] : j.at("involution").items()) {
      if (k.size() != 1) throw std::invalid_argument("alphabet: involution keys are letters");
      inv[k[0]] = json_letter(v);
    }
  }
  return IndepAlphabet(letters, pairs, inv);
}

nlohmann::json alphabet_to_json(const IndepAlphabet& a) {
  nlohmann::json j;
  j["letters"] = nlohmann::json::array();
  for (char c : a.letters()) j["letters"].push_back(letter_str(c));
  j["independence"] = nlohmann::json::array();
  for (const auto& [x, y] : a.independence_pairs()) j["independence"].push_back({letter_str(x), letter_str(y)});
  if (!a.involution().empty()) {
    j["involution"] = nlohmann::json::object();
    for (const auto& [x, y] : a.involution()) j["involution"][letter_str(x)] = letter_str(y);
  }
  return j;
}

Word lex_nf(std::string_view w, const IndepAlphabet& alph) {
  alph.check_word(w);
  const std::vector<char> v(w.begin(), w.end());
  const auto nf = lex_normal_form(
      v, [&](char a, char b) { return alph.less(a, b); },
      [&](char a, char b) { return alph.independent(a, b); });
  return Word(nf.begin(), nf.end());
}

Trace::Trace(AlphabetPtr alphabet, std::string_view w) : alph_(std::move(alphabet)) {
  if (!alph_) throw std::invalid_argument("Trace: missing alphabet");
  nf_ = perex::lex_nf(w, *alph_);
}

std::size_t Trace::count(char a) const {
  return static_cast<std::size_t>(std::count(nf_.begin(), nf_.end(), a));
}

Trace trace_from_nf(AlphabetPtr alphabet, Word nf) {
  return Trace(std::move(alphabet), std::move(nf), Trace::Normalized{});
}

Trace lex_nf(std::string_view w, const AlphabetPtr& alph) { return Trace(alph, w); }

namespace {

// Successor of a forbidden-set state after reading c.
std::uint64_t forbidden_step(const IndepAlphabet& alph, std::uint64_t f, char c) {
  std::uint64_t next = 0;
  const int rc = alph.rank(c);
  for (std::size_t i = 0; i < alph.size(); ++i) {
    const char a = alph.letters()[i];
    if (!alph.independent(a, c)) continue;
    if (static_cast<int>(i) < rc || ((f >> i) & 1U)) next |= std::uint64_t{1} << i;
  }
  return next;
}

}  // namespace

bool is_lex_nf(std::string_view w, const IndepAlphabet& alph) {
  std::uint64_t f = 0;
  for (char c : w) {
    const int rc = alph.rank(c);
    if (rc < 0 || ((f >> rc) & 1U)) return false;
    f = forbidden_step(alph, f, c);
  }
  return true;
}

Dfa lexnf_dfa(const IndepAlphabet& alph) {
  Dfa a(alph.letters());
  std::map<std::uint64_t, int> ids;
  std::deque<std::uint64_t> queue;
  auto intern = [&](std::uint64_t f) {
    auto [it, fresh] = ids.try_emplace(f, 0);
    if (fresh) {
      std::string name = "{";
      for (std::size_t i = 0; i < alph.size(); ++i) {
        if ((f >> i) & 1U) {
          if (name.size() > 1) name += ",";
          name += alph.letters()[i];
        }
      }
      it->second = a.add_state(true, name + "}");
      queue.push_back(f);
    }
    return it->second;
  };
  a.set_initial(intern(0));
  while (!queue.empty()) {
    const std::uint64_t f = queue.front();
    queue.pop_front();
    const int from = ids.at(f);
    for (std::size_t i = 0; i < alph.size(); ++i) {
      if ((f >> i) & 1U) continue;
      const char c = alph.letters()[i];
      a.set_transition(from, c, intern(forbidden_step(alph, f, c)));
    }
  }
  return a;
}

bool trace_equal(std::string_view w1, std::string_view w2, const IndepAlphabet& alph) {
  return lex_nf(w1, alph) == lex_nf(w2, alph);
}

Trace multiply(const Trace& x, const Trace& y) {
  return Trace(x.alphabet_ptr() ? x.alphabet_ptr() : y.alphabet_ptr(), x.word() + y.word());
}

DepGraph dependence_graph(const Trace& x) {
  DepGraph g{x.word(), {}};
  const Word& w = x.word();
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (!x.alphabet().independent(w[i], w[j])) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

std::vector<std::vector<bool>> precedence(const Trace& x) {
  const Word& w = x.word();
  const std::size_t m = w.size();
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  // positions are a topological order, so one backward sweep closes the relation
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!x.alphabet().independent(w[i], w[j])) {
        reach[i][j] = true;
        for (std::size_t k = j + 1; k < m; ++k) {
          if (reach[j][k]) reach[i][k] = true;
        }
      }
    }
  }
  return reach;
}

DepGraph hasse(const Trace& x) {
  const auto reach = precedence(x);
  const std::size_t m = x.size();
  DepGraph g{x.word(), {}};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!reach[i][j]) continue;
      bool covering = true;
      for (std::size_t k = i + 1; k < j && covering; ++k) {
        if (reach[i][k] && reach[k][j]) covering = false;
      }
      if (covering) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

namespace {

Word sorted_step(Word s, const IndepAlphabet& alph) {
  std::sort(s.begin(), s.end(), [&](char a, char b) { return alph.less(a, b); });
  return s;
}

}  // namespace

Word min_step(const Trace& x) {
  const Word& w = x.word();
  Word out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (x.alphabet().independent_of(w[j], std::string_view(w).substr(0, j))) out.push_back(w[j]);
  }
  return sorted_step(out, x.alphabet());
}

Word max_step(const Trace& x) {
  const Word& w = x.word();
  Word out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (x.alphabet().independent_of(w[j], std::string_view(w).substr(j + 1))) out.push_back(w[j]);
  }
  return sorted_step(out, x.alphabet());
}

std::vector<Trace> connected_components(const Trace& x) {
  const Word& w = x.word();
  const std::size_t m = w.size();
  std::vector<int> comp(m, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (comp[s] >= 0) continue;
    std::deque<std::size_t> queue{s};
    comp[s] = ncomp;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < m; ++j) {
        if (comp[j] < 0 && !x.alphabet().independent(w[i], w[j])) {
          comp[j] = ncomp;
          queue.push_back(j);
        }
      }
    }
    ++ncomp;
  }
  std::vector<Word> parts(static_cast<std::size_t>(ncomp));
  for (std::size_t i = 0; i < m; ++i) parts[static_cast<std::size_t>(comp[i])].push_back(w[i]);
  std::vector<Trace> out;
  for (auto& p : parts) out.emplace_back(x.alphabet_ptr(), p);
  return out;
}

ConvexFactorization factorize_convex(const Trace& x, const std::set<std::size_t>& positions) {
  const std::size_t m = x.size();
  for (std::size_t i : positions) {
    if (i >= m) throw std::out_of_range("factorize_convex: position out of range");
  }
  const auto reach = precedence(x);
  std::vector<bool> in_u(m, false), below(m, false), above(m, false);
  for (std::size_t i : positions) in_u[i] = true;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i : positions) {
      if (reach[j][i]) below[j] = true;
      if (reach[i][j]) above[j] = true;
    }
    if (below[j] && above[j] && !in_u[j]) throw std::invalid_argument("non-convex subset");
  }
  Word p, u, v, q;
  const Word& w = x.word();
  for (std::size_t j = 0; j < m; ++j) {
    if (in_u[j]) {
      u.push_back(w[j]);
    } else if (below[j]) {
      p.push_back(w[j]);
    } else if (above[j]) {
      q.push_back(w[j]);
    } else {
      v.push_back(w[j]);
    }
  }
  const auto& a = x.alphabet_ptr();
  return ConvexFactorization{Trace(a, p), Trace(a, u), Trace(a, v), Trace(a, q)};
}

std::optional<Trace> left_quotient(const Trace& x, char a) {
  const Word& w = x.word();
  const auto pos = w.find(a);
  if (pos == Word::npos) return std::nullopt;
  if (!x.alphabet().independent_of(a, std::string_view(w).substr(0, pos))) return std::nullopt;
  Word rest = w;
  rest.erase(pos, 1);
  return Trace(x.alphabet_ptr(), rest);
}

std::optional<Trace> right_quotient(const Trace& x, char a) {
  const Word& w = x.word();
  const auto pos = w.rfind(a);
  if (pos == Word::npos) return std::nullopt;
  if (!x.alphabet().independent_of(a, std::string_view(w).substr(pos + 1))) return std::nullopt;
  Word rest = w;
  rest.erase(pos, 1);
  return Trace(x.alphabet_ptr(), rest);
}

namespace {

template <class Step>
std::set<Trace> closure(const Trace& x, Step step) {
  std::set<Trace> seen{x};
  std::deque<Trace> queue{x};
  while (!queue.empty()) {
    const Trace y = queue.front();
    queue.pop_front();
    for (char a : x.alphabet().letters()) {
      auto z = step(y, a);
      if (z && seen.insert(*z).second) queue.push_back(*z);
    }
  }
  return seen;
}

}  // namespace

std::set<Trace> prefixes(const Trace& x) { return closure(x, right_quotient); }

std::set<Trace> suffixes(const Trace& x) { return closure(x, left_quotient); }

std::set<Trace> transposition_orbit(const Trace& x) {
  return closure(x, [](const Trace& y, char a) -> std::optional<Trace> {
    auto rest = left_quotient(y, a);
    if (!rest) return std::nullopt;
    return Trace(y.alphabet_ptr(), rest->word() + a);
  });
}

}  // namespace perex
