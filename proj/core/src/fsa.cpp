#include "perex/fsa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace perex {

Dfa::Dfa(std::string_view alphabet) : alphabet_(alphabet) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
}

int Dfa::letter_index(char c) const {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), c);
  if (it == alphabet_.end() || *it != c) return kNone;
  return static_cast<int>(it - alphabet_.begin());
}

int Dfa::add_state(bool final, std::string name) {
  const int id = static_cast<int>(finals_.size());
  if (name.empty()) name = std::to_string(id);
  delta_.emplace_back(alphabet_.size(), kNone);
  finals_.push_back(final);
  names_.push_back(std::move(name));
  return id;
}

void Dfa::set_initial(int state) {
  if (state < 0 || static_cast<std::size_t>(state) >= num_states()) {
    throw std::out_of_range("Dfa::set_initial: no such state");
  }
  initial_ = state;
}

void Dfa::set_final(int state, bool final) {
  finals_.at(static_cast<std::size_t>(state)) = final;
}

void Dfa::set_transition(int from, char letter, int to) {
  const int li = letter_index(letter);
  if (li == kNone) {
    throw std::invalid_argument(std::string("Dfa::set_transition: letter '") + letter +
                                "' not in alphabet");
  }
  if (to < 0 || static_cast<std::size_t>(to) >= num_states()) {
    throw std::out_of_range("Dfa::set_transition: no such target state");
  }
  delta_.at(static_cast<std::size_t>(from))[static_cast<std::size_t>(li)] = to;
}

int Dfa::step(int state, char c) const {
  if (state == kNone) return kNone;
  const int li = letter_index(c);
  if (li == kNone) return kNone;
  return delta_[static_cast<std::size_t>(state)][static_cast<std::size_t>(li)];
}

int Dfa::run(std::string_view w, int from) const {
  int s = from == kNone ? initial_ : from;
  if (num_states() == 0) return kNone;
  for (char c : w) {
    s = step(s, c);
    if (s == kNone) return kNone;
  }
  return s;
}

bool Dfa::accepts(std::string_view w) const {
  const int s = run(w);
  return s != kNone && is_final(s);
}

Dfa make_dfa(std::string_view alphabet, std::size_t states, int initial,
             const std::vector<int>& finals,
             const std::vector<std::tuple<int, char, int>>& transitions) {
  Dfa a(alphabet);
  for (std::size_t i = 0; i < states; ++i) a.add_state(false);
  for (int f : finals) a.set_final(f, true);
  a.set_initial(initial);
  for (const auto& [from, letter, to] : transitions) a.set_transition(from, letter, to);
  return a;
}

Dfa universal_dfa(std::string_view alphabet) {
  Dfa a(alphabet);
  const int s = a.add_state(true);
  for (char c : a.alphabet()) a.set_transition(s, c, s);
  return a;
}

Dfa empty_dfa(std::string_view alphabet) {
  Dfa a(alphabet);
  a.add_state(false);
  return a;
}

namespace {

std::vector<bool> reachable(const Dfa& a) {
  std::vector<bool> seen(a.num_states(), false);
  if (a.num_states() == 0) return seen;
  std::deque<int> queue{a.initial()};
  seen[static_cast<std::size_t>(a.initial())] = true;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(s, l);
      if (t != Dfa::kNone && !seen[static_cast<std::size_t>(t)]) {
        seen[static_cast<std::size_t>(t)] = true;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

std::vector<bool> coreachable(const Dfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<int>> rev(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(static_cast<int>(s), l);
      if (t != Dfa::kNone) rev[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));
    }
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (a.is_final(static_cast<int>(s))) {
      seen[s] = true;
      queue.push_back(static_cast<int>(s));
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int p : rev[static_cast<std::size_t>(s)]) {
      if (!seen[static_cast<std::size_t>(p)]) {
        seen[static_cast<std::size_t>(p)] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

// Shortest word leading from `from` to a state satisfying `goal`, staying in
// states allowed by `allowed`; requires at least `min_steps` letters.
std::optional<Word> shortest_path(const Dfa& a, int from,
                                  const std::function<bool(int)>& goal,
                                  const std::function<bool(int)>& allowed,
                                  std::size_t min_steps = 0) {
  if (min_steps == 0 && goal(from)) return Word{};
  // BFS over (state) after taking at least one step when min_steps == 1
  std::vector<int> parent(a.num_states(), Dfa::kNone);
  std::vector<char> via(a.num_states(), 0);
  std::vector<bool> seen(a.num_states(), false);
  std::deque<int> queue;
  // the first layer is expanded explicitly so that `from` can also be a goal
  for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
    const int t = a.step_index(from, l);
    if (t == Dfa::kNone || !allowed(t) || seen[static_cast<std::size_t>(t)]) continue;
    seen[static_cast<std::size_t>(t)] = true;
    parent[static_cast<std::size_t>(t)] = -2;  // marks "direct successor of from"
    via[static_cast<std::size_t>(t)] = a.alphabet()[l];
    queue.push_back(t);
  }
  auto rebuild = [&](int t) {
    Word w;
    while (parent[static_cast<std::size_t>(t)] != -2) {
      w.push_back(via[static_cast<std::size_t>(t)]);
      t = parent[static_cast<std::size_t>(t)];
    }
    w.push_back(via[static_cast<std::size_t>(t)]);
    std::reverse(w.begin(), w.end());
    return w;
  };
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    if (goal(s)) return rebuild(s);
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(s, l);
      if (t == Dfa::kNone || !allowed(t) || seen[static_cast<std::size_t>(t)]) continue;
      seen[static_cast<std::size_t>(t)] = true;
      parent[static_cast<std::size_t>(t)] = s;
      via[static_cast<std::size_t>(t)] = a.alphabet()[l];
      queue.push_back(t);
    }
  }
  return std::nullopt;
}

}  // namespace

Dfa trim(const Dfa& a) {
  if (a.num_states() == 0) return empty_dfa(a.alphabet());
  const auto fwd = reachable(a);
  const auto bwd = coreachable(a);
  if (!(fwd[static_cast<std::size_t>(a.initial())] && bwd[static_cast<std::size_t>(a.initial())])) {
    return empty_dfa(a.alphabet());
  }
  Dfa out(a.alphabet());
  std::vector<int> remap(a.num_states(), Dfa::kNone);
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (fwd[s] && bwd[s]) remap[s] = out.add_state(a.is_final(static_cast<int>(s)), a.name(static_cast<int>(s)));
  }
  out.set_initial(remap[static_cast<std::size_t>(a.initial())]);
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    if (remap[s] == Dfa::kNone) continue;
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(static_cast<int>(s), l);
      if (t != Dfa::kNone && remap[static_cast<std::size_t>(t)] != Dfa::kNone) {
        out.set_transition(remap[s], a.alphabet()[l], remap[static_cast<std::size_t>(t)]);
      }
    }
  }
  return out;
}

Dfa product(const Dfa& a, const Dfa& b) {
  if (a.alphabet() != b.alphabet()) {
    throw std::invalid_argument("product: alphabet mismatch ('" + a.alphabet() + "' vs '" +
                                b.alphabet() + "')");
  }
  Dfa out(a.alphabet());
  if (a.num_states() == 0 || b.num_states() == 0) {
    out.add_state(false);
    return out;
  }
  std::map<std::pair<int, int>, int> index;
  std::deque<std::pair<int, int>> queue;
  auto intern = [&](int x, int y) {
    auto [it, fresh] = index.try_emplace({x, y}, 0);
    if (fresh) {
      it->second = out.add_state(a.is_final(x) && b.is_final(y),
                                 "(" + a.name(x) + "," + b.name(y) + ")");
      queue.emplace_back(x, y);
    }
    return it->second;
  };
  out.set_initial(intern(a.initial(), b.initial()));
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    const int from = index.at({x, y});
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int tx = a.step_index(x, l);
      const int ty = b.step_index(y, l);
      if (tx == Dfa::kNone || ty == Dfa::kNone) continue;
      out.set_transition(from, a.alphabet()[l], intern(tx, ty));
    }
  }
  return out;
}

std::vector<int> strongly_connected_components(const Dfa& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.alphabet().size();
  std::vector<int> comp(n, -1), low(n, 0), order(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0, ncomp = 0;
  // iterative Tarjan: frames hold (state, next letter to try)
  std::vector<std::pair<int, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != -1) continue;
    frames.emplace_back(static_cast<int>(root), 0);
    order[root] = low[root] = counter++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [s, next] = frames.back();
      const auto su = static_cast<std::size_t>(s);
      if (next < k) {
        const int t = a.step_index(s, next++);
        if (t == Dfa::kNone) continue;
        const auto tu = static_cast<std::size_t>(t);
        if (order[tu] == -1) {
          order[tu] = low[tu] = counter++;
          stack.push_back(t);
          on_stack[tu] = true;
          frames.emplace_back(t, 0);
        } else if (on_stack[tu]) {
          low[su] = std::min(low[su], order[tu]);
        }
        continue;
      }
      if (low[su] == order[su]) {
        int t;
        do {
          t = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(t)] = false;
          comp[static_cast<std::size_t>(t)] = ncomp;
        } while (t != s);
        ++ncomp;
      }
      const int done = s;
      frames.pop_back();
      if (!frames.empty()) {
        const auto pu = static_cast<std::size_t>(frames.back().first);
        low[pu] = std::min(low[pu], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  return comp;
}

namespace {

// Number of transitions from s staying inside its component.
std::size_t in_component_degree(const Dfa& a, const std::vector<int>& comp, int s) {
  std::size_t d = 0;
  for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
    const int t = a.step_index(s, l);
    if (t != Dfa::kNone && comp[static_cast<std::size_t>(t)] == comp[static_cast<std::size_t>(s)]) ++d;
  }
  return d;
}

}  // namespace

bool is_infinite(const Dfa& a) {
  const Dfa t = trim(a);
  const auto comp = strongly_connected_components(t);
  for (std::size_t s = 0; s < t.num_states(); ++s) {
    if (in_component_degree(t, comp, static_cast<int>(s)) > 0) return true;
  }
  return false;
}

PumpTriple pump_triple(const Dfa& a) {
  const Dfa t = trim(a);
  const auto comp = strongly_connected_components(t);
  for (std::size_t q = 0; q < t.num_states(); ++q) {
    const int qs = static_cast<int>(q);
    if (in_component_degree(t, comp, qs) == 0) continue;
    const auto any = [](int) { return true; };
    const auto same_comp = [&](int s) { return comp[static_cast<std::size_t>(s)] == comp[q]; };
    auto u = shortest_path(t, t.initial(), [&](int s) { return s == qs; }, any);
    auto p = shortest_path(t, qs, [&](int s) { return s == qs; }, same_comp, 1);
    auto v = shortest_path(t, qs, [&](int s) { return t.is_final(s); }, any);
    if (u && p && v) return PumpTriple{*u, *p, *v};
  }
  throw std::domain_error("finite language");
}

bool is_periodically_perfect(const Dfa& a) {
  const Dfa t = trim(a);
  const auto comp = strongly_connected_components(t);
  for (std::size_t s = 0; s < t.num_states(); ++s) {
    if (in_component_degree(t, comp, static_cast<int>(s)) > 1) return false;
  }
  return true;
}

std::size_t longest_cycle(const Dfa& a) {
  const Dfa t = trim(a);
  const auto comp = strongly_connected_components(t);
  std::map<int, std::size_t> size;
  std::map<int, bool> cyclic;
  for (std::size_t s = 0; s < t.num_states(); ++s) {
    ++size[comp[s]];
    if (in_component_degree(t, comp, static_cast<int>(s)) > 0) cyclic[comp[s]] = true;
  }
  std::size_t best = 0;
  for (const auto& [c, n] : size) {
    if (cyclic[c]) best = std::max(best, n);
  }
  return best;
}

std::size_t perfectness_bound(const Dfa& a, std::size_t n) {
  if (!is_periodically_perfect(a)) {
    throw std::domain_error("perfectness_bound: language is not periodically perfect");
  }
  const std::size_t q = trim(a).num_states();
  return q * (n + 1) * longest_cycle(a) + q;
}

std::optional<TwoCycleWitness> two_cycle_witness(const Dfa& a) {
  const Dfa t = trim(a);
  const auto comp = strongly_connected_components(t);
  const auto any = [](int) { return true; };
  for (std::size_t q = 0; q < t.num_states(); ++q) {
    const int qs = static_cast<int>(q);
    if (in_component_degree(t, comp, qs) < 2) continue;
    const auto same_comp = [&](int s) { return comp[static_cast<std::size_t>(s)] == comp[q]; };
    const auto at_q = [&](int s) { return s == qs; };
    std::vector<Word> cycles;
    for (char c : t.alphabet()) {
      const int next = t.step(qs, c);
      if (next == Dfa::kNone || !same_comp(next)) continue;
      auto back = shortest_path(t, next, at_q, same_comp);
      if (back) cycles.push_back(std::string(1, c) + *back);
      if (cycles.size() == 2) break;
    }
    auto r = shortest_path(t, t.initial(), at_q, any);
    auto s = shortest_path(t, qs, [&](int x) { return t.is_final(x); }, any);
    if (cycles.size() == 2 && r && s) return TwoCycleWitness{*r, cycles[0], cycles[1], *s};
  }
  return std::nullopt;
}

void for_each_accepted(const Dfa& a, std::size_t min_len, std::size_t max_len,
                       const std::function<void(std::string_view)>& f) {
  if (a.num_states() == 0 || min_len > max_len) return;
  const std::size_t n = a.num_states();
  // can[k][s]: some final state is reachable from s in exactly k steps
  std::vector<std::vector<bool>> can(max_len + 1, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) can[0][s] = a.is_final(static_cast<int>(s));
  for (std::size_t k = 1; k <= max_len; ++k) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t l = 0; l < a.alphabet().size() && !can[k][s]; ++l) {
        const int t = a.step_index(static_cast<int>(s), l);
        if (t != Dfa::kNone && can[k - 1][static_cast<std::size_t>(t)]) can[k][s] = true;
      }
    }
  }
  Word buf;
  std::function<void(int, std::size_t)> walk = [&](int s, std::size_t remaining) {
    if (remaining == 0) {
      f(buf);
      return;
    }
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(s, l);
      if (t == Dfa::kNone || !can[remaining - 1][static_cast<std::size_t>(t)]) continue;
      buf.push_back(a.alphabet()[l]);
      walk(t, remaining - 1);
      buf.pop_back();
    }
  };
  for (std::size_t len = min_len; len <= max_len; ++len) {
    if (!can[len][static_cast<std::size_t>(a.initial())]) continue;
    walk(a.initial(), len);
  }
}

std::vector<Word> accepted_words(const Dfa& a, std::size_t max_len) {
  std::vector<Word> out;
  for_each_accepted(a, 0, max_len, [&](std::string_view w) { out.emplace_back(w); });
  return out;
}

nlohmann::json dfa_to_json(const Dfa& a) {
  nlohmann::json j;
  j["states"] = nlohmann::json::array();
  j["finals"] = nlohmann::json::array();
  j["transitions"] = nlohmann::json::array();
  j["alphabet"] = nlohmann::json::array();
  for (char c : a.alphabet()) j["alphabet"].push_back(std::string(1, c));
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    const int si = static_cast<int>(s);
    j["states"].push_back(a.name(si));
    if (a.is_final(si)) j["finals"].push_back(a.name(si));
    for (std::size_t l = 0; l < a.alphabet().size(); ++l) {
      const int t = a.step_index(si, l);
      if (t != Dfa::kNone) {
        j["transitions"].push_back({a.name(si), std::string(1, a.alphabet()[l]), a.name(t)});
      }
    }
  }
  if (a.num_states() > 0) j["initial"] = a.name(a.initial());
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  std::string alphabet;
  for (const auto& l : j.at("alphabet")) {
    const auto s = l.get<std::string>();
    if (s.size() != 1) throw std::invalid_argument("automaton: letters must be single characters");
    alphabet += s;
  }
  Dfa a(alphabet);
  std::map<std::string, int> ids;
  for (const auto& s : j.at("states")) {
    const auto name = s.get<std::string>();
    if (ids.count(name)) throw std::invalid_argument("automaton: duplicate state '" + name + "'");
    ids[name] = a.add_state(false, name);
  }
  auto id = [&](const nlohmann::json& v) {
    const auto name = v.get<std::string>();
    auto it = ids.find(name);
    if (it == ids.end()) throw std::invalid_argument("automaton: unknown state '" + name + "'");
    return it->second;
  };
  if (a.num_states() == 0) throw std::invalid_argument("automaton: no states");
  a.set_initial(id(j.at("initial")));
  for (const auto& f : j.at("finals")) a.set_final(id(f), true);
  for (const auto& t : j.at("transitions")) {
    if (!t.is_array() || t.size() != 3) {
      throw std::invalid_argument("automaton: transitions are [from, letter, to]");
    }
    const auto letter = t[1].get<std::string>();
    if (letter.size() != 1) throw std::invalid_argument("automaton: bad letter '" + letter + "'");
    const int from = id(t[0]);
    if (a.step(from, letter[0]) != Dfa::kNone) {
      throw std::invalid_argument("automaton: nondeterministic transition from '" +
                                  t[0].get<std::string>() + "'");
    }
    a.set_transition(from, letter[0], id(t[2]));
  }
  return a;
}

}  // namespace perex
