#include "perex/trace_pump.hpp"

#include <deque>
#include <map>
#include <memory>
#include <stdexcept>

namespace perex {

namespace {

std::string show(const Trace& x) { return x.empty() ? "1" : x.word(); }

std::string state_name(const PrefState& s) {
  return "(" + show(s.r) + "," + show(s.q) + "," + show(s.s) + ")";
}

}  // namespace

PrefAutomaton build_pref_automaton(const Trace& u, const Trace& p, const Trace& v) {
  if (p.empty()) throw std::invalid_argument("build_pref_automaton: p must be nonempty");
  const Word all = u.word() + p.word() + v.word();
  auto alph = std::make_shared<const IndepAlphabet>(p.alphabet().restrict(all));

  PrefAutomaton out{alph, Dfa(alph->letters()), {}, Dfa::kNone};
  std::map<PrefState, int> ids;
  std::deque<PrefState> queue;
  auto intern = [&](PrefState st) {
    auto it = ids.find(st);
    if (it != ids.end()) return it->second;
    const int id = out.dfa.add_state(true, state_name(st));
    out.states.emplace_back(st);
    ids.emplace(st, id);
    queue.push_back(std::move(st));
    return id;
  };

  out.dfa.set_initial(intern(PrefState{Trace(alph, u.word()), Trace(alph, p.word()), Trace(alph, v.word())}));
  std::vector<std::pair<int, char>> to_sink;
  while (!queue.empty()) {
    const PrefState st = queue.front();
    queue.pop_front();
    const int from = ids.at(st);
    const Word rq = st.r.word() + st.q.word();
    for (char a : alph->letters()) {
      std::optional<PrefState> next;
      if (auto r = left_quotient(st.r, a)) {
        next = PrefState{*r, st.q, st.s};
      } else if (auto q = left_quotient(st.q, a); q && alph->independent_of(a, st.r.word())) {
        next = PrefState{st.r, Trace(alph, q->word() + a), st.s};
      } else if (auto s = left_quotient(st.s, a); s && alph->independent_of(a, rq)) {
        next = PrefState{st.r, st.q, *s};
      }
      if (next) {
        out.dfa.set_transition(from, a, intern(*next));
      } else {
        to_sink.emplace_back(from, a);
      }
    }
  }
  out.sink = out.dfa.add_state(false, "sink");
  out.states.emplace_back(std::nullopt);
  for (char a : alph->letters()) out.dfa.set_transition(out.sink, a, out.sink);
  for (const auto& [from, a] : to_sink) out.dfa.set_transition(from, a, out.sink);
  return out;
}

Dfa lex_filter(const Dfa& a, const IndepAlphabet& alph) {
  for (char c : a.alphabet()) {
    if (!alph.contains(c)) {
      throw std::invalid_argument(std::string("lex_filter: letter '") + c + "' is not in the alphabet");
    }
  }
  return trim(product(a, lexnf_dfa(alph.restrict(a.alphabet()))));
}

bool PumpingCertificate::ok() const {
  if (!perfect) return false;
  for (const auto& nf : normal_forms) {
    if (!nf.prefix_accepted) return false;
  }
  return true;
}

PumpingCertificate certify_pumping_family(const Trace& u, const Trace& p, const Trace& v,
                                          std::size_t n_max) {
  const PrefAutomaton pa = build_pref_automaton(u, p, v);
  PumpingCertificate cert;
  cert.automaton = lex_filter(pa.dfa, *pa.alphabet);
  cert.perfect = is_periodically_perfect(cert.automaton);
  Word pn;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const Word nf = lex_nf(u.word() + pn + v.word(), *pa.alphabet);
    PumpedNormalForm entry;
    entry.n = n;
    entry.word = nf;
    entry.exp = exponent_of_periodicity(nf);
    entry.prefix_accepted = cert.automaton.accepts(std::string_view(nf).substr(0, std::min(n, nf.size())));
    cert.normal_forms.push_back(std::move(entry));
    pn += p.word();
  }
  return cert;
}

nlohmann::json certificate_to_json(const PumpingCertificate& c) {
  nlohmann::json j;
  j["perfect"] = c.perfect;
  j["normal_forms"] = nlohmann::json::array();
  for (const auto& nf : c.normal_forms) {
    j["normal_forms"].push_back(
        {{"n", nf.n}, {"word", nf.word}, {"exp", nf.exp}, {"prefix_accepted", nf.prefix_accepted}});
  }
  j["automaton"] = dfa_to_json(c.automaton);
  return j;
}

}  // namespace perex
