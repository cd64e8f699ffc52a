#include "perex/bs.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "perex/arith.hpp"

namespace perex {

BSSpec::BSSpec(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (p < 1 || p > (q < 0 ? -q : q)) {
    throw std::invalid_argument("BS(p,q) requires 1 <= p <= |q|, got p=" + std::to_string(p) +
                                ", q=" + std::to_string(q));
  }
}

namespace {

std::int64_t& trailing_ref(BSWord& w) { return w.tail.empty() ? w.head : w.tail.back().second; }

std::int64_t abs64(std::int64_t x) { return x < 0 ? checked_sub(0, x) : x; }

}  // namespace

BSWord parse_bs_word(std::string_view w) {
  BSWord out;
  if (w == "1") return out;
  for (char c : w) {
    switch (c) {
      case 'a': trailing_ref(out) = checked_add(trailing_ref(out), 1); break;
      case 'A': trailing_ref(out) = checked_sub(trailing_ref(out), 1); break;
      case 't': out.tail.emplace_back(1, 0); break;
      case 'T': out.tail.emplace_back(-1, 0); break;
      case ' ': break;
      default:
        throw std::invalid_argument(std::string("BS word: letter '") + c + "' is not one of a, A, t, T");
    }
  }
  return out;
}

std::size_t letter_length(const BSWord& w) {
  std::size_t n = static_cast<std::size_t>(abs64(w.head));
  for (const auto& [e, k] : w.tail) n += 1 + static_cast<std::size_t>(abs64(k));
  return n;
}

std::string to_letters(const BSWord& w) {
  std::string out;
  auto put_a = [&](std::int64_t k) { out.append(static_cast<std::size_t>(abs64(k)), k < 0 ? 'A' : 'a'); };
  put_a(w.head);
  for (const auto& [e, k] : w.tail) {
    out.push_back(e > 0 ? 't' : 'T');
    put_a(k);
  }
  return out;
}

std::string to_compact(const BSWord& w) {
  std::string out;
  auto put = [&](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  auto put_a = [&](std::int64_t k) {
    if (k == 1) put("a");
    else if (k != 0) put("a^" + std::to_string(k));
  };
  put_a(w.head);
  for (const auto& [e, k] : w.tail) {
    put(e > 0 ? "t" : "T");
    put_a(k);
  }
  return out.empty() ? "1" : out;
}

std::vector<Run> to_runs(const BSWord& w) {
  std::vector<Run> runs;
  auto push = [&](char c, std::uint64_t len) {
    if (len == 0) return;
    if (!runs.empty() && runs.back().letter == c) {
      runs.back().length += len;
    } else {
      runs.push_back(Run{c, len});
    }
  };
  auto push_a = [&](std::int64_t k) { push(k < 0 ? 'A' : 'a', static_cast<std::uint64_t>(abs64(k))); };
  push_a(w.head);
  for (const auto& [e, k] : w.tail) {
    push(e > 0 ? 't' : 'T', 1);
    push_a(k);
  }
  return runs;
}

BSWord bs_concat(const BSWord& x, const BSWord& y) {
  BSWord out = x;
  trailing_ref(out) = checked_add(trailing_ref(out), y.head);
  out.tail.insert(out.tail.end(), y.tail.begin(), y.tail.end());
  return out;
}

BSWord bs_inverse(const BSWord& x) {
  BSWord out;
  out.head = checked_sub(0, x.trailing());
  for (std::size_t i = x.tail.size(); i-- > 0;) {
    const std::int64_t before = i == 0 ? x.head : x.tail[i - 1].second;
    out.tail.emplace_back(-x.tail[i].first, checked_sub(0, before));
  }
  return out;
}

BSWord bs_a_power(std::int64_t n) { return BSWord{n, {}}; }

BSWord bs_t_power(std::int64_t n) {
  BSWord out;
  for (std::int64_t i = 0; i < abs64(n); ++i) out.tail.emplace_back(n > 0 ? 1 : -1, 0);
  return out;
}

namespace {

// Appends t^eps to an S-irreducible word, keeping it irreducible.
void s_push_t(const BSSpec& spec, BSWord& out, int eps) {
  std::int64_t& beta = trailing_ref(out);
  const auto [k, r] = euclid_divmod(beta, spec.divisor(eps));
  const std::int64_t moved = checked_mul(k, spec.divisor(-eps));
  if (r == 0 && !out.tail.empty() && out.tail.back().first == -eps) {
    out.tail.pop_back();
    std::int64_t& prev = trailing_ref(out);
    prev = checked_add(prev, moved);
    return;
  }
  beta = r;
  out.tail.emplace_back(eps, moved);
}

// Appends t^eps to a Britton-reduced word, keeping it Britton-reduced.
void britton_push_t(const BSSpec& spec, BSWord& out, int eps) {
  if (!out.tail.empty() && out.tail.back().first == -eps) {
    const std::int64_t n = out.tail.back().second;
    const std::int64_t d = spec.divisor(eps);
    if (n % d == 0) {
      out.tail.pop_back();
      std::int64_t& prev = trailing_ref(out);
      prev = checked_add(prev, checked_mul(n / d, spec.divisor(-eps)));
      return;
    }
  }
  out.tail.emplace_back(eps, 0);
}

template <class PushT>
BSWord fold(const BSWord& w, PushT push_t) {
  BSWord out;
  out.head = w.head;
  for (const auto& [eps, n] : w.tail) {
    push_t(out, eps);
    std::int64_t& tr = trailing_ref(out);
    tr = checked_add(tr, n);
  }
  return out;
}

}  // namespace

BSWord rewrite_s(const BSSpec& spec, const BSWord& w) {
  return fold(w, [&](BSWord& out, int eps) { s_push_t(spec, out, eps); });
}

BSWord nf_s(const BSSpec& spec, std::string_view w) { return rewrite_s(spec, parse_bs_word(w)); }

std::vector<SRedex> s_redexes(const BSSpec& spec, const BSWord& w, std::size_t max_per_run) {
  std::vector<SRedex> out;
  for (std::size_t i = 0; i < w.tail.size(); ++i) {
    const std::int64_t n = i == 0 ? w.head : w.tail[i - 1].second;
    const std::int64_t d = spec.divisor(w.tail[i].first);
    const std::int64_t sign = n < 0 ? -1 : 1;
    const std::int64_t len = abs64(n);
    std::vector<std::int64_t> sizes;
    for (std::int64_t s = 1; s <= len && static_cast<std::size_t>(s) <= max_per_run; ++s) sizes.push_back(s);
    if (len > static_cast<std::int64_t>(max_per_run)) sizes.push_back(len);
    for (std::int64_t s : sizes) {
      const std::int64_t m = sign * s;
      if (euclid_divmod(m, d).quot != 0) out.push_back(SRedex{i, m});
    }
    if (i + 1 < w.tail.size() && w.tail[i].second == 0 && w.tail[i].first == -w.tail[i + 1].first) {
      out.push_back(SRedex{i, 0});
    }
  }
  return out;
}

BSWord apply_redex(const BSSpec& spec, const BSWord& w, const SRedex& r) {
  BSWord out = w;
  const std::size_t i = r.t_index;
  if (i >= out.tail.size()) throw std::out_of_range("apply_redex: no such t-letter");
  std::int64_t& prev = i == 0 ? out.head : out.tail[i - 1].second;
  const int eps = out.tail[i].first;
  if (r.moved == 0) {
    if (i + 1 >= out.tail.size() || out.tail[i].second != 0 || out.tail[i + 1].first != -eps) {
      throw std::invalid_argument("apply_redex: no cancellation at this position");
    }
    prev = checked_add(prev, out.tail[i + 1].second);
    out.tail.erase(out.tail.begin() + static_cast<std::ptrdiff_t>(i),
                   out.tail.begin() + static_cast<std::ptrdiff_t>(i + 2));
    return out;
  }
  const auto [k, rem] = euclid_divmod(r.moved, spec.divisor(eps));
  if (k == 0) throw std::invalid_argument("apply_redex: rule needs a nonzero quotient");
  prev = checked_add(checked_sub(prev, r.moved), rem);
  out.tail[i].second = checked_add(out.tail[i].second, checked_mul(k, spec.divisor(-eps)));
  return out;
}

BSWord rewrite_s_random(const BSSpec& spec, BSWord w, std::mt19937_64& rng) {
  for (;;) {
    const auto redexes = s_redexes(spec, w);
    if (redexes.empty()) return w;
    std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
    w = apply_redex(spec, w, redexes[pick(rng)]);
  }
}

BSWord britton_reduce(const BSSpec& spec, const BSWord& w) {
  return fold(w, [&](BSWord& out, int eps) { britton_push_t(spec, out, eps); });
}

bool is_britton_reduced(const BSSpec& spec, const BSWord& w) {
  for (std::size_t i = 0; i + 1 < w.tail.size(); ++i) {
    const int e1 = w.tail[i].first, e2 = w.tail[i + 1].first;
    if (e1 == -e2 && w.tail[i].second % spec.divisor(e2) == 0) return false;
  }
  return true;
}

namespace {

bool boundary_pinch(const BSSpec& spec, const BSWord& w) {
  if (w.tail.size() < 2) return false;
  const int first = w.tail.front().first, last = w.tail.back().first;
  return last == -first && checked_add(w.tail.back().second, w.head) % spec.divisor(first) == 0;
}

}  // namespace

bool is_cyclically_britton_reduced(const BSSpec& spec, const BSWord& w) {
  return is_britton_reduced(spec, w) && !boundary_pinch(spec, w);
}

CyclicReduction cyclically_britton_reduce(const BSSpec& spec, const BSWord& w) {
  CyclicReduction out{britton_reduce(spec, w), BSWord{}};
  while (boundary_pinch(spec, out.reduced)) {
    const auto [eps, n] = out.reduced.tail.back();
    BSWord x;
    x.tail.emplace_back(eps, n);
    out.reduced = britton_reduce(spec, bs_concat(bs_concat(x, out.reduced), bs_inverse(x)));
    out.conjugator = britton_reduce(spec, bs_concat(x, out.conjugator));
  }
  return out;
}

std::vector<int> t_sequence(const BSWord& w) {
  std::vector<int> out;
  for (const auto& [e, n] : w.tail) out.push_back(e);
  return out;
}

AlphaBeta alpha_beta(const BSSpec& spec, const BSWord& x) {
  AlphaBeta ab{rewrite_s(spec, x), 0};
  std::int64_t& tr = trailing_ref(ab.alpha);
  ab.beta = tr;
  tr = 0;
  return ab;
}

bool has_fsqrt(std::int64_t p, std::int64_t q) {
  const BSSpec spec(p, q);
  return p + q != 0 && (p == 1 || (p % 2 != 0 && q % 2 != 0));
}

namespace {

BSWord power_of(const BSWord& u, std::size_t n) {
  BSWord out;
  for (std::size_t i = 0; i < n; ++i) out = bs_concat(out, u);
  return out;
}

}  // namespace

SqrtWitness infinite_sqrt_witness(const BSSpec& spec, std::size_t n) {
  const std::int64_t p = spec.p(), q = spec.q();
  if (has_fsqrt(p, q)) throw std::domain_error("square roots are finite");
  const auto nn = static_cast<std::int64_t>(n);
  if (p + q == 0) {
    BSWord x;
    x.tail.emplace_back(1, checked_mul(p, nn));
    return {x, bs_t_power(2)};
  }
  if (p % 2 == 0) {
    // u = a t^-1 a t commutes with a^p
    const BSWord u = parse_bs_word("aTat");
    const BSWord x = bs_concat(bs_concat(power_of(u, n), bs_a_power(p / 2)), bs_inverse(power_of(u, n)));
    return {x, bs_a_power(p)};
  }
  // p odd, q even: the even case for the presentation with t and t^-1 swapped
  const BSWord u = parse_bs_word("ataT");
  const BSWord x = bs_concat(bs_concat(power_of(u, n), bs_a_power(q / 2)), bs_inverse(power_of(u, n)));
  return {x, bs_a_power(q)};
}

std::set<BSWord> square_roots_bounded(const BSSpec& spec, const BSWord& g, std::size_t t_bound,
                                      std::int64_t a_bound) {
  const BSWord target = rewrite_s(spec, g);
  std::set<BSWord> roots;
  BSWord x;
  auto check = [&]() {
    if (rewrite_s(spec, bs_concat(x, x)) == target) roots.insert(rewrite_s(spec, x));
  };
  std::function<void()> extend = [&]() {
    check();
    if (x.tail.size() == t_bound) return;
    for (int eps : {1, -1}) {
      // skip t^-eps a^n t^eps pinches so that x stays Britton-reduced
      const bool may_pinch = !x.tail.empty() && x.tail.back().first == -eps;
      const std::int64_t before = x.tail.empty() ? 0 : x.tail.back().second;
      if (may_pinch && before % spec.divisor(eps) == 0) continue;
      for (std::int64_t n = -a_bound; n <= a_bound; ++n) {
        x.tail.emplace_back(eps, n);
        extend();
        x.tail.pop_back();
      }
    }
  };
  for (std::int64_t h = -a_bound; h <= a_bound; ++h) {
    x.head = h;
    extend();
  }
  return roots;
}

std::vector<BSPumped> pump_nf_family(const BSSpec& spec, const BSWord& u, const BSWord& w,
                                     const BSWord& v, std::size_t n_max) {
  const BSWord wn = rewrite_s(spec, w);
  if (wn.head == 0 && wn.tail.empty()) throw std::invalid_argument("pump_nf_family: w must be nontrivial");
  std::vector<BSPumped> out;
  BSWord acc = rewrite_s(spec, u);
  for (std::size_t n = 0; n <= n_max; ++n) {
    BSWord nf = rewrite_s(spec, bs_concat(acc, v));
    const auto runs = to_runs(nf);
    out.push_back(BSPumped{n, std::move(nf), exponent_of_periodicity_rle(runs)});
    if (n < n_max) acc = rewrite_s(spec, bs_concat(acc, wn));
  }
  return out;
}

Element bs_encode(const BSWord& w) {
  Element e;
  e.data.push_back(w.head);
  for (const auto& [eps, n] : w.tail) {
    e.data.push_back(eps);
    e.data.push_back(n);
  }
  return e;
}

BSWord bs_decode(const Element& e) {
  if (e.data.empty() || e.data.size() % 2 != 1) throw std::invalid_argument("BS element: malformed encoding");
  BSWord w;
  w.head = e.data[0];
  for (std::size_t i = 1; i + 1 < e.data.size(); i += 2) {
    w.tail.emplace_back(static_cast<int>(e.data[i]), e.data[i + 1]);
  }
  return w;
}

MonoidOracle bs_oracle(const BSSpec& spec) {
  MonoidOracle o;
  o.kind = "bs";
  o.description = {{"kind", "bs"}, {"p", spec.p()}, {"q", spec.q()}};
  o.identity = bs_encode(BSWord{});
  o.generators = {"a", "A", "t", "T"};
  for (const char* g : {"a", "A", "t", "T"}) o.generator_elements.push_back(bs_encode(parse_bs_word(g)));
  o.mul = [spec](const Element& x, const Element& y) {
    return bs_encode(rewrite_s(spec, bs_concat(bs_decode(x), bs_decode(y))));
  };
  o.nf = [](const Element& x) {
    const BSWord w = bs_decode(x);
    if (letter_length(w) > (std::size_t{1} << 24)) throw std::length_error("BS normal form too long to expand");
    GenWord out;
    for (char c : to_letters(w)) out.push_back(c == 'a' ? 0 : c == 'A' ? 1 : c == 't' ? 2 : 3);
    return out;
  };
  auto from_text = [spec](std::string_view s) { return bs_encode(rewrite_s(spec, parse_bs_word(s))); };
  o.encode = [](const Element& x) { return nlohmann::json(to_letters(bs_decode(x))); };
  o.decode = [from_text](const nlohmann::json& j) { return from_text(j.get<std::string>()); };
  o.parse = from_text;
  o.invert = [spec](const Element& x) { return bs_encode(rewrite_s(spec, bs_inverse(bs_decode(x)))); };
  const bool fsqrt = has_fsqrt(spec.p(), spec.q());
  if (fsqrt) {
    o.square_roots = [spec](const Element& g) {
      const BSWord w = bs_decode(g);
      std::int64_t a_bound = abs64(spec.q());
      a_bound = std::max(a_bound, checked_mul(2, abs64(w.head)));
      for (const auto& [eps, n] : w.tail) a_bound = std::max(a_bound, checked_mul(2, abs64(n)));
      std::vector<Element> out;
      for (const auto& r : square_roots_bounded(spec, w, w.t_length(), a_bound)) out.push_back(bs_encode(r));
      return out;
    };
  }
  o.finite_power_submonoid = [id = o.identity](const Element& x) { return x == id; };
  o.is_group = true;
  o.torsion_free = true;
  o.sqrt_of_identity_trivial = fsqrt;
  return o;
}

}  // namespace perex
