#include "perex/equations.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace perex {

namespace {

struct Occurrence {
  int pos = 0;
  int neg = 0;
  std::vector<std::size_t> eqs;  // one entry per occurrence
  int total() const { return pos + neg; }
};

std::map<std::string, Occurrence> occurrences(const QuadSystem& sys) {
  std::map<std::string, Occurrence> occ;
  for (const auto& x : sys.variables) occ[x];
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    for (const auto& t : sys.equations[i]) {
      if (!t.is_var) continue;
      auto it = occ.find(t.var);
      if (it == occ.end()) throw std::invalid_argument("undeclared variable '" + t.var + "'");
      (t.inverse ? it->second.neg : it->second.pos) += 1;
      it->second.eqs.push_back(i);
    }
  }
  return occ;
}

EqToken invert_token(const MonoidOracle& g, const EqToken& t) {
  if (t.is_var) return EqToken::variable(t.var, !t.inverse);
  return EqToken::constant(g.inverse(t.value));
}

Equation invert_equation(const MonoidOracle& g, const Equation& e) {
  Equation out;
  out.reserve(e.size());
  for (auto it = e.rbegin(); it != e.rend(); ++it) out.push_back(invert_token(g, *it));
  return out;
}

Equation rotate_at(const Equation& e, std::size_t i) {
  Equation out(e.begin() + static_cast<std::ptrdiff_t>(i), e.end());
  out.insert(out.end(), e.begin(), e.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

Equation free_reduce(const MonoidOracle& g, const Equation& e) {
  Equation st;
  for (const auto& t : e) {
    if (!t.is_var) {
      if (g.is_identity(t.value)) continue;
      if (!st.empty() && !st.back().is_var) {
        Element m = g.mul(st.back().value, t.value);
        st.pop_back();
        if (!g.is_identity(m)) st.push_back(EqToken::constant(std::move(m)));
        continue;
      }
      st.push_back(t);
      continue;
    }
    if (!st.empty() && st.back().is_var && st.back().var == t.var && st.back().inverse != t.inverse) {
      st.pop_back();
      continue;
    }
    st.push_back(t);
  }
  return st;
}

Equation cyclic_reduce(const MonoidOracle& g, const Equation& e) {
  Equation w = free_reduce(g, e);
  while (w.size() >= 2) {
    const auto& f = w.front();
    const auto& b = w.back();
    if (!f.is_var && !b.is_var) {
      w = free_reduce(g, rotate_at(w, w.size() - 1));
    } else if (f.is_var && b.is_var && f.var == b.var && f.inverse != b.inverse) {
      w = free_reduce(g, Equation(w.begin() + 1, w.end() - 1));
    } else {
      break;
    }
  }
  return w;
}

std::size_t find_var(const Equation& e, const std::string& x, std::size_t from = 0) {
  for (std::size_t i = from; i < e.size(); ++i) {
    if (e[i].is_var && e[i].var == x) return i;
  }
  throw std::logic_error("variable '" + x + "' not found");
}

/// Replaces every occurrence of x by x^-1.
Equation flip_var(const Equation& e, const std::string& x) {
  Equation out = e;
  for (auto& t : out) {
    if (t.is_var && t.var == x) t.inverse = !t.inverse;
  }
  return out;
}

/// mu of a word under the (singleton) targets.
Element mu_word(const QuadSystem& sys, const Equation& e) {
  const auto& h = sys.constraint->h;
  Element acc = h.identity;
  for (const auto& t : e) {
    Element m = t.is_var ? sys.target(t.var) : sys.constraint->mu(*sys.group, t.value);
    if (t.is_var && t.inverse) m = h.inverse(m);
    acc = h.mul(acc, m);
  }
  return acc;
}

QuadSystem drop_variable(const QuadSystem& sys, const std::string& x) {
  QuadSystem out = sys;
  out.variables.erase(std::remove(out.variables.begin(), out.variables.end(), x), out.variables.end());
  out.targets.erase(x);
  return out;
}

QuadSystem normalized_or_throw(const QuadSystem& sys) {
  auto n = normalize(sys);
  if (!n) throw std::invalid_argument("system has a constant equation different from 1");
  return *n;
}

void require_split(const QuadSystem& sys) {
  if (!sys.is_split()) throw std::invalid_argument("constraint targets must be singletons");
}

/// Case-5 shape W = X U X^-1 V of a single equation in which x occurs once
/// with each sign.
Classification case5_shape(const QuadSystem& sys, const std::string& x) {
  const Equation& w = sys.equations.at(0);
  std::size_t i = find_var(w, x);
  if (w[i].inverse) i = find_var(w, x, i + 1);
  const Equation r = rotate_at(w, i);
  const std::size_t j = find_var(r, x, 1);
  Classification c;
  c.case_id = 5;
  c.x = x;
  c.u.assign(r.begin() + 1, r.begin() + static_cast<std::ptrdiff_t>(j));
  c.v.assign(r.begin() + static_cast<std::ptrdiff_t>(j) + 1, r.end());
  return c;
}

/// W rotated (and inverted if needed) to U' X; returns U'.
Equation isolate_at_end(const MonoidOracle& g, const Equation& w, const std::string& x) {
  Equation e = w;
  if (e[find_var(e, x)].inverse) e = invert_equation(g, e);
  const std::size_t i = find_var(e, x);
  Equation r = rotate_at(e, i + 1);
  r.pop_back();
  return r;
}

std::vector<TemplatePart> invert_template(const MonoidOracle& g, const std::vector<TemplatePart>& t) {
  std::vector<TemplatePart> out;
  for (auto it = t.rbegin(); it != t.rend(); ++it) out.push_back(TemplatePart{g.inverse(it->value), it->multiplicity});
  return out;
}

Element family_value(const MonoidOracle& g, const std::vector<TemplatePart>& t, std::int64_t n) {
  Element acc = g.identity;
  for (const auto& p : t) {
    acc = g.mul(acc, p.multiplicity == 0 ? p.value : g.power(p.value, static_cast<std::size_t>(p.multiplicity * n)));
  }
  return acc;
}

std::string show(const MonoidOracle& g, const Element& x) {
  const std::string s = g.nf_string(x);
  return s.empty() ? "1" : s;
}

std::string token_to_string(const QuadSystem& sys, const EqToken& t) {
  if (t.is_var) return t.inverse ? t.var + "^-1" : t.var;
  return "[" + show(*sys.group, t.value) + "]";
}

}  // namespace

Element Constraint::mu(const MonoidOracle& group, const Element& g) const {
  Element acc = h.identity;
  for (int letter : group.nf(g)) acc = h.mul(acc, mu_gen.at(static_cast<std::size_t>(letter)));
  return acc;
}

std::size_t Constraint::order(const Element& x) const {
  Element acc = x;
  for (std::size_t k = 1; k <= 1U << 20; ++k) {
    if (h.is_identity(acc)) return k;
    acc = h.mul(acc, x);
  }
  throw std::logic_error("constraint: element of unbounded order");
}

std::shared_ptr<const Constraint> trivial_constraint(const MonoidOracle& group) {
  auto c = std::make_shared<Constraint>();
  c->h = finite_monoid_oracle({{0}}, {"1"});
  c->mu_gen.assign(group.generators.size(), c->h.identity);
  return c;
}

std::set<Element> QuadSystem::target_set(const std::string& x) const {
  auto it = targets.find(x);
  if (it != targets.end()) return it->second;
  std::set<Element> all;
  for (const auto& [e, w] : ball(constraint->h, constraint->h.generators.size() + 1)) all.insert(e);
  return all;
}

bool QuadSystem::is_split() const {
  return std::all_of(variables.begin(), variables.end(), [&](const std::string& x) { return target_set(x).size() == 1; });
}

Element QuadSystem::target(const std::string& x) const {
  auto s = target_set(x);
  if (s.size() != 1) throw std::invalid_argument("target of '" + x + "' is not a singleton");
  return *s.begin();
}

Element evaluate(const QuadSystem& sys, const Equation& e, const Assignment& sigma) {
  const auto& g = *sys.group;
  Element acc = g.identity;
  for (const auto& t : e) {
    if (!t.is_var) {
      acc = g.mul(acc, t.value);
      continue;
    }
    auto it = sigma.find(t.var);
    if (it == sigma.end()) throw std::invalid_argument("assignment misses variable '" + t.var + "'");
    acc = g.mul(acc, t.inverse ? g.inverse(it->second) : it->second);
  }
  return acc;
}

bool verify(const QuadSystem& sys, const Assignment& sigma) {
  for (const auto& x : sys.variables) {
    if (!sigma.contains(x)) throw std::invalid_argument("assignment misses variable '" + x + "'");
  }
  for (const auto& e : sys.equations) {
    if (!sys.group->is_identity(evaluate(sys, e, sigma))) return false;
  }
  for (const auto& x : sys.variables) {
    if (!sys.target_set(x).contains(sys.constraint->mu(*sys.group, sigma.at(x)))) return false;
  }
  return true;
}

void check_quadratic(const QuadSystem& sys) {
  for (const auto& [x, o] : occurrences(sys)) {
    if (o.total() > 2) {
      throw std::invalid_argument("system is not quadratic: '" + x + "' occurs " + std::to_string(o.total()) + " times");
    }
  }
}

std::optional<QuadSystem> normalize(const QuadSystem& sys) {
  QuadSystem out = sys;
  out.equations.clear();
  for (const auto& e : sys.equations) {
    Equation w = cyclic_reduce(*sys.group, e);
    if (w.empty()) continue;
    if (std::none_of(w.begin(), w.end(), [](const EqToken& t) { return t.is_var; })) return std::nullopt;
    out.equations.push_back(std::move(w));
  }
  return out;
}

std::vector<QuadSystem> split_targets(const QuadSystem& sys, std::size_t cap) {
  std::vector<QuadSystem> out{sys};
  for (const auto& x : sys.variables) {
    const auto s = sys.target_set(x);
    if (out.size() * s.size() > cap) {
      throw std::length_error("constraint splitting exceeds " + std::to_string(cap) + " branches");
    }
    std::vector<QuadSystem> next;
    for (const auto& b : out) {
      for (const auto& h : s) {
        QuadSystem c = b;
        c.targets[x] = {h};
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

Classification classify(const QuadSystem& input) {
  check_quadratic(input);
  const QuadSystem sys = normalized_or_throw(input);
  const auto occ = occurrences(sys);
  Classification c;
  for (const auto& x : sys.variables) {
    if (occ.at(x).total() == 0) {
      c.case_id = 1;
      c.x = x;
      return c;
    }
  }
  for (const auto& x : sys.variables) {
    const auto& o = occ.at(x);
    if (o.total() == 2 && o.eqs[0] != o.eqs[1]) {
      c.case_id = 2;
      c.x = x;
      c.eq_u = o.eqs[0];
      c.eq_v = o.eqs[1];
      return c;
    }
  }
  if (sys.equations.size() >= 2) {
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      bool independent = true;
      for (const auto& t : sys.equations[i]) {
        if (!t.is_var) continue;
        for (std::size_t e : occ.at(t.var).eqs) independent = independent && e == i;
      }
      if (independent) {
        c.case_id = 3;
        c.eq_u = i;
        return c;
      }
    }
  }
  if (sys.equations.empty()) throw std::invalid_argument("classify: system has no variables");
  for (const auto& x : sys.variables) {
    if (occ.at(x).total() == 1) {
      c.case_id = 4;
      c.x = x;
      return c;
    }
  }
  for (const auto& x : sys.variables) {
    if (occ.at(x).pos == 1 && occ.at(x).neg == 1) return case5_shape(sys, x);
  }
  if (sys.variables.size() >= 2) {
    c.case_id = 6;
    c.x = sys.variables[0];
    c.y = sys.variables[1];
    return c;
  }
  c.case_id = 7;
  c.x = sys.variables[0];
  Equation w = sys.equations[0];
  if (occ.at(c.x).neg == 2) w = invert_equation(*sys.group, w);
  w = rotate_at(w, find_var(w, c.x));
  const std::size_t j = find_var(w, c.x, 1);
  const auto& g = *sys.group;
  c.u_const = g.identity;
  c.v_const = g.identity;
  for (std::size_t i = 1; i < j; ++i) c.u_const = g.mul(c.u_const, w[i].value);
  for (std::size_t i = j + 1; i < w.size(); ++i) c.v_const = g.mul(c.v_const, w[i].value);
  return c;
}

Reduction reduce(const QuadSystem& input, const Classification& c) {
  const QuadSystem sys = normalized_or_throw(input);
  const auto& g = *sys.group;
  Reduction r;
  if (c.case_id == 2) {
    require_split(sys);
    const std::string x = c.x;
    Equation u = sys.equations.at(c.eq_u);
    Equation v = sys.equations.at(c.eq_v);
    const Equation u1 = isolate_at_end(g, u, x);
    if (!v[find_var(v, x)].inverse) v = invert_equation(g, v);
    Equation v1 = rotate_at(v, find_var(v, x));
    v1.erase(v1.begin());
    QuadSystem s = drop_variable(sys, x);
    s.equations.clear();
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      if (i != c.eq_u && i != c.eq_v) s.equations.push_back(sys.equations[i]);
    }
    Equation w = u1;
    w.insert(w.end(), v1.begin(), v1.end());
    s.equations.push_back(cyclic_reduce(g, w));
    r.feasible = sys.constraint->h.inverse(mu_word(sys, u1)) == sys.target(x);
    auto group = sys.group;
    auto snapshot = std::make_shared<const QuadSystem>(s);
    r.back = [group, snapshot, u1, x](const std::vector<Assignment>& sols) {
      Assignment a = sols.at(0);
      a[x] = group->inverse(evaluate(*snapshot, u1, a));
      return a;
    };
    r.forward = [x](const Assignment& a) {
      Assignment b = a;
      b.erase(x);
      return std::vector<Assignment>{b};
    };
    r.systems.push_back(std::move(s));
    r.description = "eliminate " + x + " via " + x + " = (" + equation_to_string(sys, u1) + ")^-1";
    return r;
  }
  if (c.case_id == 3) {
    QuadSystem a = sys;
    QuadSystem b = sys;
    a.equations = {sys.equations.at(c.eq_u)};
    b.equations.clear();
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      if (i != c.eq_u) b.equations.push_back(sys.equations[i]);
    }
    a.variables.clear();
    b.variables.clear();
    a.targets.clear();
    b.targets.clear();
    std::set<std::string> in_a;
    for (const auto& t : a.equations[0]) {
      if (t.is_var) in_a.insert(t.var);
    }
    for (const auto& x : sys.variables) {
      auto& dst = in_a.contains(x) ? a : b;
      dst.variables.push_back(x);
      if (sys.targets.contains(x)) dst.targets[x] = sys.targets.at(x);
    }
    r.back = [](const std::vector<Assignment>& sols) {
      Assignment out = sols.at(0);
      out.insert(sols.at(1).begin(), sols.at(1).end());
      return out;
    };
    r.forward = [in_a](const Assignment& s) {
      Assignment x, y;
      for (const auto& [k, v] : s) (in_a.contains(k) ? x : y)[k] = v;
      return std::vector<Assignment>{x, y};
    };
    r.description = "split off equation " + std::to_string(c.eq_u);
    r.systems = {std::move(a), std::move(b)};
    return r;
  }
  if (c.case_id == 6) {
    require_split(sys);
    const auto occ = occurrences(sys);
    const std::string x = c.x;
    const std::string y = c.y;
    const bool flip_x = occ.at(x).neg == 2;
    const bool flip_y = occ.at(y).neg == 2;
    Equation w = sys.equations.at(0);
    QuadSystem s1 = sys;
    const auto& h = sys.constraint->h;
    if (flip_x) {
      w = flip_var(w, x);
      s1.targets[x] = {h.inverse(sys.target(x))};
    }
    if (flip_y) {
      w = flip_var(w, y);
      s1.targets[y] = {h.inverse(sys.target(y))};
    }
    // Start at an occurrence of x whose next occurrence of x or y is y.
    std::size_t start = find_var(w, x);
    auto next_is_y = [&](std::size_t i) {
      for (std::size_t k = 1; k < w.size(); ++k) {
        const auto& t = w[(i + k) % w.size()];
        if (t.is_var && (t.var == x || t.var == y)) return t.var == y;
      }
      return false;
    };
    if (!next_is_y(start)) start = find_var(w, x, start + 1);
    w = rotate_at(w, start);
    const std::size_t j = find_var(w, y);
    const Equation u(w.begin() + 1, w.begin() + static_cast<std::ptrdiff_t>(j));
    Equation tau_x{EqToken::variable(x), EqToken::variable(y, true)};
    for (const auto& t : invert_equation(g, u)) tau_x.push_back(t);
    Equation w2;
    for (const auto& t : w) {
      if (t.is_var && t.var == x) {
        w2.insert(w2.end(), tau_x.begin(), tau_x.end());
      } else {
        w2.push_back(t);
      }
    }
    s1.equations = {w2};
    const Element mu_u = mu_word(s1, u);
    QuadSystem s2 = s1;
    s2.targets[x] = {h.mul(h.mul(s1.target(x), mu_u), s1.target(y))};
    s2.equations = {cyclic_reduce(g, w2)};
    auto group = sys.group;
    auto snap = std::make_shared<const QuadSystem>(s2);
    r.back = [group, snap, u, x, y, flip_x, flip_y](const std::vector<Assignment>& sols) {
      Assignment a = sols.at(0);
      a[x] = group->mul(group->mul(a.at(x), group->inverse(a.at(y))), group->inverse(evaluate(*snap, u, a)));
      if (flip_x) a[x] = group->inverse(a[x]);
      if (flip_y) a[y] = group->inverse(a[y]);
      return a;
    };
    r.forward = [group, snap, u, x, y, flip_x, flip_y](const Assignment& s) {
      Assignment a = s;
      if (flip_x) a[x] = group->inverse(a[x]);
      if (flip_y) a[y] = group->inverse(a[y]);
      a[x] = group->mul(group->mul(a.at(x), evaluate(*snap, u, a)), a.at(y));
      return std::vector<Assignment>{a};
    };
    r.description = "substitute " + x + " -> " + equation_to_string(sys, tau_x) + (flip_x ? " after inverting " + x : "") +
                    (flip_y ? " after inverting " + y : "");
    r.systems.push_back(std::move(s2));
    return r;
  }
  throw std::invalid_argument("reduce: case " + std::to_string(c.case_id) + " has no reduction");
}

ConstraintFamily constraint_family(const MonoidOracle& group, const Constraint& mu, const Element& h,
                                   std::size_t budget) {
  std::optional<Element> g0;
  for (const auto& [e, w] : ball(group, budget)) {
    if (mu.mu(group, e) == h) {
      g0 = e;
      break;
    }
  }
  if (!g0) throw std::runtime_error("inconclusive: no element with the target image within radius " + std::to_string(budget));
  for (const auto& g : group.generator_elements) {
    Element k = group.power(g, mu.order(mu.mu(group, g)));
    if (!group.is_identity(k)) return ConstraintFamily{*g0, k};
  }
  throw std::runtime_error("inconclusive: no kernel element among generator powers");
}

Element constraint_element_with_exp(const MonoidOracle& group, const Constraint& mu, const Element& h, std::size_t n,
                                    std::size_t budget) {
  const auto fam = constraint_family(group, mu, h, budget);
  Element x = fam.g0;
  const std::size_t cap = 8 * n + 64;
  for (std::size_t m = 0; m <= cap; ++m) {
    if (group.nf_exp(x) >= n) return x;
    x = group.mul(x, fam.k);
  }
  throw std::runtime_error("inconclusive: exponent " + std::to_string(n) + " not reached within " +
                           std::to_string(cap) + " kernel steps");
}

Assignment PumpWitness::instantiate(const MonoidOracle& group, std::size_t n, std::int64_t max_n) const {
  for (std::int64_t k = 0; k <= max_n; ++k) {
    Assignment a = at(k);
    if (group.nf_exp(a.at(variable)) >= n) return a;
  }
  throw std::runtime_error("witness: exponent " + std::to_string(n) + " not reached for N <= " + std::to_string(max_n));
}

std::optional<Assignment> find_base_solution(const QuadSystem& input, std::size_t budget, std::size_t node_cap) {
  auto norm = normalize(input);
  if (!norm) return std::nullopt;
  const QuadSystem& sys = *norm;
  const auto& g = *sys.group;
  const auto b = ball(g, budget);
  const std::size_t nv = sys.variables.size();
  std::vector<std::vector<Element>> cand(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto ts = sys.target_set(sys.variables[i]);
    for (const auto& [e, w] : b) {
      if (ts.contains(sys.constraint->mu(g, e))) cand[i].push_back(e);
    }
    if (cand[i].empty()) return std::nullopt;
  }
  // Equations checked once their last variable is assigned.
  std::vector<std::vector<std::size_t>> check_at(nv);
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    std::size_t last = 0;
    for (const auto& t : sys.equations[e]) {
      if (!t.is_var) continue;
      const auto pos = static_cast<std::size_t>(
          std::find(sys.variables.begin(), sys.variables.end(), t.var) - sys.variables.begin());
      last = std::max(last, pos);
    }
    check_at[last].push_back(e);
  }
  Assignment a;
  std::size_t nodes = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == nv) return true;
    for (const auto& e : cand[i]) {
      if (++nodes > node_cap) return false;
      a[sys.variables[i]] = e;
      bool ok = true;
      for (std::size_t q : check_at[i]) {
        if (!g.is_identity(evaluate(sys, sys.equations[q], a))) {
          ok = false;
          break;
        }
      }
      if (ok && go(i + 1)) return true;
      if (nodes > node_cap) return false;
    }
    a.erase(sys.variables[i]);
    return false;
  };
  if (go(0)) return a;
  return std::nullopt;
}

PumpWitness pump_family(const QuadSystem& input, const Assignment& sigma0, const Classification& c) {
  const QuadSystem sys = normalized_or_throw(input);
  require_split(sys);
  auto group = sys.group;
  const auto& g = *group;
  PumpWitness w;
  w.origin_case = c.case_id;
  w.path = {c.case_id};
  auto with_family = [&](const std::string& x, const std::vector<TemplatePart>& tmpl, Assignment base) {
    w.variable = x;
    w.tmpl = tmpl;
    w.at = [group, x, tmpl, base](std::int64_t n) {
      Assignment a = base;
      a[x] = family_value(*group, tmpl, n);
      return a;
    };
  };
  switch (c.case_id) {
    case 1: {
      const auto fam = constraint_family(g, *sys.constraint, sys.target(c.x));
      with_family(c.x, {{fam.g0, 0}, {fam.k, 1}}, sigma0);
      return w;
    }
    case 4: {
      const Equation& eq = sys.equations.at(0);
      std::string y;
      for (const auto& t : eq) {
        if (t.is_var && t.var != c.x) {
          y = t.var;
          break;
        }
      }
      if (y.empty()) throw std::domain_error("finite case: '" + c.x + "' is the only variable");
      const Equation u1 = isolate_at_end(g, eq, c.x);
      if (sys.constraint->h.inverse(mu_word(sys, u1)) != sys.target(c.x)) {
        throw std::domain_error("no solutions: the constraint on '" + c.x + "' cannot hold");
      }
      Assignment base;
      for (const auto& z : sys.variables) {
        if (z == c.x || z == y) continue;
        auto it = sigma0.find(z);
        if (it != sigma0.end() && sys.constraint->mu(g, it->second) == sys.target(z)) {
          base[z] = it->second;
        } else {
          base[z] = constraint_family(g, *sys.constraint, sys.target(z)).g0;
        }
      }
      const auto fam = constraint_family(g, *sys.constraint, sys.target(y));
      const std::vector<TemplatePart> tmpl{{fam.g0, 0}, {fam.k, 1}};
      auto snap = std::make_shared<const QuadSystem>(sys);
      const std::string x = c.x;
      w.variable = y;
      w.tmpl = tmpl;
      w.at = [group, snap, x, y, tmpl, base, u1](std::int64_t n) {
        Assignment a = base;
        a[y] = family_value(*group, tmpl, n);
        a[x] = group->inverse(evaluate(*snap, u1, a));
        return a;
      };
      return w;
    }
    case 5: {
      if (!verify(sys, sigma0)) throw std::invalid_argument("pump: base solution does not verify");
      const Element u0 = evaluate(sys, c.u, sigma0);
      if (g.is_identity(u0)) {
        const auto fam = constraint_family(g, *sys.constraint, sys.target(c.x));
        with_family(c.x, {{fam.g0, 0}, {fam.k, 1}}, sigma0);
      } else {
        const auto k = static_cast<std::int64_t>(sys.constraint->order(sys.constraint->mu(g, u0)));
        with_family(c.x, {{sigma0.at(c.x), 0}, {u0, k}}, sigma0);
      }
      return w;
    }
    case 6: {
      if (!verify(sys, sigma0)) throw std::invalid_argument("pump: base solution does not verify");
      const Reduction r = reduce(sys, c);
      const QuadSystem& s2 = r.systems.at(0);
      const Assignment sigma1 = r.forward(sigma0).at(0);
      const QuadSystem s2n = normalized_or_throw(s2);
      Classification inner_case;
      if (occurrences(s2n).at(c.y).total() == 0) {
        inner_case.case_id = 1;
        inner_case.x = c.y;
      } else {
        inner_case = case5_shape(s2n, c.y);
      }
      PumpWitness inner = pump_family(s2n, sigma1, inner_case);
      const bool flip_y = occurrences(sys).at(c.y).neg == 2;
      w.variable = c.y;
      w.origin_case = inner.origin_case;
      w.path.insert(w.path.end(), inner.path.begin(), inner.path.end());
      w.tmpl = flip_y ? invert_template(g, inner.tmpl) : inner.tmpl;
      auto back = r.back;
      auto at = inner.at;
      w.at = [back, at](std::int64_t n) { return back({at(n)}); };
      return w;
    }
    case 7:
      throw std::domain_error("finite case");
    default:
      throw std::invalid_argument("pump: case " + std::to_string(c.case_id) + " is handled by reduction");
  }
}

std::pair<Assignment, PumpWitness> pump(const QuadSystem& sys, const Assignment& sigma0, const Classification& c,
                                        std::size_t n) {
  PumpWitness w = pump_family(sys, sigma0, c);
  Assignment a = w.instantiate(*sys.group, n);
  if (!verify(sys, a)) throw std::logic_error("pump: instantiated assignment does not verify");
  return {std::move(a), std::move(w)};
}

std::vector<Assignment> solve_case7(const QuadSystem& input, const Classification& c) {
  const QuadSystem sys = normalized_or_throw(input);
  const auto& g = *sys.group;
  if (c.case_id != 7) throw std::invalid_argument("solve_case7: not case 7");
  if (!g.has_square_roots()) throw std::logic_error("group oracle has no square roots");
  const Element target = g.mul(g.inverse(c.v_const), c.u_const);
  const auto ts = sys.target_set(c.x);
  std::set<Element> xs;
  for (const auto& s : g.square_roots(target)) {
    Element x = g.mul(s, g.inverse(c.u_const));
    if (ts.contains(sys.constraint->mu(g, x))) xs.insert(x);
  }
  std::vector<Assignment> out;
  for (const auto& x : xs) out.push_back(Assignment{{c.x, x}});
  return out;
}

namespace {

struct Analyzer {
  std::size_t budget;
  std::vector<std::string>& log;

  static Report finite(std::vector<Assignment> sols) {
    Report r;
    r.verdict = Verdict::Finite;
    r.solutions = std::move(sols);
    return r;
  }
  static Report inconclusive(std::string why) {
    Report r;
    r.verdict = Verdict::Inconclusive;
    r.reason = std::move(why);
    return r;
  }
  static Report infinite(PumpWitness w) {
    Report r;
    r.verdict = Verdict::Infinite;
    r.witness = std::move(w);
    return r;
  }

  /// A solution when one is known to exist; nullopt with `none` set when the
  /// system has none.
  std::optional<Assignment> some_solution(const Report& r, bool& none) {
    none = false;
    if (r.verdict == Verdict::Infinite) return r.witness->at(0);
    if (r.verdict == Verdict::Finite) {
      if (r.solutions.empty()) {
        none = true;
        return std::nullopt;
      }
      return r.solutions.front();
    }
    return std::nullopt;
  }

  Report run(const QuadSystem& input, const std::string& indent) {
    auto norm = normalize(input);
    if (!norm) {
      log.push_back(indent + "constant equation different from 1: no solutions");
      return finite({});
    }
    const QuadSystem& sys = *norm;
    if (sys.variables.empty()) {
      log.push_back(indent + "no variables: the unique solution is empty");
      return finite({Assignment{}});
    }
    const Classification c = classify(sys);
    const auto& g = *sys.group;
    try {
      switch (c.case_id) {
        case 1: {
          log.push_back(indent + "case 1: " + c.x + " does not occur");
          const QuadSystem rest = drop_variable(sys, c.x);
          Report rr = run(rest, indent + "  ");
          bool none = false;
          auto base = some_solution(rr, none);
          if (none) return finite({});
          if (!base) base = find_base_solution(rest, budget);
          if (!base) return inconclusive("no base solution within radius " + std::to_string(budget));
          return infinite(pump_family(sys, *base, c));
        }
        case 2: {
          const Reduction red = reduce(sys, c);
          log.push_back(indent + "case 2: " + red.description);
          if (!red.feasible) {
            log.push_back(indent + "constraint on " + c.x + " fails: no solutions");
            return finite({});
          }
          Report inner = run(red.systems[0], indent + "  ");
          return lift(std::move(inner), 2, red.back);
        }
        case 3: {
          const Reduction red = reduce(sys, c);
          log.push_back(indent + "case 3: " + red.description);
          Report a = run(red.systems[0], indent + "  ");
          Report b = run(red.systems[1], indent + "  ");
          bool none_a = false;
          bool none_b = false;
          auto sa = some_solution(a, none_a);
          auto sb = some_solution(b, none_b);
          if (none_a || none_b) return finite({});
          auto back = red.back;
          if (a.verdict == Verdict::Infinite && sb) {
            auto w = *a.witness;
            auto at = w.at;
            auto fixed = *sb;
            w.at = [back, at, fixed](std::int64_t n) { return back({at(n), fixed}); };
            w.path.insert(w.path.begin(), 3);
            return infinite(std::move(w));
          }
          if (b.verdict == Verdict::Infinite && sa) {
            auto w = *b.witness;
            auto at = w.at;
            auto fixed = *sa;
            w.at = [back, at, fixed](std::int64_t n) { return back({fixed, at(n)}); };
            w.path.insert(w.path.begin(), 3);
            return infinite(std::move(w));
          }
          if (a.verdict == Verdict::Finite && b.verdict == Verdict::Finite) {
            std::vector<Assignment> out;
            for (const auto& x : a.solutions) {
              for (const auto& y : b.solutions) out.push_back(back({x, y}));
            }
            return finite(std::move(out));
          }
          return inconclusive(a.verdict == Verdict::Inconclusive ? a.reason : b.reason);
        }
        case 4: {
          log.push_back(indent + "case 4: " + c.x + " occurs once");
          const Equation u1 = isolate_at_end(g, sys.equations[0], c.x);
          if (sys.constraint->h.inverse(mu_word(sys, u1)) != sys.target(c.x)) {
            log.push_back(indent + "constraint on " + c.x + " fails: no solutions");
            return finite({});
          }
          if (sys.variables.size() == 1) {
            return finite({Assignment{{c.x, g.inverse(evaluate(sys, u1, {}))}}});
          }
          return infinite(pump_family(sys, {}, c));
        }
        case 5:
        case 6: {
          log.push_back(indent + "case " + std::to_string(c.case_id) + ": " +
                        (c.case_id == 5 ? c.x + " occurs with both signs"
                                        : c.x + " and " + c.y + " occur twice with equal signs"));
          auto base = find_base_solution(sys, budget);
          if (!base) return inconclusive("no base solution within radius " + std::to_string(budget));
          log.push_back(indent + "base solution found");
          return infinite(pump_family(sys, *base, c));
        }
        case 7: {
          log.push_back(indent + "case 7: W = " + c.x + " u " + c.x + " v with u = " + show(g, c.u_const) +
                        ", v = " + show(g, c.v_const));
          if (!g.has_square_roots()) return inconclusive("group oracle has no square roots");
          return finite(solve_case7(sys, c));
        }
        default:
          break;
      }
    } catch (const std::runtime_error& e) {
      return inconclusive(e.what());
    }
    throw std::logic_error("analyze: unclassified system");
  }

  static Report lift(Report inner, int case_id,
                     const std::function<Assignment(const std::vector<Assignment>&)>& back) {
    if (inner.verdict == Verdict::Infinite) {
      auto at = inner.witness->at;
      inner.witness->at = [back, at](std::int64_t n) { return back({at(n)}); };
      inner.witness->path.insert(inner.witness->path.begin(), case_id);
    } else if (inner.verdict == Verdict::Finite) {
      for (auto& s : inner.solutions) s = back({s});
    }
    return inner;
  }
};

}  // namespace

Report analyze(const QuadSystem& sys, std::size_t budget) {
  if (!sys.group->is_group) throw std::invalid_argument("analyze: the oracle is not a group");
  check_quadratic(sys);
  Report out;
  std::vector<QuadSystem> branches;
  try {
    branches = split_targets(sys);
  } catch (const std::length_error& e) {
    out.reason = e.what();
    return out;
  }
  std::vector<Report> results;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    std::vector<std::string> log;
    std::string head = "branch " + std::to_string(i);
    for (const auto& x : branches[i].variables) {
      head += " " + x + ":" + branches[i].constraint->h.encode(*branches[i].targets.at(x).begin()).dump();
    }
    out.transcript.push_back(head);
    Analyzer an{budget, log};
    results.push_back(an.run(branches[i], "  "));
    out.transcript.insert(out.transcript.end(), log.begin(), log.end());
  }
  for (auto& r : results) {
    if (r.verdict == Verdict::Infinite) {
      out.verdict = Verdict::Infinite;
      out.witness = std::move(r.witness);
      return out;
    }
  }
  for (auto& r : results) {
    if (r.verdict == Verdict::Inconclusive) {
      out.verdict = Verdict::Inconclusive;
      out.reason = r.reason;
      return out;
    }
  }
  std::set<Assignment> all;
  for (auto& r : results) all.insert(r.solutions.begin(), r.solutions.end());
  out.verdict = Verdict::Finite;
  out.solutions.assign(all.begin(), all.end());
  return out;
}

std::string equation_to_string(const QuadSystem& sys, const Equation& e) {
  if (e.empty()) return "1";
  std::string s;
  for (const auto& t : e) {
    if (!s.empty()) s += ' ';
    s += token_to_string(sys, t);
  }
  return s;
}

nlohmann::json assignment_to_json(const QuadSystem& sys, const Assignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [x, v] : a) {
    j[x] = {{"nf", show(*sys.group, v)}, {"element", sys.group->encode(v)}};
  }
  return j;
}

namespace {

EqToken parse_token(const MonoidOracle& g, const std::set<std::string>& vars, const nlohmann::json& t) {
  if (t.is_object()) return EqToken::constant(g.decode(t.at("const")));
  const auto s = t.get<std::string>();
  const bool inv = s.size() > 3 && s.ends_with("^-1");
  if (s.starts_with("g:")) {
    const std::string text = s.substr(2);
    try {
      return EqToken::constant(g.parse(text));
    } catch (const std::exception&) {
      if (!inv) throw;
      return EqToken::constant(g.inverse(g.parse(text.substr(0, text.size() - 3))));
    }
  }
  const std::string name = inv ? s.substr(0, s.size() - 3) : s;
  if (!vars.contains(name)) throw std::invalid_argument("unknown variable '" + name + "'");
  return EqToken::variable(name, inv);
}

}  // namespace

QuadSystem quad_system_from_json(const nlohmann::json& j) {
  QuadSystem sys;
  sys.group = std::make_shared<const MonoidOracle>(oracle_from_json(j.at("group")));
  if (!sys.group->is_group) throw std::invalid_argument("equations: the oracle is not a group");
  const auto& g = *sys.group;
  sys.variables = j.at("variables").get<std::vector<std::string>>();
  std::set<std::string> vars;
  for (const auto& x : sys.variables) {
    if (x.empty() || x.starts_with("g:") || x.find('^') != std::string::npos) {
      throw std::invalid_argument("invalid variable name '" + x + "'");
    }
    if (!vars.insert(x).second) throw std::invalid_argument("duplicate variable '" + x + "'");
  }
  for (const auto& e : j.at("equations")) {
    Equation eq;
    if (e.is_string()) {
      std::istringstream in(e.get<std::string>());
      std::string tok;
      while (in >> tok) eq.push_back(parse_token(g, vars, tok));
    } else {
      for (const auto& t : e) eq.push_back(parse_token(g, vars, t));
    }
    sys.equations.push_back(std::move(eq));
  }
  if (!j.contains("constraint")) {
    sys.constraint = trivial_constraint(g);
    return sys;
  }
  const auto& cj = j.at("constraint");
  auto c = std::make_shared<Constraint>();
  if (cj.contains("h")) {
    c->h = oracle_from_json(cj.at("h"));
  } else if (cj.contains("table")) {
    std::vector<std::string> names;
    if (cj.contains("names")) names = cj.at("names").get<std::vector<std::string>>();
    c->h = finite_monoid_oracle(cj.at("table").get<std::vector<std::vector<int>>>(), names);
  } else if (cj.contains("cyclic")) {
    c->h = cyclic_group_oracle(cj.at("cyclic").get<int>());
  } else {
    c->h = finite_monoid_oracle({{0}}, {"1"});
  }
  if (c->h.kind != "finite" || !c->h.is_group) throw std::invalid_argument("constraint: H must be a finite group");
  const auto n = g.generators.size();
  std::vector<std::optional<Element>> given(n);
  if (cj.contains("mu_gen")) {
    for (const auto& [name, val] : cj.at("mu_gen").items()) {
      const int i = g.generator_index(name);
      if (i < 0) throw std::invalid_argument("constraint: unknown generator '" + name + "'");
      given[static_cast<std::size_t>(i)] = c->h.decode(val);
    }
  }
  c->mu_gen.assign(n, c->h.identity);
  for (std::size_t i = 0; i < n; ++i) {
    if (given[i]) {
      c->mu_gen[i] = *given[i];
      continue;
    }
    const Element inv = g.inverse(g.generator_elements[i]);
    for (std::size_t k = 0; k < n; ++k) {
      if (given[k] && g.generator_elements[k] == inv) c->mu_gen[i] = c->h.inverse(*given[k]);
    }
  }
  const auto b = ball(g, 2);
  for (const auto& [x, w] : b) {
    for (const auto& y : g.generator_elements) {
      if (c->mu(g, g.mul(x, y)) != c->h.mul(c->mu(g, x), c->mu(g, y))) {
        throw std::invalid_argument("constraint: mu is not a homomorphism");
      }
    }
  }
  sys.constraint = c;
  if (cj.contains("mu_var")) {
    for (const auto& [x, val] : cj.at("mu_var").items()) {
      if (!vars.contains(x)) throw std::invalid_argument("constraint: unknown variable '" + x + "'");
      std::set<Element> s;
      if (val.is_array()) {
        for (const auto& v : val) s.insert(c->h.decode(v));
      } else {
        s.insert(c->h.decode(val));
      }
      if (s.empty()) throw std::invalid_argument("constraint: empty target for '" + x + "'");
      sys.targets[x] = std::move(s);
    }
  }
  return sys;
}

nlohmann::json quad_system_to_json(const QuadSystem& sys) {
  const auto& g = *sys.group;
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : sys.equations) {
    nlohmann::json toks = nlohmann::json::array();
    for (const auto& t : e) {
      if (t.is_var) {
        toks.push_back(t.inverse ? t.var + "^-1" : t.var);
      } else {
        toks.push_back({{"const", g.encode(t.value)}});
      }
    }
    eqs.push_back(std::move(toks));
  }
  const auto& c = *sys.constraint;
  nlohmann::json mu_gen = nlohmann::json::object();
  for (std::size_t i = 0; i < g.generators.size(); ++i) mu_gen[g.generators[i]] = c.h.encode(c.mu_gen[i]);
  nlohmann::json mu_var = nlohmann::json::object();
  for (const auto& [x, s] : sys.targets) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : s) arr.push_back(c.h.encode(h));
    mu_var[x] = std::move(arr);
  }
  return {{"group", g.description},
          {"variables", sys.variables},
          {"equations", std::move(eqs)},
          {"constraint", {{"h", c.h.description}, {"mu_gen", std::move(mu_gen)}, {"mu_var", std::move(mu_var)}}}};
}

nlohmann::json report_to_json(const QuadSystem& sys, const Report& r, const std::vector<std::size_t>& ns) {
  const auto& g = *sys.group;
  nlohmann::json j;
  j["verdict"] = r.verdict == Verdict::Infinite ? "infinite" : r.verdict == Verdict::Finite ? "finite" : "inconclusive";
  j["transcript"] = r.transcript;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.verdict == Verdict::Finite) {
    nlohmann::json sols = nlohmann::json::array();
    for (const auto& s : r.solutions) {
      sols.push_back({{"assignment", assignment_to_json(sys, s)}, {"verified", verify(sys, s)}});
    }
    j["solutions"] = std::move(sols);
  }
  if (r.witness) {
    const auto& w = *r.witness;
    nlohmann::json tmpl = nlohmann::json::array();
    for (const auto& p : w.tmpl) tmpl.push_back({{"value", show(g, p.value)}, {"multiplicity", p.multiplicity}});
    nlohmann::json inst = nlohmann::json::array();
    bool all_ok = true;
    for (std::size_t n : ns) {
      try {
        const Assignment a = w.instantiate(g, n);
        const std::size_t e = g.nf_exp(a.at(w.variable));
        const bool ok = verify(sys, a) && e >= n;
        all_ok = all_ok && ok;
        inst.push_back({{"n", n}, {"assignment", assignment_to_json(sys, a)}, {"exp", e}, {"verified", ok}});
      } catch (const std::exception& ex) {
        all_ok = false;
        inst.push_back({{"n", n}, {"error", ex.what()}, {"verified", false}});
      }
    }
    j["witness"] = {{"variable", w.variable}, {"origin_case", w.origin_case}, {"path", w.path},
                    {"template", std::move(tmpl)}, {"instances", std::move(inst)}, {"verified", all_ok}};
  }
  return j;
}

}  // namespace perex
