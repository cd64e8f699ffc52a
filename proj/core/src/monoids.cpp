#include "perex/monoids.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>

#include "perex/arith.hpp"
#include "perex/bs.hpp"
#include "perex/graph_product.hpp"
#include "perex/traces.hpp"
#include "perex/words.hpp"

namespace perex {

Element MonoidOracle::product(const std::vector<Element>& xs) const {
  Element acc = identity;
  for (const auto& x : xs) acc = mul(acc, x);
  return acc;
}

Element MonoidOracle::power(const Element& x, std::size_t k) const {
  Element acc = identity;
  Element base = x;
  while (k > 0) {
    if (k & 1U) acc = mul(acc, base);
    k >>= 1U;
    if (k > 0) base = mul(base, base);
  }
  return acc;
}

Element MonoidOracle::power(const Element& x, std::int64_t k) const {
  if (k >= 0) return power(x, static_cast<std::size_t>(k));
  return power(inverse(x), static_cast<std::size_t>(-(k + 1)) + 1);
}

Element MonoidOracle::inverse(const Element& x) const {
  if (!invert) throw std::logic_error(kind + " oracle: inverse not available");
  return invert(x);
}

Element MonoidOracle::evaluate(const GenWord& w) const {
  Element acc = identity;
  for (int g : w) acc = mul(acc, generator_elements.at(static_cast<std::size_t>(g)));
  return acc;
}

std::string MonoidOracle::render(const GenWord& w) const {
  std::string out;
  for (int g : w) {
    if (!out.empty()) out += ' ';
    out += generators.at(static_cast<std::size_t>(g));
  }
  return out;
}

std::size_t MonoidOracle::nf_exp(const Element& x) const { return exponent_of_periodicity(nf(x)); }

int MonoidOracle::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(std::string(s), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::int64_t> parse_int_list(std::string_view s) {
  std::vector<std::int64_t> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '(' || c == ')' || c == '[' || c == ']') {
      if (!cur.empty()) out.push_back(parse_int(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(parse_int(cur));
  return out;
}

}  // namespace

MonoidOracle integer_oracle() {
  MonoidOracle o;
  o.kind = "int";
  o.description = {{"kind", "int"}};
  o.identity = Element{0};
  o.generators = {"+1", "-1"};
  o.generator_elements = {Element{1}, Element{-1}};
  o.mul = [](const Element& x, const Element& y) { return Element{checked_add(x.data[0], y.data[0])}; };
  o.nf = [](const Element& x) {
    const std::int64_t k = x.data[0];
    return GenWord(static_cast<std::size_t>(k < 0 ? -k : k), k < 0 ? 1 : 0);
  };
  o.encode = [](const Element& x) { return nlohmann::json(x.data[0]); };
  o.decode = [](const nlohmann::json& j) { return Element{j.get<std::int64_t>()}; };
  o.parse = [](std::string_view s) { return Element{parse_int(s)}; };
  o.invert = [](const Element& x) { return Element{checked_sub(0, x.data[0])}; };
  o.square_roots = [](const Element& x) {
    if (x.data[0] % 2 != 0) return std::vector<Element>{};
    return std::vector<Element>{Element{x.data[0] / 2}};
  };
  o.finite_power_submonoid = [](const Element& x) { return x.data[0] == 0; };
  o.is_group = true;
  o.torsion_free = true;
  o.sqrt_of_identity_trivial = true;
  return o;
}

MonoidOracle finite_monoid_oracle(const std::vector<std::vector<int>>& table,
                                  std::vector<std::string> names) {
  const std::size_t n = table.size();
  if (n == 0) throw std::invalid_argument("finite monoid: empty table");
  for (const auto& row : table) {
    if (row.size() != n) throw std::invalid_argument("finite monoid: table must be square");
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw std::invalid_argument("finite monoid: entry out of range");
    }
  }
  auto at = [&](std::size_t x, std::size_t y) { return static_cast<std::size_t>(table[x][y]); };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (at(at(x, y), z) != at(x, at(y, z))) {
          throw std::invalid_argument("finite monoid: table is not associative at (" + std::to_string(x) +
                                      "," + std::to_string(y) + "," + std::to_string(z) + ")");
        }
      }
    }
  }
  std::optional<std::size_t> e;
  for (std::size_t c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = at(c, x) == x && at(x, c) == x;
    if (ok) e = c;
  }
  if (!e) throw std::invalid_argument("finite monoid: table has no identity");
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  }
  if (names.size() != n) throw std::invalid_argument("finite monoid: one name per element required");

  auto tab = std::make_shared<const std::vector<std::vector<int>>>(table);
  auto nm = std::make_shared<const std::vector<std::string>>(names);
  const auto id = static_cast<std::int64_t>(*e);

  MonoidOracle o;
  o.kind = "finite";
  o.description = {{"kind", "finite"}, {"table", table}, {"names", names}};
  o.identity = Element{id};
  std::vector<std::int64_t> gen_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::int64_t>(i) == id) continue;
    gen_of[i] = static_cast<std::int64_t>(o.generators.size());
    o.generators.push_back(names[i]);
    o.generator_elements.push_back(Element{static_cast<std::int64_t>(i)});
  }
  o.mul = [tab](const Element& x, const Element& y) {
    return Element{(*tab)[static_cast<std::size_t>(x.data[0])][static_cast<std::size_t>(y.data[0])]};
  };
  o.nf = [gen_of, id](const Element& x) {
    if (x.data[0] == id) return GenWord{};
    return GenWord{static_cast<int>(gen_of[static_cast<std::size_t>(x.data[0])])};
  };
  auto lookup = [nm, n](std::string_view s) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((*nm)[i] == s) return Element{static_cast<std::int64_t>(i)};
    }
    throw std::invalid_argument("finite monoid: unknown element '" + std::string(s) + "'");
  };
  o.encode = [nm](const Element& x) { return nlohmann::json((*nm)[static_cast<std::size_t>(x.data[0])]); };
  o.decode = [lookup, n](const nlohmann::json& j) {
    if (j.is_number_integer()) {
      const auto v = j.get<std::int64_t>();
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw std::invalid_argument("finite monoid: element out of range");
      return Element{v};
    }
    return lookup(j.get<std::string>());
  };
  o.parse = lookup;
  o.square_roots = [tab, n](const Element& x) {
    std::vector<Element> out;
    for (std::size_t y = 0; y < n; ++y) {
      if ((*tab)[y][y] == x.data[0]) out.push_back(Element{static_cast<std::int64_t>(y)});
    }
    return out;
  };
  o.finite_power_submonoid = [](const Element&) { return true; };

  bool group = true;
  std::vector<std::int64_t> inv(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n && inv[x] < 0; ++y) {
      if (at(x, y) == *e && at(y, x) == *e) inv[x] = static_cast<std::int64_t>(y);
    }
    if (inv[x] < 0) group = false;
  }
  if (group) {
    o.invert = [inv](const Element& x) { return Element{inv[static_cast<std::size_t>(x.data[0])]}; };
  }
  o.is_group = group;
  o.torsion_free = n == 1;
  o.sqrt_of_identity_trivial = o.square_roots(o.identity).size() == 1;
  return o;
}

MonoidOracle cyclic_group_oracle(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group: order must be positive");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
  }
  return finite_monoid_oracle(table);
}

MonoidOracle free_monoid_oracle(std::string_view letters) {
  std::string alpha(letters);
  std::sort(alpha.begin(), alpha.end());
  alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
  MonoidOracle o;
  o.kind = "free";
  o.description = {{"kind", "free"}, {"letters", alpha}};
  o.identity = Element{};
  for (char c : alpha) {
    o.generators.emplace_back(1, c);
    o.generator_elements.push_back(Element{static_cast<std::int64_t>(c)});
  }
  o.mul = [](const Element& x, const Element& y) {
    Element r = x;
    r.data.insert(r.data.end(), y.data.begin(), y.data.end());
    return r;
  };
  o.nf = [alpha](const Element& x) {
    GenWord w;
    for (auto c : x.data) w.push_back(static_cast<int>(alpha.find(static_cast<char>(c))));
    return w;
  };
  auto from_text = [alpha](std::string_view s) {
    Element x;
    for (char c : s) {
      if (alpha.find(c) == std::string::npos) {
        throw std::invalid_argument(std::string("free monoid: letter '") + c + "' not in the alphabet");
      }
      x.data.push_back(static_cast<std::int64_t>(c));
    }
    return x;
  };
  o.encode = [](const Element& x) {
    std::string s;
    for (auto c : x.data) s.push_back(static_cast<char>(c));
    return nlohmann::json(s);
  };
  o.decode = [from_text](const nlohmann::json& j) { return from_text(j.get<std::string>()); };
  o.parse = from_text;
  o.square_roots = [](const Element& x) {
    const std::size_t n = x.data.size();
    if (n % 2 != 0) return std::vector<Element>{};
    if (!std::equal(x.data.begin(), x.data.begin() + static_cast<std::ptrdiff_t>(n / 2),
                    x.data.begin() + static_cast<std::ptrdiff_t>(n / 2))) {
      return std::vector<Element>{};
    }
    return std::vector<Element>{Element(std::vector<std::int64_t>(x.data.begin(), x.data.begin() + static_cast<std::ptrdiff_t>(n / 2)))};
  };
  o.finite_power_submonoid = [](const Element& x) { return x.data.empty(); };
  o.torsion_free = true;
  o.sqrt_of_identity_trivial = true;
  return o;
}

MonoidOracle zn_oracle(int n) {
  if (n < 1) throw std::invalid_argument("zn: rank must be positive");
  const auto un = static_cast<std::size_t>(n);
  MonoidOracle o;
  o.kind = "zn";
  o.description = {{"kind", "zn"}, {"n", n}};
  o.identity = Element(std::vector<std::int64_t>(un, 0));
  for (std::size_t i = 0; i < un; ++i) {
    for (int sign : {1, -1}) {
      o.generators.push_back((sign > 0 ? "g" : "G") + std::to_string(i + 1));
      std::vector<std::int64_t> v(un, 0);
      v[i] = sign;
      o.generator_elements.emplace_back(v);
    }
  }
  o.mul = [](const Element& x, const Element& y) {
    Element r = x;
    for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = checked_add(r.data[i], y.data[i]);
    return r;
  };
  o.nf = [](const Element& x) {
    GenWord w;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      const std::int64_t k = x.data[i];
      const int g = static_cast<int>(2 * i) + (k < 0 ? 1 : 0);
      w.insert(w.end(), static_cast<std::size_t>(k < 0 ? -k : k), g);
    }
    return w;
  };
  auto check = [un](std::vector<std::int64_t> v) {
    if (v.size() != un) throw std::invalid_argument("zn: expected " + std::to_string(un) + " coordinates");
    return Element(std::move(v));
  };
  o.encode = [](const Element& x) { return nlohmann::json(x.data); };
  o.decode = [check](const nlohmann::json& j) { return check(j.get<std::vector<std::int64_t>>()); };
  o.parse = [check](std::string_view s) { return check(parse_int_list(s)); };
  o.invert = [](const Element& x) {
    Element r = x;
    for (auto& c : r.data) c = checked_sub(0, c);
    return r;
  };
  o.square_roots = [](const Element& x) {
    Element r = x;
    for (auto& c : r.data) {
      if (c % 2 != 0) return std::vector<Element>{};
      c /= 2;
    }
    return std::vector<Element>{r};
  };
  o.finite_power_submonoid = [](const Element& x) {
    return std::all_of(x.data.begin(), x.data.end(), [](std::int64_t c) { return c == 0; });
  };
  o.is_group = true;
  o.torsion_free = true;
  o.sqrt_of_identity_trivial = true;
  return o;
}

namespace {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      r[i][j] = checked_add(checked_mul(a[i][0], b[0][j]), checked_mul(a[i][1], b[1][j]));
    }
  }
  return r;
}

std::int64_t det(const Mat2& a) {
  return checked_sub(checked_mul(a[0][0], a[1][1]), checked_mul(a[0][1], a[1][0]));
}

// Powers of A and A^{-1} by repeated squaring.
class MatrixPowers {
 public:
  explicit MatrixPowers(const Mat2& a) : a_(a) {
    const std::int64_t d = det(a);
    // A^{-1} = d * adj(A) since d = +-1
    ainv_ = {{{d * a[1][1], -d * a[0][1]}, {-d * a[1][0], d * a[0][0]}}};
  }

  Mat2 power(std::int64_t k) const {
    Mat2 r{{{1, 0}, {0, 1}}};
    Mat2 b = k >= 0 ? a_ : ainv_;
    auto e = static_cast<std::uint64_t>(k >= 0 ? k : -k);
    while (e > 0) {
      if (e & 1U) r = mat_mul(r, b);
      e >>= 1U;
      if (e > 0) b = mat_mul(b, b);
    }
    return r;
  }

 private:
  Mat2 a_{};
  Mat2 ainv_{};
};

std::array<std::int64_t, 2> apply(const Mat2& m, std::int64_t x, std::int64_t y) {
  return {checked_add(checked_mul(m[0][0], x), checked_mul(m[0][1], y)),
          checked_add(checked_mul(m[1][0], x), checked_mul(m[1][1], y))};
}

}  // namespace

MonoidOracle semidirect_oracle(const Mat2& a) {
  const std::int64_t d = det(a);
  if (d != 1 && d != -1) throw std::invalid_argument("semidirect: matrix must have determinant +-1");
  auto pw = std::make_shared<const MatrixPowers>(a);
  MonoidOracle o;
  o.kind = "semidirect";
  o.description = {{"kind", "semidirect"},
                   {"matrix", {{a[0][0], a[0][1]}, {a[1][0], a[1][1]}}}};
  o.identity = Element{0, 0, 0};
  o.generators = {"g1", "G1", "g2", "G2", "g3", "G3"};
  o.generator_elements = {Element{1, 0, 0}, Element{-1, 0, 0}, Element{0, 1, 0},
                          Element{0, -1, 0}, Element{0, 0, 1}, Element{0, 0, -1}};
  o.mul = [pw](const Element& x, const Element& y) {
    const auto w = apply(pw->power(x.data[2]), y.data[0], y.data[1]);
    return Element{checked_add(x.data[0], w[0]), checked_add(x.data[1], w[1]), checked_add(x.data[2], y.data[2])};
  };
  // (v, k) = g1^x g2^y g3^k
  o.nf = [](const Element& x) {
    GenWord w;
    for (std::size_t i = 0; i < 3; ++i) {
      const std::int64_t k = x.data[i];
      w.insert(w.end(), static_cast<std::size_t>(k < 0 ? -k : k), static_cast<int>(2 * i) + (k < 0 ? 1 : 0));
    }
    return w;
  };
  auto check = [](std::vector<std::int64_t> v) {
    if (v.size() != 3) throw std::invalid_argument("semidirect: elements are (x, y, k)");
    return Element(std::move(v));
  };
  o.encode = [](const Element& x) { return nlohmann::json(x.data); };
  o.decode = [check](const nlohmann::json& j) { return check(j.get<std::vector<std::int64_t>>()); };
  o.parse = [check](std::string_view s) { return check(parse_int_list(s)); };
  o.invert = [pw](const Element& x) {
    const auto v = apply(pw->power(checked_sub(0, x.data[2])), x.data[0], x.data[1]);
    return Element{checked_sub(0, v[0]), checked_sub(0, v[1]), checked_sub(0, x.data[2])};
  };
  // (w, m)^2 = (w + A^m w, 2m): m = k/2 and (I + A^m) w = v
  o.square_roots = [pw](const Element& x) {
    if (x.data[2] % 2 != 0) return std::vector<Element>{};
    const std::int64_t m = x.data[2] / 2;
    Mat2 b = pw->power(m);
    b[0][0] = checked_add(b[0][0], 1);
    b[1][1] = checked_add(b[1][1], 1);
    const std::int64_t dt = det(b);
    if (dt == 0) throw std::domain_error("semidirect square roots: I + A^m is singular");
    const std::int64_t nx = checked_sub(checked_mul(b[1][1], x.data[0]), checked_mul(b[0][1], x.data[1]));
    const std::int64_t ny = checked_sub(checked_mul(b[0][0], x.data[1]), checked_mul(b[1][0], x.data[0]));
    if (nx % dt != 0 || ny % dt != 0) return std::vector<Element>{};
    return std::vector<Element>{Element{nx / dt, ny / dt, m}};
  };
  o.finite_power_submonoid = [](const Element& x) { return x == Element{0, 0, 0}; };
  o.is_group = true;
  o.torsion_free = true;
  o.sqrt_of_identity_trivial = true;
  return o;
}

MonoidOracle oracle_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "int") return integer_oracle();
  if (kind == "finite") {
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return finite_monoid_oracle(j.at("table").get<std::vector<std::vector<int>>>(), names);
  }
  if (kind == "cyclic") return cyclic_group_oracle(j.at("n").get<int>());
  if (kind == "free") return free_monoid_oracle(j.at("letters").get<std::string>());
  if (kind == "zn") return zn_oracle(j.at("n").get<int>());
  if (kind == "semidirect") {
    const auto m = j.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
    if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) {
      throw std::invalid_argument("semidirect: matrix must be 2x2");
    }
    return semidirect_oracle(Mat2{{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}});
  }
  if (kind == "bs") return bs_oracle(BSSpec(j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>()));
  if (kind == "gp") return gp_oracle(std::make_shared<const GPSpec>(gp_spec_from_json(j)));
  if (kind == "free_group") {
    return gp_oracle(std::make_shared<const GPSpec>(raag_spec(IndepAlphabet(j.at("letters").get<std::string>(), {}))));
  }
  if (kind == "raag") {
    return gp_oracle(std::make_shared<const GPSpec>(raag_spec(alphabet_from_json(j.at("alphabet")))));
  }
  throw std::invalid_argument("unknown oracle kind '" + kind + "'");
}

std::vector<std::pair<Element, GenWord>> ball(const MonoidOracle& o, std::size_t radius) {
  std::vector<std::pair<Element, GenWord>> out{{o.identity, {}}};
  std::set<Element> seen{o.identity};
  std::size_t frontier_begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    const std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (std::size_t g = 0; g < o.generators.size(); ++g) {
        Element y = o.mul(out[i].first, o.generator_elements[g]);
        if (!seen.insert(y).second) continue;
        GenWord w = out[i].second;
        w.push_back(static_cast<int>(g));
        out.emplace_back(std::move(y), std::move(w));
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

PowerProfile power_profile(const MonoidOracle& o, const Element& x, std::size_t bound) {
  std::map<Element, std::size_t> seen;
  Element acc = o.identity;
  for (std::size_t i = 0; i <= bound; ++i) {
    auto [it, fresh] = seen.emplace(acc, i);
    if (!fresh) return FinitePowers{it->second, i - it->second};
    if (i < bound) acc = o.mul(acc, x);
  }
  return NoRepetitionWithin{bound};
}

std::optional<RationalPump> rational_pump(const MAutomaton& a, const MonoidOracle& o) {
  const std::size_t n = a.states;
  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (std::size_t e = 0; e < a.edges.size(); ++e) {
    const auto& ed = a.edges[e];
    if (ed.from < 0 || ed.to < 0 || static_cast<std::size_t>(ed.from) >= n || static_cast<std::size_t>(ed.to) >= n) {
      throw std::invalid_argument("rational_pump: edge references a missing state");
    }
    out[static_cast<std::size_t>(ed.from)].push_back(e);
    in[static_cast<std::size_t>(ed.to)].push_back(e);
  }
  // shortest labelled paths from the initial states and to the final states
  std::vector<std::optional<Element>> from_init(n), to_final(n);
  std::deque<std::size_t> queue;
  for (int s : a.initial) {
    if (!from_init[static_cast<std::size_t>(s)]) {
      from_init[static_cast<std::size_t>(s)] = o.identity;
      queue.push_back(static_cast<std::size_t>(s));
    }
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t e : out[s]) {
      const auto t = static_cast<std::size_t>(a.edges[e].to);
      if (from_init[t]) continue;
      from_init[t] = o.mul(*from_init[s], a.edges[e].label);
      queue.push_back(t);
    }
  }
  for (int s : a.finals) {
    if (!to_final[static_cast<std::size_t>(s)]) {
      to_final[static_cast<std::size_t>(s)] = o.identity;
      queue.push_back(static_cast<std::size_t>(s));
    }
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t e : in[s]) {
      const auto t = static_cast<std::size_t>(a.edges[e].from);
      if (to_final[t]) continue;
      to_final[t] = o.mul(a.edges[e].label, *to_final[s]);
      queue.push_back(t);
    }
  }
  // closed walks of bounded length through each useful state
  const std::size_t max_len = 2 * n;
  for (std::size_t q = 0; q < n; ++q) {
    if (!from_init[q] || !to_final[q]) continue;
    std::optional<Element> found;
    std::function<void(std::size_t, const Element&, std::size_t)> walk =
        [&](std::size_t s, const Element& acc, std::size_t len) {
          if (found || len == max_len) return;
          for (std::size_t e : out[s]) {
            const auto t = static_cast<std::size_t>(a.edges[e].to);
            if (!from_init[t] || !to_final[t]) continue;
            Element next = o.mul(acc, a.edges[e].label);
            if (t == q && !o.is_identity(next)) {
              found = next;
              return;
            }
            walk(t, next, len + 1);
            if (found) return;
          }
        };
    walk(q, o.identity, 0);
    if (found) return RationalPump{*from_init[q], *found, *to_final[q]};
  }
  return std::nullopt;
}

}  // namespace perex
