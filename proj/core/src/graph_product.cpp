#include "perex/graph_product.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "perex/words.hpp"

namespace perex {

GPSpec::GPSpec(std::vector<GPColor> colors,
               const std::vector<std::pair<std::string, std::string>>& independence)
    : colors_(std::move(colors)), indep_(colors_.size(), std::vector<bool>(colors_.size(), false)) {
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if (colors_[i].name.empty()) throw std::invalid_argument("graph product: empty color name");
    for (std::size_t j = 0; j < i; ++j) {
      if (colors_[i].name == colors_[j].name) {
        throw std::invalid_argument("graph product: duplicate color '" + colors_[i].name + "'");
      }
    }
  }
  for (const auto& [a, b] : independence) {
    const int i = color_index(a), j = color_index(b);
    if (i < 0 || j < 0) throw std::invalid_argument("graph product: independence uses unknown color");
    if (i == j) throw std::invalid_argument("graph product: independence must be irreflexive");
    indep_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    indep_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
  }
}

int GPSpec::color_index(std::string_view name) const {
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if (colors_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::pair<std::string, std::string>> GPSpec::independence_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    for (std::size_t j = i + 1; j < colors_.size(); ++j) {
      if (indep_[i][j]) out.emplace_back(colors_[i].name, colors_[j].name);
    }
  }
  return out;
}

GPSpec gp_spec_from_json(const nlohmann::json& j) {
  std::map<std::string, GPColor> by_name;
  std::vector<std::string> listed;
  for (const auto& c : j.at("colors")) {
    const auto name = c.at("name").get<std::string>();
    if (by_name.count(name)) throw std::invalid_argument("graph product: duplicate color '" + name + "'");
    by_name.emplace(name, GPColor{name, oracle_from_json(c.at("oracle"))});
    listed.push_back(name);
  }
  std::vector<std::string> order = listed;
  if (j.contains("color_order")) {
    order = j.at("color_order").get<std::vector<std::string>>();
    auto a = order, b = listed;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw std::invalid_argument("graph product: color_order must list every color once");
  }
  std::vector<GPColor> colors;
  for (const auto& n : order) colors.push_back(by_name.at(n));
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("independence")) {
    for (const auto& p : j.at("independence")) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("graph product: independence pairs have two entries");
      pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  }
  return GPSpec(std::move(colors), pairs);
}

nlohmann::json gp_spec_to_json(const GPSpec& spec) {
  nlohmann::json j;
  j["colors"] = nlohmann::json::array();
  j["color_order"] = nlohmann::json::array();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    j["colors"].push_back({{"name", spec.color(i).name}, {"oracle", spec.local(i).description}});
    j["color_order"].push_back(spec.color(i).name);
  }
  j["independence"] = nlohmann::json::array();
  for (const auto& [a, b] : spec.independence_pairs()) j["independence"].push_back({a, b});
  return j;
}

GPSpec raag_spec(const IndepAlphabet& alph) {
  std::vector<GPColor> colors;
  for (char c : alph.letters()) colors.push_back(GPColor{std::string(1, c), integer_oracle()});
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [a, b] : alph.independence_pairs()) pairs.emplace_back(std::string(1, a), std::string(1, b));
  return GPSpec(std::move(colors), pairs);
}

namespace {

void check_colors(const GPSpec& spec, const std::vector<Syllable>& letters) {
  for (const auto& s : letters) {
    if (s.color >= spec.size()) throw std::invalid_argument("graph product: syllable with unknown color");
  }
}

}  // namespace

GPElement gp_reduce(const GPSpec& spec, std::vector<Syllable> letters) {
  check_colors(spec, letters);
  letters.erase(std::remove_if(letters.begin(), letters.end(),
                               [&](const Syllable& s) { return spec.local(s.color).is_identity(s.value); }),
                letters.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < letters.size() && !changed; ++i) {
      const std::size_t c = letters[i].color;
      for (std::size_t j = i + 1; j < letters.size(); ++j) {
        if (letters[j].color == c) {
          const MonoidOracle& o = spec.local(c);
          Element merged = o.mul(letters[i].value, letters[j].value);
          letters.erase(letters.begin() + static_cast<std::ptrdiff_t>(j));
          if (o.is_identity(merged)) {
            letters.erase(letters.begin() + static_cast<std::ptrdiff_t>(i));
          } else {
            letters[i].value = std::move(merged);
          }
          changed = true;
          break;
        }
        if (!spec.independent(c, letters[j].color)) break;
      }
    }
  }
  GPElement out;
  out.letters = lex_normal_form(
      letters, [](const Syllable& a, const Syllable& b) { return a.color < b.color; },
      [&](const Syllable& a, const Syllable& b) { return spec.independent(a.color, b.color); });
  return out;
}

GPElement gp_multiply(const GPSpec& spec, const GPElement& x, const GPElement& y) {
  std::vector<Syllable> all = x.letters;
  all.insert(all.end(), y.letters.begin(), y.letters.end());
  return gp_reduce(spec, std::move(all));
}

GPElement gp_inverse(const GPSpec& spec, const GPElement& x) {
  std::vector<Syllable> out;
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) {
    out.push_back(Syllable{it->color, spec.local(it->color).inverse(it->value)});
  }
  return gp_reduce(spec, std::move(out));
}

GPElement gp_power(const GPSpec& spec, const GPElement& x, std::size_t k) {
  GPElement acc;
  for (std::size_t i = 0; i < k; ++i) acc = gp_multiply(spec, acc, x);
  return acc;
}

GPElement gp_syllable(const GPSpec& spec, std::size_t color, const Element& value) {
  return gp_reduce(spec, {Syllable{color, value}});
}

GPElement gp_parse(const GPSpec& spec, std::string_view text) {
  std::vector<Syllable> letters;
  std::string token;
  auto flush = [&]() {
    if (token.empty() || token == "1") {
      token.clear();
      return;
    }
    std::string name = token;
    if (const auto eq = token.find('='); eq != std::string::npos) {
      name = token.substr(0, eq);
      const int c = spec.color_index(name);
      if (c < 0) throw std::invalid_argument("graph product: unknown color '" + name + "'");
      letters.push_back(Syllable{static_cast<std::size_t>(c), spec.local(static_cast<std::size_t>(c)).parse(token.substr(eq + 1))});
      token.clear();
      return;
    }
    std::int64_t k = 1;
    if (const auto caret = token.find('^'); caret != std::string::npos) {
      name = token.substr(0, caret);
      try {
        std::size_t used = 0;
        k = std::stoll(token.substr(caret + 1), &used);
        if (used != token.size() - caret - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("graph product: bad exponent in '" + token + "'");
      }
    }
    std::string gen;
    if (const auto dot = name.find('.'); dot != std::string::npos) {
      gen = name.substr(dot + 1);
      name = name.substr(0, dot);
    }
    int c = spec.color_index(name);
    if (c < 0 && name.size() == 1 && gen.empty()) {
      const std::string lower(1, static_cast<char>(std::tolower(static_cast<unsigned char>(name[0]))));
      if (lower != name) {
        c = spec.color_index(lower);
        if (c >= 0) k = -k;
      }
    }
    if (c < 0) throw std::invalid_argument("graph product: unknown color '" + name + "'");
    const MonoidOracle& o = spec.local(static_cast<std::size_t>(c));
    int g = 0;
    if (!gen.empty()) {
      g = o.generator_index(gen);
      if (g < 0) throw std::invalid_argument("graph product: unknown generator '" + gen + "' of color '" + name + "'");
    }
    if (o.generator_elements.empty()) throw std::invalid_argument("graph product: color '" + name + "' has no generators");
    letters.push_back(Syllable{static_cast<std::size_t>(c), o.power(o.generator_elements[static_cast<std::size_t>(g)], k)});
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '*' || ch == '\t') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return gp_reduce(spec, std::move(letters));
}

nlohmann::json gp_to_json(const GPSpec& spec, const GPElement& x) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : x.letters) {
    j.push_back({{"color", spec.color(s.color).name}, {"element", spec.local(s.color).encode(s.value)}});
  }
  return j;
}

GPElement gp_from_json(const GPSpec& spec, const nlohmann::json& j) {
  if (j.is_string()) return gp_parse(spec, j.get<std::string>());
  std::vector<Syllable> letters;
  for (const auto& s : j) {
    const auto name = s.at("color").get<std::string>();
    const int c = spec.color_index(name);
    if (c < 0) throw std::invalid_argument("graph product: unknown color '" + name + "'");
    letters.push_back(Syllable{static_cast<std::size_t>(c), spec.local(static_cast<std::size_t>(c)).decode(s.at("element"))});
  }
  return gp_reduce(spec, std::move(letters));
}

GPWord nf_gamma(const GPSpec& spec, const GPElement& x) {
  GPWord out;
  for (const auto& s : x.letters) {
    const GenWord w = spec.local(s.color).nf(s.value);
    if (w.empty()) throw std::logic_error("graph product: local normal form of a nontrivial element is empty");
    for (int g : w) out.push_back(GPLetter{s.color, g});
  }
  return out;
}

GPWord nf_global(const GPSpec& spec, const GPElement& x) {
  return lex_normal_form(
      nf_gamma(spec, x), [](const GPLetter& a, const GPLetter& b) { return a < b; },
      [&](const GPLetter& a, const GPLetter& b) { return spec.independent(a.color, b.color); });
}

std::string render(const GPSpec& spec, const GPWord& w) {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    const GPColor& c = spec.color(l.color);
    const std::string& g = c.oracle.generators.at(static_cast<std::size_t>(l.gen));
    if (c.oracle.kind == "int") {
      out += c.name + (g == "+1" ? "" : "^-1");
    } else {
      out += c.name + "." + g;
    }
  }
  return out;
}

GPElement evaluate(const GPSpec& spec, const GPWord& w) {
  std::vector<Syllable> letters;
  for (const auto& l : w) {
    letters.push_back(Syllable{l.color, spec.local(l.color).generator_elements.at(static_cast<std::size_t>(l.gen))});
  }
  return gp_reduce(spec, std::move(letters));
}

namespace {

// Indices of the syllables that are minimal in the dependence order.
std::vector<std::size_t> minimal_syllables(const GPSpec& spec, const GPElement& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.letters.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < i && minimal; ++j) {
      if (!spec.independent(x.letters[i].color, x.letters[j].color)) minimal = false;
    }
    if (minimal) out.push_back(i);
  }
  return out;
}

}  // namespace

std::set<GPElement> gp_transposition_orbit(const GPSpec& spec, const GPElement& y, std::size_t limit) {
  std::set<GPElement> seen{y};
  std::deque<GPElement> queue{y};
  while (!queue.empty()) {
    const GPElement z = queue.front();
    queue.pop_front();
    for (std::size_t i : minimal_syllables(spec, z)) {
      std::vector<Syllable> rotated = z.letters;
      const Syllable s = rotated[i];
      rotated.erase(rotated.begin() + static_cast<std::ptrdiff_t>(i));
      rotated.push_back(s);
      GPElement next = gp_reduce(spec, std::move(rotated));
      if (seen.insert(next).second) {
        if (seen.size() > limit) throw std::length_error("transposition orbit exceeds the limit");
        queue.push_back(std::move(next));
      }
    }
  }
  return seen;
}

bool has_finite_power_submonoid(const GPSpec& spec, const GPElement& y) {
  for (const auto& s : y.letters) {
    if (!spec.local(s.color).has_finite_power_submonoid()) {
      throw std::logic_error("has_finite_power_submonoid: local oracle '" + spec.color(s.color).name +
                             "' lacks the capability");
    }
  }
  if (y.empty()) return true;
  const auto orbit = gp_transposition_orbit(spec, y);
  std::size_t min_len = y.size();
  for (const auto& z : orbit) min_len = std::min(min_len, z.size());
  for (const auto& z : orbit) {
    if (z.size() != min_len) continue;
    bool ok = true;
    // every component of the dependence graph must be one syllable
    for (std::size_t i = 0; i < z.size() && ok; ++i) {
      for (std::size_t j = 0; j < z.size() && ok; ++j) {
        if (i != j && !spec.independent(z.letters[i].color, z.letters[j].color)) ok = false;
      }
      if (ok) ok = spec.local(z.letters[i].color).finite_power_submonoid(z.letters[i].value);
    }
    if (ok) return true;
  }
  return false;
}

std::set<GPElement> gp_square_roots(const GPSpec& spec, const GPElement& w) {
  for (std::size_t c = 0; c < spec.size(); ++c) {
    const MonoidOracle& o = spec.local(c);
    if (!o.has_square_roots()) {
      throw std::logic_error("gp_square_roots: local oracle '" + spec.color(c).name + "' lacks square roots");
    }
    if (!o.sqrt_of_identity_trivial) throw std::domain_error("hypothesis violated");
  }
  if (w.empty()) return {w};
  std::set<Syllable> cand;
  for (const auto& s : w.letters) {
    cand.insert(s);
    for (const auto& r : spec.local(s.color).square_roots(s.value)) {
      if (!spec.local(s.color).is_identity(r)) cand.insert(Syllable{s.color, r});
    }
  }
  const std::vector<Syllable> letters(cand.begin(), cand.end());
  const std::size_t max_len = std::max<std::size_t>(1, w.size());
  std::set<GPElement> roots;
  std::vector<Syllable> cur;
  std::function<void()> extend = [&]() {
    if (!cur.empty()) {
      const GPElement x = gp_reduce(spec, cur);
      if (x.size() == cur.size() && gp_multiply(spec, x, x) == w) roots.insert(x);
    }
    if (cur.size() == max_len) return;
    for (const auto& s : letters) {
      if (!cur.empty() && cur.back().color == s.color) continue;
      cur.push_back(s);
      extend();
      cur.pop_back();
    }
  };
  extend();
  return roots;
}

std::vector<GPPumped> pump_family_nf(const GPSpec& spec, const GPElement& u, const GPElement& p,
                                     const GPElement& v, std::size_t n_max) {
  if (p.empty()) throw std::invalid_argument("pump_family_nf: p must not be the identity");
  std::vector<GPPumped> out;
  GPElement acc = u;
  for (std::size_t n = 0; n <= n_max; ++n) {
    GPWord w = nf_global(spec, gp_multiply(spec, acc, v));
    const std::size_t e = exponent_of_periodicity(w);
    out.push_back(GPPumped{n, std::move(w), e});
    if (n < n_max) acc = gp_multiply(spec, acc, p);
  }
  return out;
}

Element gp_encode(const GPElement& x) {
  Element e;
  for (const auto& s : x.letters) {
    e.data.push_back(static_cast<std::int64_t>(s.color));
    e.data.push_back(static_cast<std::int64_t>(s.value.data.size()));
    e.data.insert(e.data.end(), s.value.data.begin(), s.value.data.end());
  }
  return e;
}

GPElement gp_decode(const Element& e) {
  GPElement x;
  std::size_t i = 0;
  while (i < e.data.size()) {
    if (i + 1 >= e.data.size()) throw std::invalid_argument("graph product element: malformed encoding");
    const auto color = static_cast<std::size_t>(e.data[i]);
    const auto len = static_cast<std::size_t>(e.data[i + 1]);
    if (i + 2 + len > e.data.size()) throw std::invalid_argument("graph product element: malformed encoding");
    Element v(std::vector<std::int64_t>(e.data.begin() + static_cast<std::ptrdiff_t>(i + 2),
                                        e.data.begin() + static_cast<std::ptrdiff_t>(i + 2 + len)));
    x.letters.push_back(Syllable{color, std::move(v)});
    i += 2 + len;
  }
  return x;
}

MonoidOracle gp_oracle(std::shared_ptr<const GPSpec> spec) {
  MonoidOracle o;
  o.kind = "gp";
  o.description = gp_spec_to_json(*spec);
  o.description["kind"] = "gp";
  o.identity = Element{};
  std::vector<std::size_t> offset(spec->size() + 1, 0);
  bool all_invert = true, all_sqrt = true, all_fps = true;
  o.is_group = o.torsion_free = o.sqrt_of_identity_trivial = true;
  for (std::size_t c = 0; c < spec->size(); ++c) {
    const MonoidOracle& l = spec->local(c);
    offset[c + 1] = offset[c] + l.generators.size();
    for (std::size_t g = 0; g < l.generators.size(); ++g) {
      o.generators.push_back(render(*spec, {GPLetter{c, static_cast<int>(g)}}));
      o.generator_elements.push_back(gp_encode(gp_syllable(*spec, c, l.generator_elements[g])));
    }
    all_invert = all_invert && l.has_invert();
    all_sqrt = all_sqrt && l.has_square_roots();
    all_fps = all_fps && l.has_finite_power_submonoid();
    o.is_group = o.is_group && l.is_group;
    o.torsion_free = o.torsion_free && l.torsion_free;
    o.sqrt_of_identity_trivial = o.sqrt_of_identity_trivial && l.sqrt_of_identity_trivial;
  }
  o.mul = [spec](const Element& x, const Element& y) {
    return gp_encode(gp_multiply(*spec, gp_decode(x), gp_decode(y)));
  };
  o.nf = [spec, offset](const Element& x) {
    GenWord out;
    for (const auto& l : nf_global(*spec, gp_decode(x))) out.push_back(static_cast<int>(offset[l.color]) + l.gen);
    return out;
  };
  o.encode = [spec](const Element& x) { return gp_to_json(*spec, gp_decode(x)); };
  o.decode = [spec](const nlohmann::json& j) { return gp_encode(gp_from_json(*spec, j)); };
  o.parse = [spec](std::string_view s) { return gp_encode(gp_parse(*spec, s)); };
  if (all_invert) {
    o.invert = [spec](const Element& x) { return gp_encode(gp_inverse(*spec, gp_decode(x))); };
  }
  if (all_sqrt && o.sqrt_of_identity_trivial) {
    o.square_roots = [spec](const Element& x) {
      std::vector<Element> out;
      for (const auto& r : gp_square_roots(*spec, gp_decode(x))) out.push_back(gp_encode(r));
      return out;
    };
  }
  if (all_fps) {
    o.finite_power_submonoid = [spec](const Element& x) { return has_finite_power_submonoid(*spec, gp_decode(x)); };
  }
  return o;
}

}  // namespace perex
