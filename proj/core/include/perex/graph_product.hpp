#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "perex/monoids.hpp"
#include "perex/traces.hpp"

namespace perex {

struct GPColor {
  std::string name;
  MonoidOracle oracle;
};

/// Finite graph product: colors listed in increasing color order, an
/// irreflexive symmetric independence relation on colors, one local monoid
/// per color.
class GPSpec {
 public:
  GPSpec() = default;
  /// Throws std::invalid_argument on duplicate names, reflexive or foreign
  /// pairs, or a local oracle whose generators are empty for a nontrivial
  /// element.
  GPSpec(std::vector<GPColor> colors, const std::vector<std::pair<std::string, std::string>>& independence);

  std::size_t size() const { return colors_.size(); }
  const GPColor& color(std::size_t i) const { return colors_.at(i); }
  const MonoidOracle& local(std::size_t i) const { return colors_.at(i).oracle; }
  /// Index of a color by name, or -1.
  int color_index(std::string_view name) const;
  bool independent(std::size_t i, std::size_t j) const { return indep_[i][j]; }
  std::vector<std::pair<std::string, std::string>> independence_pairs() const;

 private:
  std::vector<GPColor> colors_;
  std::vector<std::vector<bool>> indep_;
};

/// {"colors": [{"name", "oracle"}], "independence": [[c1, c2], ...],
///  "color_order": [names]} ("color_order" optional; defaults to list order).
GPSpec gp_spec_from_json(const nlohmann::json& j);
nlohmann::json gp_spec_to_json(const GPSpec& spec);

/// Right-angled Artin group on an independence alphabet: one copy of Z per
/// letter, colors ordered like the letters.
GPSpec raag_spec(const IndepAlphabet& alph);

/// A nontrivial local element carrying its color.
struct Syllable {
  std::size_t color;
  Element value;
  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Reduced trace over the colored local elements, stored in lexicographic
/// normal form with respect to the color order.
struct GPElement {
  std::vector<Syllable> letters;
  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  friend bool operator==(const GPElement&, const GPElement&) = default;
  friend auto operator<=>(const GPElement&, const GPElement&) = default;
};

/// Merges same-colored syllables separated only by independent ones (leftmost
/// pair first) until none is left, drops identities, and sorts into the
/// canonical representative.
GPElement gp_reduce(const GPSpec& spec, std::vector<Syllable> letters);
GPElement gp_multiply(const GPSpec& spec, const GPElement& x, const GPElement& y);
/// Requires every local oracle involved to provide invert.
GPElement gp_inverse(const GPSpec& spec, const GPElement& x);
GPElement gp_power(const GPSpec& spec, const GPElement& x, std::size_t k);
/// Single-syllable element; the identity if `value` is the local identity.
GPElement gp_syllable(const GPSpec& spec, std::size_t color, const Element& value);

/// Parses a product of tokens separated by spaces or '*':
///   c      first generator of color c
///   c^k    its k-th power (k may be negative)
///   c.g    local generator named g, optionally with ^k
///   c=txt  local element parsed by the color's oracle
///   X      for a single-letter name x absent from the colors, X = x^-1
GPElement gp_parse(const GPSpec& spec, std::string_view text);
nlohmann::json gp_to_json(const GPSpec& spec, const GPElement& x);
GPElement gp_from_json(const GPSpec& spec, const nlohmann::json& j);

/// A letter of the global generating set: (color, local generator index).
struct GPLetter {
  std::size_t color;
  int gen;
  friend bool operator==(const GPLetter&, const GPLetter&) = default;
  friend auto operator<=>(const GPLetter&, const GPLetter&) = default;
};
using GPWord = std::vector<GPLetter>;

/// Each syllable replaced by its local normal form, in syllable order.
GPWord nf_gamma(const GPSpec& spec, const GPElement& x);
/// Lexicographic normal form of nf_gamma(x): colors by color order, then the
/// local generator order; letters of independent colors commute.
GPWord nf_global(const GPSpec& spec, const GPElement& x);
/// Letters joined by spaces; integer generators print as c and c^-1, other
/// generators as c.g.
std::string render(const GPSpec& spec, const GPWord& w);
GPElement evaluate(const GPSpec& spec, const GPWord& w);

/// Whether some conjugate of minimal length in the transposition orbit of y
/// splits into independent single syllables that each have a finite power
/// submonoid. Throws std::logic_error if a local oracle lacks the capability.
bool has_finite_power_submonoid(const GPSpec& spec, const GPElement& y);
/// Elements of the transposition orbit of y (single-syllable rotations with
/// re-reduction). Throws std::length_error beyond `limit` elements.
std::set<GPElement> gp_transposition_orbit(const GPSpec& spec, const GPElement& y,
                                           std::size_t limit = 100000);

/// All x with x^2 = w, searched among reduced traces of at most max(1, |w|)
/// syllables over w's syllables and their local square roots. Throws
/// std::logic_error if a local oracle lacks square roots and
/// std::domain_error("hypothesis violated") if some local oracle has
/// nontrivial roots of the identity.
std::set<GPElement> gp_square_roots(const GPSpec& spec, const GPElement& w);

struct GPPumped {
  std::size_t n;
  GPWord word;
  std::size_t exp;
};
/// nf_global(u p^n v) for 0 <= n <= n_max. Throws std::invalid_argument if
/// p is the identity.
std::vector<GPPumped> pump_family_nf(const GPSpec& spec, const GPElement& u, const GPElement& p,
                                     const GPElement& v, std::size_t n_max);

/// The graph product as a monoid oracle over the global letters; elements
/// encode the canonical syllable sequence.
MonoidOracle gp_oracle(std::shared_ptr<const GPSpec> spec);
Element gp_encode(const GPElement& x);
GPElement gp_decode(const Element& e);

}  // namespace perex
