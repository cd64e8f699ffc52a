#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace perex {

/// Opaque monoid element. Each oracle keeps its elements in a canonical
/// encoding, so equality and ordering are structural.
struct Element {
  std::vector<std::int64_t> data;

  Element() = default;
  explicit Element(std::vector<std::int64_t> d) : data(std::move(d)) {}
  Element(std::initializer_list<std::int64_t> d) : data(d) {}

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

/// Generator word: indices into MonoidOracle::generators.
using GenWord = std::vector<int>;

/// Capability record for a monoid. Optional capabilities are empty
/// std::function objects; has_* reports their presence.
struct MonoidOracle {
  std::string kind;
  nlohmann::json description;
  Element identity;
  /// Generator names, e.g. "+1" or "a"; generator_elements holds pi.
  std::vector<std::string> generators;
  std::vector<Element> generator_elements;

  std::function<Element(const Element&, const Element&)> mul;
  std::function<GenWord(const Element&)> nf;
  std::function<nlohmann::json(const Element&)> encode;
  std::function<Element(const nlohmann::json&)> decode;
  /// Text form used by task files and equation constants.
  std::function<Element(std::string_view)> parse;

  std::function<Element(const Element&)> invert;
  std::function<std::vector<Element>(const Element&)> square_roots;
  std::function<bool(const Element&)> finite_power_submonoid;

  bool is_group = false;
  bool torsion_free = false;
  bool sqrt_of_identity_trivial = false;

  bool has_invert() const { return static_cast<bool>(invert); }
  bool has_square_roots() const { return static_cast<bool>(square_roots); }
  bool has_finite_power_submonoid() const { return static_cast<bool>(finite_power_submonoid); }

  bool is_identity(const Element& x) const { return x == identity; }
  Element multiply(const Element& x, const Element& y) const { return mul(x, y); }
  Element product(const std::vector<Element>& xs) const;
  Element power(const Element& x, std::size_t k) const;
  /// x^k for k < 0 requires invert.
  Element power(const Element& x, std::int64_t k) const;
  Element inverse(const Element& x) const;
  /// pi of a generator word.
  Element evaluate(const GenWord& w) const;
  /// Generator names joined by spaces.
  std::string render(const GenWord& w) const;
  std::string nf_string(const Element& x) const { return render(nf(x)); }
  /// Exponent of periodicity of nf(x) as a word over the generators.
  std::size_t nf_exp(const Element& x) const;
  /// Index of a generator by name, or -1.
  int generator_index(std::string_view name) const;
};

/// Integers under addition; generators "+1", "-1".
MonoidOracle integer_oracle();

/// Finite monoid given by a multiplication table on 0..n-1. Throws
/// std::invalid_argument if the table is not square, has entries out of range,
/// is not associative or has no identity. Generators are the non-identity
/// elements, named by `names` when given.
MonoidOracle finite_monoid_oracle(const std::vector<std::vector<int>>& table,
                                  std::vector<std::string> names = {});

/// Cyclic group Z/n as a finite table (n >= 1), element k named "k".
MonoidOracle cyclic_group_oracle(int n);

/// Free monoid over single-character letters.
MonoidOracle free_monoid_oracle(std::string_view letters);

/// Z^n with generators g1, G1 (inverse), ..., gn, Gn.
MonoidOracle zn_oracle(int n);

/// 2x2 integer matrix.
using Mat2 = std::array<std::array<std::int64_t, 2>, 2>;

/// (Z x Z) x|_A Z with (v, k)(w, m) = (v + A^k w, k + m); elements encode as
/// (x, y, k). Throws std::invalid_argument unless det A = +-1.
MonoidOracle semidirect_oracle(const Mat2& a);

/// Resolves {"kind": "int" | "finite" | "cyclic" | "zn" | "semidirect" | "free" | "bs" | "gp" |
/// "free_group" | "raag", ...}.
MonoidOracle oracle_from_json(const nlohmann::json& j);

/// All elements of generator length <= radius, breadth first, each with a
/// shortest generator word.
std::vector<std::pair<Element, GenWord>> ball(const MonoidOracle& o, std::size_t radius);

struct FinitePowers {
  std::size_t r;  // x^{r+p} = x^r
  std::size_t p;
};
struct NoRepetitionWithin {
  std::size_t bound;
};
using PowerProfile = std::variant<FinitePowers, NoRepetitionWithin>;

/// Iterates x^0, ..., x^bound and reports the first repetition.
PowerProfile power_profile(const MonoidOracle& o, const Element& x, std::size_t bound);

/// Automaton with transitions labeled by oracle elements.
struct MAutomaton {
  struct Edge {
    int from;
    Element label;
    int to;
  };
  std::size_t states = 0;
  std::vector<int> initial;
  std::vector<int> finals;
  std::vector<Edge> edges;
};

struct RationalPump {
  Element u;
  Element p;
  Element v;
};

/// (u, p, v) with p != 1 and u p* v inside the accepted set, or nullopt when
/// no accepting path carries a closed walk (of length <= 2|Q|) with a
/// nontrivial label.
std::optional<RationalPump> rational_pump(const MAutomaton& a, const MonoidOracle& o);

}  // namespace perex
