#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perex/monoids.hpp"
#include "perex/words.hpp"

namespace perex {

/// Parameters of BS(p, q) = <a, t | t a^p t^-1 = a^q>, 1 <= p <= |q|.
class BSSpec {
 public:
  /// Throws std::invalid_argument unless 1 <= p <= |q|.
  BSSpec(std::int64_t p, std::int64_t q);
  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  /// Divisor for a-powers moved across t^eps: q for +1, p for -1.
  std::int64_t divisor(int eps) const { return eps > 0 ? q_ : p_; }
  friend bool operator==(const BSSpec&, const BSSpec&) = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

/// Alternating form a^{head} t^{e1} a^{n1} ... t^{em} a^{nm}.
struct BSWord {
  std::int64_t head = 0;
  std::vector<std::pair<int, std::int64_t>> tail;

  std::size_t t_length() const { return tail.size(); }
  std::int64_t trailing() const { return tail.empty() ? head : tail.back().second; }
  friend bool operator==(const BSWord&, const BSWord&) = default;
  friend auto operator<=>(const BSWord&, const BSWord&) = default;
};

/// Run-length encoding of a word over {a, A, t, T} (A = a^-1, T = t^-1);
/// adjacent a and A cancel. Throws std::invalid_argument on other letters.
BSWord parse_bs_word(std::string_view w);
/// Letters over {a, A, t, T}.
std::string to_letters(const BSWord& w);
/// Compact text such as "a^5 t a^-3 T".
std::string to_compact(const BSWord& w);
std::vector<Run> to_runs(const BSWord& w);
std::size_t letter_length(const BSWord& w);

BSWord bs_concat(const BSWord& x, const BSWord& y);
BSWord bs_inverse(const BSWord& x);
BSWord bs_a_power(std::int64_t n);
BSWord bs_t_power(std::int64_t n);

/// The unique irreducible word for the convergent system
///   a^{kq+r} t -> a^r t a^{kp}, a^{kp+r} t^-1 -> a^r t^-1 a^{kq}, t t^-1, t^-1 t -> 1
/// with Euclidean remainders r.
BSWord rewrite_s(const BSSpec& spec, const BSWord& w);
BSWord nf_s(const BSSpec& spec, std::string_view w);

/// A single rewriting step, used to test confluence under random strategies.
struct SRedex {
  std::size_t t_index;  // the rule rewrites around tail[t_index]
  std::int64_t moved;   // signed suffix of the preceding a-run; 0 for a cancellation
};
std::vector<SRedex> s_redexes(const BSSpec& spec, const BSWord& w, std::size_t max_per_run = 8);
BSWord apply_redex(const BSSpec& spec, const BSWord& w, const SRedex& r);
/// Applies randomly chosen redexes until none is left.
BSWord rewrite_s_random(const BSSpec& spec, BSWord w, std::mt19937_64& rng);

/// Britton rules t a^{kp} t^-1 -> a^{kq}, t^-1 a^{kq} t -> a^{kp} to a fixpoint.
BSWord britton_reduce(const BSSpec& spec, const BSWord& w);
bool is_britton_reduced(const BSSpec& spec, const BSWord& w);

struct CyclicReduction {
  BSWord reduced;     // cyclically Britton-reduced
  BSWord conjugator;  // reduced = conjugator * w * conjugator^-1
};
CyclicReduction cyclically_britton_reduce(const BSSpec& spec, const BSWord& w);
bool is_cyclically_britton_reduced(const BSSpec& spec, const BSWord& w);

std::vector<int> t_sequence(const BSWord& w);

struct AlphaBeta {
  BSWord alpha;
  std::int64_t beta;
};
/// nf_S(x) = alpha a^beta with alpha ending in a t-letter (or empty).
AlphaBeta alpha_beta(const BSSpec& spec, const BSWord& x);

/// (p + q != 0) and (p = 1 or p, q both odd). Throws std::invalid_argument
/// unless 1 <= p <= |q|.
bool has_fsqrt(std::int64_t p, std::int64_t q);

struct SqrtWitness {
  BSWord x;
  BSWord g;
};
/// x_n with x_n^2 = g and pairwise distinct x_n. Throws std::domain_error
/// ("square roots are finite") when has_fsqrt(p, q).
SqrtWitness infinite_sqrt_witness(const BSSpec& spec, std::size_t n);

/// Normal forms of all Britton-reduced x with t-length <= t_bound and every
/// a-exponent in [-a_bound, a_bound] such that x^2 = g.
std::set<BSWord> square_roots_bounded(const BSSpec& spec, const BSWord& g, std::size_t t_bound,
                                      std::int64_t a_bound);

struct BSPumped {
  std::size_t n;
  BSWord nf;
  std::uint64_t exp;
};
/// nf_S(u w^n v) and its exponent of periodicity for 0 <= n <= n_max.
/// Throws std::invalid_argument if w = 1.
std::vector<BSPumped> pump_nf_family(const BSSpec& spec, const BSWord& u, const BSWord& w,
                                     const BSWord& v, std::size_t n_max);

/// Group oracle with nf = nf_S over generators a, A, t, T. Square roots use
/// square_roots_bounded with t_bound = t-length of g and
/// a_bound = max(|q|, 2 * max |exponent of nf_S(g)|); they are available only
/// when has_fsqrt(p, q).
MonoidOracle bs_oracle(const BSSpec& spec);
Element bs_encode(const BSWord& w);
BSWord bs_decode(const Element& e);

}  // namespace perex
