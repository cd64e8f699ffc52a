#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace perex {

/// A word over a finite alphabet of single-character letters.
using Word = std::string;

/// Largest e such that w = u p^e v with p nonempty; 0 for the empty word.
///
/// Works on any random-access sequence whose elements compare with ==.
/// For each period length l one left-to-right scan tracks the current run of
/// positions j with w[j] == w[j - l]; a run of length r certifies a factor
/// with floor((r + l) / l) repetitions of a length-l block.
template <class Seq>
std::size_t exponent_of_periodicity(const Seq& w) {
  const std::size_t n = std::size(w);
  if (n == 0) return 0;
  std::size_t best = 1;
  for (std::size_t len = 1; 2 * len <= n; ++len) {
    // a period of length len cannot beat `best` if the word is too short
    if ((best + 1) * len > n) break;
    std::size_t run = 0;
    for (std::size_t j = len; j < n; ++j) {
      if (w[j] == w[j - len]) {
        ++run;
        const std::size_t reps = (run + len) / len;
        if (reps > best) best = reps;
      } else {
        run = 0;
      }
    }
  }
  return best;
}

std::size_t exponent_of_periodicity(std::string_view w);

/// exp of every prefix: result[k] = exp(w[0..k)). O(|w|^2) total.
template <class Seq>
std::vector<std::size_t> prefix_exponents(const Seq& w) {
  const std::size_t n = std::size(w);
  std::vector<std::size_t> out(n + 1, 0);
  // run[l] = current number of consecutive matches w[j] == w[j-l] ending at j
  std::vector<std::size_t> run(n + 1, 0);
  std::size_t best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (best == 0) best = 1;
    for (std::size_t len = 1; len <= j; ++len) {
      if (w[j] == w[j - len]) {
        ++run[len];
        const std::size_t reps = (run[len] + len) / len;
        if (reps > best) best = reps;
      } else {
        run[len] = 0;
      }
    }
    out[j + 1] = best;
  }
  return out;
}

/// Maximal block of equal letters.
struct Run {
  char letter;
  std::uint64_t length;
  friend bool operator==(const Run&, const Run&) = default;
};

std::vector<Run> run_length_encode(std::string_view w);

/// exp of the word described by `runs` (adjacent runs must have distinct
/// letters and positive lengths), in O(r^2) for r runs independent of the
/// run lengths. Throws std::overflow_error if the total length exceeds 2^64.
std::uint64_t exponent_of_periodicity_rle(std::span<const Run> runs);

/// Length-n prefix of the fixed point of a -> ab, b -> ba.
Word thue_morse_prefix(std::size_t n);

/// Letter-to-word substitution. Images must be nonempty.
using Morphism = std::map<char, Word>;

/// Homomorphic image of w. Throws std::invalid_argument for a letter outside
/// the domain of h or an empty image.
Word apply_morphism(const Morphism& h, std::string_view w);

/// True iff no image is a prefix of another image (and images are distinct
/// and nonempty), which makes h injective.
bool is_prefix_code(const Morphism& h);

/// max |h(a)| over the domain; 0 for the empty morphism.
std::size_t max_image_length(const Morphism& h);

/// Minimum exp over sample words with |w| >= threshold; nullopt when no word
/// qualifies.
std::optional<std::size_t> min_exp_at_length(std::span<const Word> sample,
                                              std::size_t length_threshold);

}  // namespace perex
