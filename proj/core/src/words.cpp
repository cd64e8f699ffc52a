#include "perex/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace perex {

std::size_t exponent_of_periodicity(std::string_view w) {
  return exponent_of_periodicity<std::string_view>(w);
}

std::vector<Run> run_length_encode(std::string_view w) {
  std::vector<Run> runs;
  for (char c : w) {
    if (!runs.empty() && runs.back().letter == c) {
      ++runs.back().length;
    } else {
      runs.push_back(Run{c, 1});
    }
  }
  return runs;
}

namespace {

std::uint64_t add_len(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("run lengths overflow");
  return r;
}

}  // namespace

std::uint64_t exponent_of_periodicity_rle(std::span<const Run> runs) {
  const std::size_t r = runs.size();
  std::uint64_t best = 0;
  std::vector<std::uint64_t> prefix(r + 1, 0);
  for (std::size_t i = 0; i < r; ++i) {
    prefix[i + 1] = add_len(prefix[i], runs[i].length);
    if (runs[i].length == 0 || (i > 0 && runs[i].letter == runs[i - 1].letter)) {
      throw std::invalid_argument("exponent_of_periodicity: runs are not maximal");
    }
    best = std::max(best, runs[i].length);
  }
  // A factor p^e whose period p is not a single-letter power has a run
  // sequence that is periodic with some run period k >= 2: its inner runs
  // repeat exactly and its two boundary runs are cut down to at most their
  // counterparts one period away.
  for (std::size_t k = 2; k < r; ++k) {
    const std::size_t pairs = r - k;
    std::vector<bool> eq(pairs);
    for (std::size_t x = 0; x < pairs; ++x) eq[x] = runs[x] == runs[x + k];
    for (std::size_t s = 0; s + k <= r; ++s) {
      if (s > 0 && s - 1 < pairs && eq[s - 1]) continue;  // not the start of a block
      std::size_t t = s;  // inner runs are s .. t + k - 1
      while (t < pairs && eq[t]) ++t;
      const std::size_t inner_end = t + k - 1;
      const std::uint64_t period = prefix[s + k] - prefix[s];
      std::uint64_t total = prefix[inner_end + 1] - prefix[s];
      if (s > 0 && runs[s - 1].letter == runs[s - 1 + k].letter) {
        total = add_len(total, std::min(runs[s - 1].length, runs[s - 1 + k].length));
      }
      const std::size_t j = inner_end + 1;
      if (j < r && runs[j].letter == runs[j - k].letter) {
        total = add_len(total, std::min(runs[j].length, runs[j - k].length));
      }
      best = std::max(best, total / period);
    }
  }
  return best;
}

Word thue_morse_prefix(std::size_t n) {
  Word out(n, 'a');
  // t[i] is the parity of the number of ones in the binary expansion of i
  for (std::size_t i = 0; i < n; ++i) {
    if (__builtin_popcountll(static_cast<unsigned long long>(i)) & 1) out[i] = 'b';
  }
  return out;
}

Word apply_morphism(const Morphism& h, std::string_view w) {
  Word out;
  for (char c : w) {
    auto it = h.find(c);
    if (it == h.end()) {
      throw std::invalid_argument(std::string("apply_morphism: letter '") + c +
                                  "' outside the domain");
    }
    if (it->second.empty()) {
      throw std::invalid_argument(std::string("apply_morphism: letter '") + c +
                                  "' maps to the empty word");
    }
    out += it->second;
  }
  return out;
}

bool is_prefix_code(const Morphism& h) {
  for (auto i = h.begin(); i != h.end(); ++i) {
    if (i->second.empty()) return false;
    for (auto j = h.begin(); j != h.end(); ++j) {
      if (i == j) continue;
      const Word& x = i->second;
      const Word& y = j->second;
      if (x.size() <= y.size() && y.compare(0, x.size(), x) == 0) return false;
    }
  }
  return true;
}

std::size_t max_image_length(const Morphism& h) {
  std::size_t m = 0;
  for (const auto& [letter, image] : h) m = std::max(m, image.size());
  return m;
}

std::optional<std::size_t> min_exp_at_length(std::span<const Word> sample,
                                              std::size_t length_threshold) {
  std::optional<std::size_t> best;
  for (const Word& w : sample) {
    if (w.size() < length_threshold) continue;
    const std::size_t e = exponent_of_periodicity(w);
    if (!best || e < *best) best = e;
  }
  return best;
}

}  // namespace perex
