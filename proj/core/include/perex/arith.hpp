#pragma once

#include <cstdint>
#include <stdexcept>

namespace perex {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

/// Euclidean division: a = q * b + r with 0 <= r < |b|.
struct DivMod {
  std::int64_t quot;
  std::int64_t rem;
};

inline DivMod euclid_divmod(std::int64_t a, std::int64_t b) {
  if (b == 0) throw std::domain_error("division by zero");
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  if (r < 0) {
    if (b > 0) {
      q -= 1;
      r += b;
    } else {
      q += 1;
      r -= b;
    }
  }
  return {q, r};
}

}  // namespace perex
