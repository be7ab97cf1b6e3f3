#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace gapforge {

using BigInt = mpz_class;

inline std::string to_decimal(const BigInt& value) { return value.get_str(10); }

// Throws ValidationError on malformed input.
BigInt parse_decimal(const std::string& text);

inline BigInt big_from_u64(std::uint64_t value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
  return out;
}

inline bool fits_u64(const BigInt& value) {
  return sgn(value) >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64;
}

// Precondition: fits_u64(value).
inline std::uint64_t big_to_u64(const BigInt& value) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

// value mod m for a nonnegative value and m > 0.
inline std::uint64_t mod_u64(const BigInt& value, std::uint64_t m) {
  return mpz_fdiv_ui(value.get_mpz_t(), m);
}

}  // namespace gapforge
