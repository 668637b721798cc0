#pragma once

#include <cstdint>

namespace cbpd {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1;
  }
  return result;
}

// p prime.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

// A prime in [2^61, 2^62) drawn from a generator seeded with `seed`.
std::uint64_t random_prime_62(std::uint64_t seed);

}  // namespace cbpd
