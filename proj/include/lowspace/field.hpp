#pragma once

#include <concepts>
#include <cstdint>
#include <span>

namespace lowspace {

using u128 = unsigned __int128;

// Arithmetic in F_p for p = 2^61 - 1. Reduction is a shift and an add.
struct mersenne61 {
  static constexpr std::uint64_t modulus = (std::uint64_t{1} << 61) - 1;

  // Canonical residue of any 64-bit value.
  static constexpr std::uint64_t reduce(std::uint64_t x) noexcept {
    x = (x & modulus) + (x >> 61);
    return x >= modulus ? x - modulus : x;
  }

  static constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) noexcept {
    return reduce(a + b);
  }

  static constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) noexcept {
    const u128 prod = static_cast<u128>(a) * b;
    const std::uint64_t folded =
        (static_cast<std::uint64_t>(prod) & modulus) + static_cast<std::uint64_t>(prod >> 61);
    return reduce(folded);
  }
};

namespace detail {
constexpr bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}
}  // namespace detail

// Tiny prime fields, used to check independence properties by exhaustive enumeration.
template <std::uint64_t P>
  requires(detail::is_prime(P) && P < (std::uint64_t{1} << 31))
struct small_prime_field {
  static constexpr std::uint64_t modulus = P;
  static constexpr std::uint64_t reduce(std::uint64_t x) noexcept { return x % P; }
  static constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) noexcept {
    return (a + b) % P;
  }
  static constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) noexcept {
    return (a * b) % P;
  }
};

template <class F>
concept prime_field = requires(std::uint64_t a) {
  { F::modulus } -> std::convertible_to<std::uint64_t>;
  { F::reduce(a) } -> std::same_as<std::uint64_t>;
  { F::add(a, a) } -> std::same_as<std::uint64_t>;
  { F::mul(a, a) } -> std::same_as<std::uint64_t>;
};

template <prime_field F>
constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t result = 1 % F::modulus;
  base = F::reduce(base);
  while (exp != 0) {
    if (exp & 1) result = F::mul(result, base);
    base = F::mul(base, base);
    exp >>= 1;
  }
  return result;
}

// Reference evaluation: coeffs[0] + coeffs[1]*x + ... by Horner's rule.
template <prime_field F>
constexpr std::uint64_t horner(std::span<const std::uint64_t> coeffs, std::uint64_t x) noexcept {
  x = F::reduce(x);
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = F::add(F::mul(acc, x), coeffs[i]);
  return acc;
}

}  // namespace lowspace
