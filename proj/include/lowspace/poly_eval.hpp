#pragma once

// Fast polynomial evaluation over F_{2^61-1}.
//
// The coefficient vector is split into `lanes` contiguous segments of length
// L, one Horner chain per segment, and the chains are recombined as
// sum_j y^j * acc_j with y = x^L (Estrin's scheme). Chains keep lazily
// reduced accumulators (always < 2^63), so each coefficient costs one
// multiply and a single fold. For x < 2^24 an AVX-512 kernel runs 32 chains
// using only 32x32-bit multiplies.
//
// All polynomials of one pseudorandom hash share the same degree and are
// evaluated at the same x, so the powers of y are computed once per point.

#include <cstddef>
#include <cstdint>
#include <span>

#include "field.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define LOWSPACE_HAVE_AVX512_KERNEL 1
#endif

namespace lowspace::detail {

inline constexpr std::uint64_t kLazyLimit = std::uint64_t{1} << 60;
inline constexpr std::uint64_t kVectorLimit = std::uint64_t{1} << 24;
inline constexpr std::size_t kVectorMinDegree = 128;
inline constexpr std::size_t kScalarLanes = 8;
inline constexpr std::size_t kVectorLanes = 32;

#ifdef LOWSPACE_HAVE_AVX512_KERNEL
inline bool cpu_has_avx512() noexcept {
  static const bool supported = __builtin_cpu_supports("avx512f") != 0;
  return supported;
}
#else
constexpr bool cpu_has_avx512() noexcept { return false; }
#endif

enum class eval_path { horner, scalar, vector };

// x prepared for evaluating polynomials with k coefficients.
struct eval_point {
  std::uint64_t x = 0;
  std::size_t k = 0;
  eval_path path = eval_path::horner;
  std::size_t lanes = 1;
  std::size_t seg_len = 0;
  std::uint64_t powers[5] = {};  // y^(2^w), y = x^seg_len

  eval_point() = default;
  eval_point(std::uint64_t x_, std::size_t k_) noexcept : eval_point(x_, k_, best_path(x_, k_)) {}

  // Uses `requested` when it is valid for (x, k), else Horner.
  eval_point(std::uint64_t x_, std::size_t k_, eval_path requested) noexcept : x(x_), k(k_) {
    if (requested == eval_path::horner || x >= kLazyLimit || k < 2 * kScalarLanes) return;
    if (requested == eval_path::vector && (x >= kVectorLimit || !cpu_has_avx512())) return;
    path = requested;
    lanes = requested == eval_path::vector ? kVectorLanes : kScalarLanes;
    seg_len = (k + lanes - 1) / lanes;
    powers[0] = pow_mod<mersenne61>(x, seg_len);
    for (int w = 1; w < 5; ++w) powers[w] = mersenne61::mul(powers[w - 1], powers[w - 1]);
  }

  static eval_path best_path(std::uint64_t x, std::size_t k) noexcept {
    if (x < kVectorLimit && k >= kVectorMinDegree && cpu_has_avx512()) return eval_path::vector;
    return eval_path::scalar;
  }
};

// sum_j y^j * acc[j] for lanes a power of two <= 32; acc is clobbered.
inline std::uint64_t combine_segments(std::uint64_t* acc, std::size_t lanes,
                                      const std::uint64_t* powers) noexcept {
  for (std::size_t j = 0; j < lanes; ++j) acc[j] = mersenne61::reduce(acc[j]);
  for (int w = 0; lanes > 1; ++w, lanes /= 2)
    for (std::size_t i = 0; i < lanes / 2; ++i)
      acc[i] = mersenne61::add(acc[2 * i], mersenne61::mul(powers[w], acc[2 * i + 1]));
  return acc[0];
}

// Requires x < 2^60.
inline std::uint64_t eval_segmented_scalar(std::span<const std::uint64_t> c,
                                           const eval_point& pt) noexcept {
  constexpr std::size_t lanes = kScalarLanes;
  constexpr std::uint64_t p = mersenne61::modulus;
  const std::size_t k = c.size();
  const std::size_t seg_len = pt.seg_len;
  const std::uint64_t x = pt.x;
  std::uint64_t acc[lanes] = {};
  for (std::size_t t = seg_len; t-- > 0;) {
    for (std::size_t j = 0; j < lanes; ++j) {
      const std::size_t idx = j * seg_len + t;
      const std::uint64_t coeff = idx < k ? c[idx] : 0;
      const u128 prod = static_cast<u128>(acc[j]) * x;
      acc[j] = (static_cast<std::uint64_t>(prod) & p) + static_cast<std::uint64_t>(prod >> 61) +
               coeff;
    }
  }
  return combine_segments(acc, lanes, pt.powers);
}

#ifdef LOWSPACE_HAVE_AVX512_KERNEL
// acc * x + coeff with the lazy bound acc < 2^63 kept; indices >= k read as 0.
//   acc * x = lo + th * 2^32,  th * 2^32 = (th mod 2^29) * 2^32 + (th >> 29) * 2^61
// and 2^61 = 1 (mod p).
__attribute__((target("avx512f"), always_inline)) inline __m512i avx512_chain_step(
    __m512i acc, __m512i idx, __m512i xv, __m512i kv, const long long* base) noexcept {
  const __m512i low29 = _mm512_set1_epi64((1LL << 29) - 1);
  const __mmask8 valid = _mm512_cmplt_epu64_mask(idx, kv);
  const __m512i coeff = _mm512_mask_i64gather_epi64(_mm512_setzero_si512(), valid, idx, base, 8);
  const __m512i lo = _mm512_add_epi64(_mm512_mul_epu32(acc, xv), coeff);
  const __m512i th = _mm512_mul_epu32(_mm512_srli_epi64(acc, 32), xv);
  const __m512i hi = _mm512_add_epi64(_mm512_slli_epi64(_mm512_and_si512(th, low29), 32),
                                      _mm512_srli_epi64(th, 29));
  return _mm512_add_epi64(lo, hi);
}

// Requires x < 2^24.
__attribute__((target("avx512f"))) inline std::uint64_t eval_segmented_avx512(
    std::span<const std::uint64_t> c, const eval_point& pt) noexcept {
  constexpr int vectors = kVectorLanes / 8;
  const std::size_t k = c.size();
  const std::size_t seg_len = pt.seg_len;
  const auto* base = reinterpret_cast<const long long*>(c.data());
  const auto top = [seg_len](std::size_t j) {
    return static_cast<long long>(j * seg_len + seg_len - 1);
  };

  const __m512i xv = _mm512_set1_epi64(static_cast<long long>(pt.x));
  const __m512i kv = _mm512_set1_epi64(static_cast<long long>(k));
  const __m512i one = _mm512_set1_epi64(1);
  __m512i idx[vectors];
  __m512i acc[vectors];
  for (int v = 0; v < vectors; ++v) {
    const std::size_t j = 8 * static_cast<std::size_t>(v);
    idx[v] = _mm512_set_epi64(top(j + 7), top(j + 6), top(j + 5), top(j + 4), top(j + 3),
                              top(j + 2), top(j + 1), top(j));
    acc[v] = _mm512_setzero_si512();
  }

  for (std::size_t t = seg_len; t-- > 0;) {
    for (int v = 0; v < vectors; ++v) {
      acc[v] = avx512_chain_step(acc[v], idx[v], xv, kv, base);
      idx[v] = _mm512_sub_epi64(idx[v], one);
    }
  }

  alignas(64) std::uint64_t out[kVectorLanes];
  for (int v = 0; v < vectors; ++v) _mm512_store_si512(reinterpret_cast<void*>(out + 8 * v), acc[v]);
  return combine_segments(out, kVectorLanes, pt.powers);
}
#endif

// Value at pt.x of the polynomial with coefficients c (constant term first).
// Requires c.size() == pt.k.
inline std::uint64_t eval_mersenne(std::span<const std::uint64_t> c, const eval_point& pt) noexcept {
  switch (pt.path) {
    case eval_path::horner: return horner<mersenne61>(c, pt.x);
    case eval_path::scalar: return eval_segmented_scalar(c, pt);
    case eval_path::vector:
#ifdef LOWSPACE_HAVE_AVX512_KERNEL
      return eval_segmented_avx512(c, pt);
#else
      break;
#endif
  }
  return horner<mersenne61>(c, pt.x);
}

inline std::uint64_t eval_mersenne(std::span<const std::uint64_t> c, std::uint64_t x) noexcept {
  return eval_mersenne(c, eval_point(x, c.size()));
}

}  // namespace lowspace::detail
