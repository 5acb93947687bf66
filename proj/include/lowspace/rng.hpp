#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>

#include "errors.hpp"
#include "field.hpp"
#include "poly_eval.hpp"

namespace lowspace {

// SplitMix64 output function; also used to derive independent stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Eight interleaved xoshiro256** generators (Blackman & Vigna); word i of the
// stream comes from lane i mod 8. A one-way stream of random words: the
// algorithms only ever read forward. Bulk fills use AVX-512 when available
// and produce the same words as the scalar path.
class bit_stream {
 public:
  using result_type = std::uint64_t;
  static constexpr std::size_t lanes = 8;

  explicit bit_stream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& row : state_)
      for (auto& w : row) {
        sm += 0x9e3779b97f4a7c15ULL;
        w = mix64(sm);
      }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == lanes) {
      step(buf_, 1, 0);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  // The next `count` words of the stream.
  void fill(std::uint64_t* out, std::size_t count) noexcept { fill_shifted(out, count, 0); }

  // Same, each word shifted right by `shift` < 64. Returns whether any output
  // equals max() >> shift.
  bool fill_shifted(std::uint64_t* out, std::size_t count, int shift) noexcept {
    const std::uint64_t top = max() >> shift;
    bool saturated = false;
    while (count > 0 && pos_ < lanes) {
      *out = buf_[pos_++] >> shift;
      saturated |= *out++ == top;
      --count;
    }
    const std::size_t blocks = count / lanes;
    if (blocks > 0) {
      saturated |= step(out, blocks, shift);
      out += blocks * lanes;
      count -= blocks * lanes;
    }
    for (; count > 0; --count) {
      *out = (*this)() >> shift;
      saturated |= *out++ == top;
    }
    return saturated;
  }

  // Words of generator state held by a trial.
  static constexpr std::size_t state_words = 4 * lanes + lanes + 1;

 private:
  static std::uint64_t rotl(std::uint64_t v, int r) noexcept { return std::rotl(v, r); }

  // Writes blocks * lanes words; reports a saturated output as above.
  bool step(std::uint64_t* out, std::size_t blocks, int shift) noexcept {
#ifdef LOWSPACE_HAVE_AVX512_KERNEL
    if (detail::cpu_has_avx512()) return step_avx512(out, blocks, shift);
#endif
    const std::uint64_t top = max() >> shift;
    bool saturated = false;
    for (std::size_t b = 0; b < blocks; ++b, out += lanes) {
      for (std::size_t j = 0; j < lanes; ++j) {
        std::uint64_t* s0 = &state_[0][j];
        std::uint64_t* s1 = &state_[1][j];
        std::uint64_t* s2 = &state_[2][j];
        std::uint64_t* s3 = &state_[3][j];
        out[j] = (rotl(*s1 * 5, 7) * 9) >> shift;
        saturated |= out[j] == top;
        const std::uint64_t t = *s1 << 17;
        *s2 ^= *s0;
        *s3 ^= *s1;
        *s1 ^= *s2;
        *s0 ^= *s3;
        *s2 ^= t;
        *s3 = rotl(*s3, 45);
      }
    }
    return saturated;
  }

#ifdef LOWSPACE_HAVE_AVX512_KERNEL
  __attribute__((target("avx512f"))) bool step_avx512(std::uint64_t* out, std::size_t blocks,
                                                      int shift) noexcept {
    const __m512i top = _mm512_set1_epi64(static_cast<long long>(max() >> shift));
    const __m128i count = _mm_cvtsi32_si128(shift);
    __mmask8 saturated = 0;
    __m512i s0 = _mm512_loadu_si512(state_[0]);
    __m512i s1 = _mm512_loadu_si512(state_[1]);
    __m512i s2 = _mm512_loadu_si512(state_[2]);
    __m512i s3 = _mm512_loadu_si512(state_[3]);
    for (std::size_t b = 0; b < blocks; ++b, out += lanes) {
      const __m512i r = _mm512_rol_epi64(_mm512_add_epi64(s1, _mm512_slli_epi64(s1, 2)), 7);
      const __m512i w = _mm512_srl_epi64(_mm512_add_epi64(r, _mm512_slli_epi64(r, 3)), count);
      saturated |= _mm512_cmpeq_epu64_mask(w, top);
      _mm512_storeu_si512(out, w);
      const __m512i t = _mm512_slli_epi64(s1, 17);
      s2 = _mm512_xor_si512(s2, s0);
      s3 = _mm512_xor_si512(s3, s1);
      s1 = _mm512_xor_si512(s1, s2);
      s0 = _mm512_xor_si512(s0, s3);
      s2 = _mm512_xor_si512(s2, t);
      s3 = _mm512_rol_epi64(s3, 45);
    }
    _mm512_storeu_si512(state_[0], s0);
    _mm512_storeu_si512(state_[1], s1);
    _mm512_storeu_si512(state_[2], s2);
    _mm512_storeu_si512(state_[3], s3);
    return saturated != 0;
  }
#endif

  std::uint64_t state_[4][lanes];
  std::uint64_t buf_[lanes] = {};
  std::size_t pos_ = lanes;
};

// Stream for sub-task (a, b) of purpose `tag` under a master seed. Trials
// derive their own stream by counter, so runs replay bit-exactly regardless of
// how trials are distributed over workers.
inline bit_stream derive_stream(std::uint64_t master, std::uint64_t tag, std::uint64_t a,
                                std::uint64_t b = 0) noexcept {
  std::uint64_t key = mix64(master ^ mix64(tag + 0x632be59bd9b4e019ULL));
  key = mix64(key + a * 0x9e3779b97f4a7c15ULL);
  key = mix64(key ^ (b + 0xd1b54a32d192ed03ULL));
  return bit_stream(key);
}

// Unbiased draw from [0, bound) (Lemire's multiply-shift with rejection).
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw parameter_error("uniform_below: empty range");
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Uniform element of F_p.
template <prime_field F, class Rng>
std::uint64_t uniform_field_element(Rng& rng) {
  if constexpr (std::is_same_v<F, mersenne61>) {
    for (;;) {
      const std::uint64_t v = rng() >> 3;
      if (v != F::modulus) return v;
    }
  } else {
    return uniform_below(rng, F::modulus);
  }
}

// out[i] uniform in F_p, filled in stream order.
template <prime_field F, class Rng>
void fill_field_elements(Rng& rng, std::span<std::uint64_t> out) {
  if constexpr (std::is_same_v<F, mersenne61> &&
                requires(std::uint64_t* w, std::size_t c) { rng.fill_shifted(w, c, 3); }) {
    if (rng.fill_shifted(out.data(), out.size(), 3))
      for (auto& v : out)
        while (v == F::modulus) v = rng() >> 3;
  } else {
    for (auto& v : out) v = uniform_field_element<F>(rng);
  }
}

}  // namespace lowspace
