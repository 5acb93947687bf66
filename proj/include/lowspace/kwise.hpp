#pragma once

// k-wise independent hash functions: uniformly random polynomials of degree
// at most k-1 over a prime field. Any k distinct points receive jointly
// uniform field values.

#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "poly_eval.hpp"
#include "rng.hpp"
#include "wire.hpp"

namespace lowspace {

enum class range_kind : std::uint8_t { bit = 0, index = 1 };

// Output range of a k-wise function: {0,1} or [1, n].
struct output_range {
  range_kind kind = range_kind::bit;
  std::uint64_t n = 0;  // only meaningful for index

  static constexpr output_range bit() noexcept { return {range_kind::bit, 0}; }
  static output_range index(std::uint64_t n) {
    if (n == 0) throw parameter_error("index range needs n >= 1");
    return {range_kind::index, n};
  }

  friend bool operator==(const output_range&, const output_range&) = default;
};

// Low-order bit of a field value.
constexpr int bit_from_field(std::uint64_t v) noexcept { return static_cast<int>(v & 1); }

// 1 + (v mod n). Bias relative to uniform is at most n/p per target.
inline std::uint64_t index_from_field(std::uint64_t v, std::uint64_t n) {
  if (n == 0) throw parameter_error("index range needs n >= 1");
  return 1 + v % n;
}

template <prime_field F = mersenne61>
class kwise_seed {
 public:
  using field = F;

  kwise_seed(std::vector<std::uint64_t> coeffs, output_range range,
             std::uint64_t domain_bound = F::modulus)
      : coeffs_(std::move(coeffs)), range_(range), domain_bound_(domain_bound) {
    if (coeffs_.empty()) throw parameter_error("k-wise seed needs k >= 1");
    if (range_.kind == range_kind::index && range_.n == 0)
      throw parameter_error("index range needs n >= 1");
    if (domain_bound_ == 0 || domain_bound_ > F::modulus)
      throw parameter_error("domain bound must lie in [1, p]");
    for (auto c : coeffs_)
      if (c >= F::modulus) throw parameter_error("coefficient outside the field");
  }

  std::size_t k() const noexcept { return coeffs_.size(); }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  output_range range() const noexcept { return range_; }
  std::uint64_t domain_bound() const noexcept { return domain_bound_; }

  // Stored words: coefficients plus the (k, kind, n) header.
  std::size_t word_count() const noexcept { return coeffs_.size() + 3; }

  // Redraw every coefficient in place from the stream (no allocation).
  template <class Rng>
  void resample(Rng& rng) {
    fill_field_elements<F>(rng, std::span<std::uint64_t>(coeffs_));
  }

  // Polynomial value without the domain check.
  std::uint64_t value_at(std::uint64_t x) const noexcept {
    if constexpr (std::is_same_v<F, mersenne61>)
      return detail::eval_mersenne(coeffs_, x);
    else
      return horner<F>(coeffs_, x);
  }

  // Same, with x's powers prepared once for several seeds of equal k.
  std::uint64_t value_at(const detail::eval_point& pt) const noexcept {
    if constexpr (std::is_same_v<F, mersenne61>)
      return detail::eval_mersenne(coeffs_, pt);
    else
      return horner<F>(coeffs_, pt.x);
  }

  friend bool operator==(const kwise_seed&, const kwise_seed&) = default;

 private:
  std::vector<std::uint64_t> coeffs_;
  output_range range_;
  std::uint64_t domain_bound_;
};

template <prime_field F = mersenne61, class Rng>
kwise_seed<F> sample_kwise(std::size_t k, output_range range, Rng& rng,
                           std::uint64_t domain_bound = F::modulus) {
  if (k == 0) throw parameter_error("sample_kwise: k must be >= 1");
  std::vector<std::uint64_t> coeffs(k);
  for (auto& c : coeffs) c = uniform_field_element<F>(rng);
  return kwise_seed<F>(std::move(coeffs), range, domain_bound);
}

template <prime_field F>
std::uint64_t eval_field(const kwise_seed<F>& seed, std::uint64_t x) {
  if (x >= seed.domain_bound())
    throw domain_error("eval_field: x = " + std::to_string(x) + " outside domain");
  return seed.value_at(x);
}

template <prime_field F>
int eval_bit(const kwise_seed<F>& seed, std::uint64_t x) {
  if (seed.range().kind != range_kind::bit) throw usage_error("eval_bit on an index-range seed");
  return bit_from_field(eval_field(seed, x));
}

template <prime_field F>
std::uint64_t eval_index(const kwise_seed<F>& seed, std::uint64_t x) {
  if (seed.range().kind != range_kind::index)
    throw usage_error("eval_index on a bit-range seed");
  return index_from_field(eval_field(seed, x), seed.range().n);
}

// Wire format: little-endian 8-byte words k, kind, n, then the k coefficients.
template <prime_field F>
void serialize(const kwise_seed<F>& seed, std::vector<std::uint8_t>& out) {
  wire::put_u64(out, seed.k());
  wire::put_u64(out, static_cast<std::uint64_t>(seed.range().kind));
  wire::put_u64(out, seed.range().n);
  for (auto c : seed.coeffs()) wire::put_u64(out, c);
}

template <prime_field F = mersenne61>
kwise_seed<F> read_kwise(wire::reader& in, std::uint64_t domain_bound = F::modulus) {
  const std::uint64_t k = in.u64();
  const std::uint64_t kind = in.u64();
  const std::uint64_t n = in.u64();
  if (kind > 1) throw format_error("unknown range kind");
  if (kind == 1 && n == 0) throw format_error("index range with n = 0");
  if (k == 0 || k > in.remaining() / 8) throw format_error("bad coefficient count");
  std::vector<std::uint64_t> coeffs(k);
  for (auto& c : coeffs) {
    c = in.u64();
    if (c >= F::modulus) throw format_error("coefficient outside the field");
  }
  const output_range range = kind == 0 ? output_range::bit() : output_range::index(n);
  return kwise_seed<F>(std::move(coeffs), range, domain_bound);
}

}  // namespace lowspace
