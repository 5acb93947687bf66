#pragma once

// The pseudorandom hash family built by l-level iterative restriction.
//
// Level i holds a gate g_i: [m] -> {0,1} and a target r_i: [m] -> [n], both
// tau-wise independent and drawn independently. h(x) = r_j(x) for the first
// level j whose gate fires, and h(x) = star when no gate fires.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "kwise.hpp"
#include "wire.hpp"

namespace lowspace {

// ceil(log2 x) for x >= 1.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
  return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

struct prf_params {
  std::uint64_t n = 0;      // vertices
  std::uint64_t m = 0;      // values lie in [1, m]
  unsigned levels = 0;      // l
  unsigned tau = 0;         // independence of every g_i and r_i

  // Largest admissible level count: ceil(log2 n), at least 1 so that n = 1 works.
  static constexpr unsigned max_levels(std::uint64_t n) noexcept {
    return std::max(1u, ceil_log2(n));
  }

  // tau = 20 * ceil(log2 n) * ceil(log2 log2 n), never below 2.
  static constexpr unsigned standard_tau(std::uint64_t n) noexcept {
    const unsigned lg = ceil_log2(n);
    const unsigned lglg = ceil_log2(lg);
    return std::max(2u, 20u * lg * lglg);
  }

  static prf_params standard(std::uint64_t n, std::uint64_t m, unsigned levels) {
    prf_params p{n, m, levels, standard_tau(n)};
    p.validate();
    return p;
  }

  template <prime_field F = mersenne61>
  void validate() const {
    if (n == 0) throw parameter_error("prf: n must be >= 1");
    if (m == 0 || m >= F::modulus) throw parameter_error("prf: m must lie in [1, p-1]");
    if (levels == 0 || levels > max_levels(n))
      throw parameter_error("prf: levels must lie in [1, ceil(log2 n)], got " +
                            std::to_string(levels));
    if (tau == 0) throw parameter_error("prf: tau must be >= 1");
  }

  friend bool operator==(const prf_params&, const prf_params&) = default;
};

// Defined(v) with v in [1, n], or star.
class hash_value {
 public:
  static constexpr hash_value star() noexcept { return hash_value(0); }
  static constexpr hash_value defined(std::uint64_t v) noexcept { return hash_value(v); }

  constexpr bool is_star() const noexcept { return v_ == 0; }
  constexpr std::uint64_t value() const noexcept { return v_; }

  friend constexpr bool operator==(hash_value, hash_value) = default;

 private:
  explicit constexpr hash_value(std::uint64_t v) : v_(v) {}
  std::uint64_t v_;
};

template <prime_field F = mersenne61>
struct prf_level {
  kwise_seed<F> gate;    // g_i, bit range
  kwise_seed<F> target;  // r_i, index range

  friend bool operator==(const prf_level&, const prf_level&) = default;
};

template <prime_field F = mersenne61>
class prf_seed {
 public:
  using field = F;

  prf_seed(prf_params params, std::vector<prf_level<F>> levels)
      : params_(params), levels_(std::move(levels)) {
    params_.template validate<F>();
    if (levels_.size() != params_.levels) throw parameter_error("prf: wrong number of levels");
    for (const auto& lv : levels_) {
      if (lv.gate.range() != output_range::bit() ||
          lv.target.range() != output_range::index(params_.n))
        throw parameter_error("prf: level seeds have the wrong output range");
      if (lv.gate.k() != params_.tau || lv.target.k() != params_.tau)
        throw parameter_error("prf: level seeds must be tau-wise");
      if (lv.gate.domain_bound() != params_.m + 1 || lv.target.domain_bound() != params_.m + 1)
        throw parameter_error("prf: level seeds have the wrong domain");
    }
  }

  const prf_params& params() const noexcept { return params_; }
  const std::vector<prf_level<F>>& levels() const noexcept { return levels_; }
  std::vector<prf_level<F>>& mutable_levels() noexcept { return levels_; }

  std::size_t word_count() const noexcept {
    std::size_t words = 4;  // n, m, l, tau
    for (const auto& lv : levels_) words += lv.gate.word_count() + lv.target.word_count();
    return words;
  }

  // Redraw all 2l seeds in place, level by level, gate before target.
  template <class Rng>
  void resample(Rng& rng) {
    for (auto& lv : levels_) {
      lv.gate.resample(rng);
      lv.target.resample(rng);
    }
  }

  friend bool operator==(const prf_seed&, const prf_seed&) = default;

 private:
  prf_params params_;
  std::vector<prf_level<F>> levels_;
};

template <prime_field F = mersenne61, class Rng>
prf_seed<F> sample_prf(const prf_params& params, Rng& rng) {
  params.template validate<F>();
  std::vector<prf_level<F>> levels;
  levels.reserve(params.levels);
  for (unsigned i = 0; i < params.levels; ++i) {
    auto gate = sample_kwise<F>(params.tau, output_range::bit(), rng, params.m + 1);
    auto target = sample_kwise<F>(params.tau, output_range::index(params.n), rng, params.m + 1);
    levels.push_back({std::move(gate), std::move(target)});
  }
  return prf_seed<F>(params, std::move(levels));
}

// h(x) together with the level that defined it (0 for star).
struct traced_hash {
  hash_value value;
  unsigned level;
};

// No range check on x; callers guarantee 1 <= x <= m.
template <prime_field F>
traced_hash eval_h_traced_unchecked(const prf_seed<F>& seed, std::uint64_t x) noexcept {
  const auto& levels = seed.levels();
  const detail::eval_point pt(x, seed.params().tau);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (bit_from_field(levels[j].gate.value_at(pt)) == 1) {
      const std::uint64_t v = 1 + levels[j].target.value_at(pt) % seed.params().n;
      return {hash_value::defined(v), static_cast<unsigned>(j + 1)};
    }
  }
  return {hash_value::star(), 0};
}

template <prime_field F>
hash_value eval_h_unchecked(const prf_seed<F>& seed, std::uint64_t x) noexcept {
  return eval_h_traced_unchecked(seed, x).value;
}

template <prime_field F>
traced_hash eval_h_traced(const prf_seed<F>& seed, std::uint64_t x) {
  if (x == 0 || x > seed.params().m)
    throw domain_error("eval_h: x = " + std::to_string(x) + " outside [1, m]");
  return eval_h_traced_unchecked(seed, x);
}

template <prime_field F>
hash_value eval_h(const prf_seed<F>& seed, std::uint64_t x) {
  return eval_h_traced(seed, x).value;
}

struct rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const rational&, const rational&) = default;
};

// Idealized Pr[h(x) = star] = 2^-l: l independent fair gates all read 0.
inline rational star_probability(unsigned levels) {
  if (levels == 0 || levels > 63) throw parameter_error("star_probability: l must lie in [1, 63]");
  return {1, std::uint64_t{1} << levels};
}

// Wire format: 16-byte header (n, m, l, tau as little-endian u32), then for
// each level the gate seed followed by the target seed.
template <prime_field F>
std::vector<std::uint8_t> serialize(const prf_seed<F>& seed) {
  const auto& p = seed.params();
  constexpr std::uint64_t u32max = 0xffffffffULL;
  if (p.n > u32max || p.m > u32max) throw parameter_error("prf seed too large to serialize");
  std::vector<std::uint8_t> out;
  wire::put_u32(out, static_cast<std::uint32_t>(p.n));
  wire::put_u32(out, static_cast<std::uint32_t>(p.m));
  wire::put_u32(out, p.levels);
  wire::put_u32(out, p.tau);
  for (const auto& lv : seed.levels()) {
    serialize(lv.gate, out);
    serialize(lv.target, out);
  }
  return out;
}

template <prime_field F = mersenne61>
prf_seed<F> deserialize_prf(std::span<const std::uint8_t> bytes) {
  wire::reader in(bytes);
  prf_params p;
  p.n = in.u32();
  p.m = in.u32();
  p.levels = in.u32();
  p.tau = in.u32();
  try {
    p.template validate<F>();
  } catch (const parameter_error& e) {
    throw format_error(std::string("bad prf header: ") + e.what());
  }
  std::vector<prf_level<F>> levels;
  for (unsigned i = 0; i < p.levels; ++i) {
    auto gate = read_kwise<F>(in, p.m + 1);
    auto target = read_kwise<F>(in, p.m + 1);
    levels.push_back({std::move(gate), std::move(target)});
  }
  if (!in.done()) throw format_error("trailing bytes after prf seed");
  try {
    return prf_seed<F>(p, std::move(levels));
  } catch (const parameter_error& e) {
    throw format_error(std::string("inconsistent prf seed: ") + e.what());
  }
}

}  // namespace lowspace
