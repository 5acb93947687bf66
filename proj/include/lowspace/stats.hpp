#pragma once

// Monte Carlo estimates of walk probabilities under the pseudorandom family
// and under an idealized random oracle, plus the scaling benchmark.
//
// Every sample i reads its own stream derived from (seed, purpose, i), so an
// estimate is reproducible bit-exactly and independent of the worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "instances.hpp"
#include "kwise.hpp"
#include "prf.hpp"
#include "rng.hpp"
#include "solvers.hpp"
#include "walk.hpp"

namespace lowspace {

inline constexpr std::uint64_t kMinSamples = 1000;

struct estimate {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  double point = 0;
  double ci_lo = 0;  // 95% normal approximation, clipped to [0, 1]
  double ci_hi = 0;

  // Binomial standard error of the point estimate.
  double sigma() const noexcept {
    return samples == 0 ? 0 : std::sqrt(point * (1 - point) / static_cast<double>(samples));
  }
};

inline estimate make_estimate(std::uint64_t hits, std::uint64_t samples) {
  if (samples == 0) throw parameter_error("estimate: no samples");
  if (hits > samples) throw parameter_error("estimate: more hits than samples");
  estimate e;
  e.hits = hits;
  e.samples = samples;
  e.point = static_cast<double>(hits) / static_cast<double>(samples);
  const double half = 1.959963984540054 * e.sigma();
  e.ci_lo = std::max(0.0, e.point - half);
  e.ci_hi = std::min(1.0, e.point + half);
  return e;
}

enum class oracle_kind { pseudorandom, random_oracle };

// How h is drawn per sample. Pseudorandom uses prf_params::standard(n, m, l)
// unless tau is given.
struct oracle_mode {
  oracle_kind kind = oracle_kind::pseudorandom;
  unsigned tau = 0;

  static oracle_mode pseudorandom(unsigned tau = 0) { return {oracle_kind::pseudorandom, tau}; }
  static oracle_mode random_oracle() { return {oracle_kind::random_oracle, 0}; }
};

struct estimate_options {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// Truly random h : [1, m] -> [n] u {star} with Pr[star] = 2^-l, stored as a
// lazily filled table. The entry for y is drawn from a stream keyed by
// (trial key, y), so answers do not depend on query order. Uses O(m) words:
// baseline only, never used by the solvers.
class random_oracle_table {
 public:
  random_oracle_table(std::uint64_t n, std::uint64_t m, unsigned levels)
      : n_(n), levels_(levels), value_(m + 1), stamp_(m + 1, 0) {
    if (n == 0 || m == 0) throw parameter_error("random oracle: n and m must be >= 1");
    if (levels == 0 || levels > 63) throw parameter_error("random oracle: levels must lie in [1, 63]");
  }

  // Forget all entries; the next queries answer from key.
  void reset(std::uint64_t key) {
    key_ = key;
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  hash_value operator()(std::uint64_t y) {
    if (y == 0 || y >= stamp_.size()) throw domain_error("random oracle: query outside [1, m]");
    if (stamp_[y] != epoch_) {
      stamp_[y] = epoch_;
      auto rng = derive_stream(key_, 0x0a11ce, y);
      const bool star = (rng() >> (64 - levels_)) == 0;
      value_[y] = star ? 0 : 1 + uniform_below(rng, n_);
    }
    return value_[y] == 0 ? hash_value::star() : hash_value::defined(value_[y]);
  }

 private:
  std::uint64_t n_;
  unsigned levels_;
  std::uint64_t key_ = 0;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint64_t> value_;
  std::vector<std::uint32_t> stamp_;
};

namespace detail {

enum : std::uint64_t { kTagVisit = 0x7151, kTagPair = 0x9a12, kTagStar = 0x57a2 };

// Marks vertices of the current walk; clearing is O(1).
class visit_marks {
 public:
  explicit visit_marks(std::uint64_t n) : stamp_(n + 1, 0) {}
  void clear() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  // True if x was not yet marked.
  bool mark(vertex x) {
    if (stamp_[x] == epoch_) return false;
    stamp_[x] = epoch_;
    return true;
  }

 private:
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> stamp_;
};

// Walks f*(s) and reports whether every target was visited; stops early once
// they all are.
template <class Next>
bool walk_hits(std::uint64_t n, Next&& next, vertex s, const std::vector<vertex>& targets,
               visit_marks& marks) {
  marks.clear();
  std::size_t found = 0;
  auto visit = [&](vertex x) {
    if (!marks.mark(x)) return false;
    for (vertex t : targets) found += t == x;
    return true;
  };
  visit(s);
  vertex cur = s;
  for (std::uint64_t step = 0; found < targets.size() && step <= n; ++step) {
    const hash_value h = next(cur);
    if (h.is_star()) break;
    cur = h.value();
    if (!visit(cur)) break;
  }
  return found == targets.size();
}

// Runs sample(i, state) for i in [0, samples) over `workers` threads, each
// with its own state from make_state(); returns the number of true results.
template <class MakeState, class Sample>
std::uint64_t count_hits(std::uint64_t samples, unsigned workers, MakeState&& make_state,
                         Sample&& sample) {
  if (workers <= 1) {
    auto state = make_state();
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) hits += sample(i, state) ? 1 : 0;
    return hits;
  }
  std::vector<std::uint64_t> hits(workers, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        auto state = make_state();
        for (std::uint64_t i = w; i < samples; i += workers) hits[w] += sample(i, state) ? 1 : 0;
      });
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return total;
}

inline void check_samples(std::uint64_t samples) {
  if (samples < kMinSamples)
    throw parameter_error("estimates need at least " + std::to_string(kMinSamples) + " samples");
}

inline prf_params mode_params(const oracle_mode& mode, std::uint64_t n, std::uint64_t m,
                              unsigned levels) {
  prf_params p = prf_params::standard(n, m, levels);
  if (mode.tau != 0) p.tau = mode.tau;
  p.validate();
  return p;
}

// Fraction of (h, s) samples whose reach set contains all targets.
template <prime_field F, array_like A>
estimate reach_probability(const A& a, const std::vector<vertex>& targets, unsigned levels,
                           const oracle_mode& mode, std::uint64_t samples,
                           const estimate_options& opt, std::uint64_t tag) {
  check_samples(samples);
  const std::uint64_t n = a.size();
  for (vertex t : targets)
    if (t == 0 || t > n) throw domain_error("target vertex outside [1, n]");

  std::uint64_t hits = 0;
  if (mode.kind == oracle_kind::pseudorandom) {
    const prf_params params = mode_params(mode, n, a.bound(), levels);
    struct state {
      prf_seed<F> seed;
      visit_marks marks;
    };
    hits = count_hits(
        samples, opt.workers,
        [&] {
          auto rng = derive_stream(opt.seed, tag, levels, std::numeric_limits<std::uint64_t>::max());
          return state{sample_prf<F>(params, rng), visit_marks(n)};
        },
        [&](std::uint64_t i, state& st) {
          auto rng = derive_stream(opt.seed, tag, levels, i);
          st.seed.resample(rng);
          const vertex s = 1 + uniform_below(rng, n);
          return walk_hits(n, prf_successor<A, F>{a, st.seed}, s, targets, st.marks);
        });
  } else {
    if (levels == 0 || levels > prf_params::max_levels(n))
      throw parameter_error("levels must lie in [1, ceil(log2 n)]");
    struct state {
      random_oracle_table table;
      visit_marks marks;
    };
    hits = count_hits(
        samples, opt.workers,
        [&] { return state{random_oracle_table(n, a.bound(), levels), visit_marks(n)}; },
        [&](std::uint64_t i, state& st) {
          auto rng = derive_stream(opt.seed, tag ^ 0x0a0a, levels, i);
          st.table.reset(rng());
          const vertex s = 1 + uniform_below(rng, n);
          auto next = [&](vertex x) { return st.table(a.value(x)); };
          return walk_hits(n, next, s, targets, st.marks);
        });
  }
  return make_estimate(hits, samples);
}

}  // namespace detail

// Pr over (h, s) that v is in f*(s).
template <prime_field F = mersenne61, array_like A>
estimate estimate_visit_prob(const A& a, vertex v, unsigned levels, const oracle_mode& mode,
                             std::uint64_t samples, const estimate_options& opt = {}) {
  return detail::reach_probability<F>(a, {v}, levels, mode, samples, opt, detail::kTagVisit);
}

// The unique colliding pair (u, v), u < v. Throws unless a has exactly one.
template <array_like A>
std::pair<vertex, vertex> unique_pair(const A& a) {
  const auto summary = f2(a);
  if (summary.f2 != a.size() + 2)
    throw parameter_error("instance must contain exactly one colliding pair");
  std::unordered_map<std::uint64_t, vertex> first;
  for (vertex i = 1; i <= a.size(); ++i) {
    auto [it, fresh] = first.emplace(a.value(i), i);
    if (!fresh) return {it->second, i};
  }
  throw parameter_error("instance must contain exactly one colliding pair");
}

// Pr over (h, s) that both vertices of the unique colliding pair are in f*(s).
template <prime_field F = mersenne61, array_like A>
estimate estimate_pair_prob(const A& a, unsigned levels, const oracle_mode& mode,
                            std::uint64_t samples, const estimate_options& opt = {}) {
  const auto [u, v] = unique_pair(a);
  return detail::reach_probability<F>(a, {u, v}, levels, mode, samples, opt, detail::kTagPair);
}

// Pr over (h, x) that h(x) = star, h from the pseudorandom family with n
// vertices and domain [1, m]; compare with star_probability(levels).
template <prime_field F = mersenne61>
estimate estimate_star_rate(unsigned levels, std::uint64_t samples, std::uint64_t n = 256,
                            std::uint64_t m = 0, const estimate_options& opt = {},
                            unsigned tau = 0) {
  detail::check_samples(samples);
  if (m == 0) m = 4 * n;
  const prf_params params = detail::mode_params(oracle_mode::pseudorandom(tau), n, m, levels);
  const std::uint64_t hits = detail::count_hits(
      samples, opt.workers,
      [&] {
        auto rng = derive_stream(opt.seed, detail::kTagStar, levels, std::numeric_limits<std::uint64_t>::max());
        return sample_prf<F>(params, rng);
      },
      [&](std::uint64_t i, prf_seed<F>& seed) {
        auto rng = derive_stream(opt.seed, detail::kTagStar, levels, i);
        seed.resample(rng);
        const std::uint64_t x = 1 + uniform_below(rng, m);
        return eval_h_unchecked(seed, x).is_star();
      });
  return make_estimate(hits, samples);
}

// Exhaustive check over F_P: for every one of the P^k seeds of a degree < k
// polynomial and every set of k distinct points, tally the joint output
// tuple. Returns true iff, for each point set, every tuple occurs exactly once.
template <std::uint64_t P>
bool kwise_exhaustive_uniform(unsigned k) {
  using F = small_prime_field<P>;
  if (k == 0 || k > P) throw parameter_error("kwise_exhaustive_uniform: need 1 <= k <= P");
  std::uint64_t seeds = 1;
  for (unsigned i = 0; i < k; ++i) seeds *= P;
  std::vector<std::uint64_t> points(k);
  for (unsigned i = 0; i < k; ++i) points[i] = i;
  for (;;) {
    std::vector<std::uint32_t> tally(seeds, 0);
    std::vector<std::uint64_t> coeffs(k);
    for (std::uint64_t code = 0; code < seeds; ++code) {
      std::uint64_t c = code;
      for (auto& x : coeffs) {
        x = c % P;
        c /= P;
      }
      const kwise_seed<F> seed(coeffs, output_range::bit());
      std::uint64_t tuple = 0;
      for (std::uint64_t x : points) tuple = tuple * P + eval_field(seed, x);
      ++tally[tuple];
    }
    for (auto t : tally)
      if (t != 1) return false;
    // next k-subset of [0, P) in lexicographic order
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && points[i] == P - k + i) --i;
    if (i < 0) return true;
    ++points[i];
    for (unsigned j = i + 1; j < k; ++j) points[j] = points[j - 1] + 1;
  }
}

struct scaling_row {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> steps;  // one per repetition
  std::uint64_t median_steps = 0;
  double seconds = 0;                // wall clock over all repetitions
  std::uint64_t misses = 0;          // repetitions that reported Distinct
};

struct scaling_table {
  std::vector<scaling_row> rows;
  double slope = 0;  // least squares fit of log(median steps) against log(n)
};

// Ordinary least squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw parameter_error("fit_slope: need >= 2 points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = k * sxx - sx * sx;
  if (den == 0) throw parameter_error("fit_slope: degenerate x");
  return (k * sxy - sx * sy) / den;
}

// Element Distinctness on PlantedPairs(1) for each n, `reps` times. The
// instance and solver seeds of repetition r derive from (seed, n, r).
template <class Progress>
scaling_table scaling_bench(const std::vector<std::uint64_t>& n_list, unsigned reps,
                            std::uint64_t seed, solver_config cfg, Progress&& progress) {
  if (n_list.size() < 2) throw parameter_error("scaling_bench: need at least two sizes");
  if (reps == 0) throw parameter_error("scaling_bench: reps must be >= 1");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (!std::has_single_bit(n_list[i]) || n_list[i] < 2)
      throw parameter_error("scaling_bench: sizes must be powers of two >= 2");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw parameter_error("scaling_bench: sizes must be ascending");
  }
  scaling_table out;
  std::vector<double> lx, ly;
  for (std::uint64_t n : n_list) {
    scaling_row row;
    row.n = n;
    const auto t0 = std::chrono::steady_clock::now();
    for (unsigned r = 0; r < reps; ++r) {
      const std::uint64_t key = mix64(seed ^ mix64(n * 0x9e3779b97f4a7c15ULL + r));
      const auto a = generate({n, 0, instance_kind::planted_pairs, 1, key});
      cfg.seed = mix64(key + 1);
      const auto res = element_distinctness(a, cfg);
      row.steps.push_back(res.stats.total_steps);
      if (!res.has_collision()) ++row.misses;
      progress(n, r, res);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto sorted = row.steps;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = sorted.size();
    row.median_steps = k % 2 == 1 ? sorted[k / 2] : (sorted[k / 2 - 1] + sorted[k / 2]) / 2;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(1, row.median_steps))));
    out.rows.push_back(std::move(row));
  }
  out.slope = fit_slope(lx, ly);
  return out;
}

inline scaling_table scaling_bench(const std::vector<std::uint64_t>& n_list, unsigned reps,
                                   std::uint64_t seed = 0, solver_config cfg = {}) {
  return scaling_bench(n_list, reps, seed, cfg, [](std::uint64_t, unsigned, const ed_result&) {});
}

}  // namespace lowspace
