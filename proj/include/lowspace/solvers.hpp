#pragma once

// Monte Carlo solvers for Element Distinctness, List Disjointness and Set
// Intersection. Each trial draws a fresh h from the pseudorandom family and a
// uniform start s, then runs COLLIDE(s). Level counts l = 1..ceil(log2 n) are
// tried in turn, each with its own trial count and step budget.
//
// Randomness is read strictly forward: trial t at level l reads its own
// stream derived from (master seed, problem, l, t), and the only randomness
// kept is the current trial's seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "collide.hpp"
#include "errors.hpp"
#include "prf.hpp"
#include "results.hpp"
#include "rng.hpp"
#include "walk.hpp"

namespace lowspace {

struct solver_config {
  double trial_multiplier = 2;              // c_T
  std::optional<double> failure_target;     // delta; 1/n when unset
  double budget_multiplier = 8;             // c_B
  std::uint64_t seed = 0;                   // master seed
  unsigned workers = 1;
  std::optional<std::uint64_t> f2_hint;     // known or bounded F2, moves its l to the front

  void validate() const {
    if (!(trial_multiplier >= 1)) throw parameter_error("trial multiplier must be >= 1");
    if (!(budget_multiplier >= 1)) throw parameter_error("budget multiplier must be >= 1");
    if (failure_target && !(*failure_target > 0 && *failure_target < 1))
      throw parameter_error("failure target must lie in (0, 1)");
    if (workers == 0) throw parameter_error("workers must be >= 1");
  }
};

// Level count targeted by the visit/collision estimates:
// ceil(log2 n) - ceil(ceil(log2 F2) / 2) - 10, clamped into [1, ceil(log2 n)].
inline unsigned hinted_level(std::uint64_t n, std::uint64_t f2) {
  const long long lg = ceil_log2(n);
  const long long half = (static_cast<long long>(ceil_log2(f2)) + 1) / 2;
  const long long l = lg - half - 10;
  return static_cast<unsigned>(
      std::clamp<long long>(l, 1, static_cast<long long>(prf_params::max_levels(n))));
}

// Levels 1..L with L = max(1, ceil(log2 n)); with a hint, the hinted level
// comes first and is not repeated. O(1) state.
class ell_schedule {
 public:
  ell_schedule(std::uint64_t n, std::optional<std::uint64_t> f2_hint = std::nullopt) {
    if (n == 0) throw parameter_error("ell_schedule: n must be >= 1");
    count_ = prf_params::max_levels(n);
    if (f2_hint) hint_ = hinted_level(n, *f2_hint);
  }

  class iterator {
   public:
    using value_type = unsigned;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const ell_schedule* s, unsigned k) : s_(s), k_(k) {}
    unsigned operator*() const { return s_->at(k_); }
    iterator& operator++() {
      ++k_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++k_;
      return old;
    }
    bool operator==(const iterator& o) const { return k_ == o.k_; }

   private:
    const ell_schedule* s_ = nullptr;
    unsigned k_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }
  unsigned size() const { return count_; }
  std::optional<unsigned> hint() const { return hint_ ? std::optional<unsigned>(hint_) : std::nullopt; }

 private:
  unsigned at(unsigned k) const {
    if (hint_ == 0) return k + 1;
    if (k == 0) return hint_;
    return k < hint_ ? k : k + 1;
  }

  unsigned count_ = 0;
  unsigned hint_ = 0;
};

namespace detail {

enum : std::uint64_t { kTagEd = 0xed, kTagLd = 0x1d, kTagSi = 0x51 };

// Trial loop bookkeeping beyond collide and the stream: level, trial index,
// block step total, start vertex.
inline constexpr std::size_t kTrialLoopWords = 4;

inline std::uint64_t trial_words(std::size_t seed_words) {
  return seed_words + kCollideStateWords + bit_stream::state_words + kTrialLoopWords;
}

template <prime_field F = mersenne61>
prf_seed<F> allocate_seed(const prf_params& params) {
  std::vector<prf_level<F>> levels;
  levels.reserve(params.levels);
  const std::vector<std::uint64_t> zeros(params.tau, 0);
  for (unsigned i = 0; i < params.levels; ++i)
    levels.push_back({kwise_seed<F>(zeros, output_range::bit(), params.m + 1),
                      kwise_seed<F>(zeros, output_range::index(params.n), params.m + 1)});
  return prf_seed<F>(params, std::move(levels));
}

// Draw trial t's seed and start vertex from its stream and run COLLIDE.
template <array_like A>
collide_outcome run_trial(const A& a, prf_seed<>& seed, std::uint64_t master, std::uint64_t tag,
                          unsigned level, std::uint64_t t, std::uint64_t cap, vertex* start) {
  auto rng = derive_stream(master, tag, level, t);
  seed.resample(rng);
  const vertex s = 1 + uniform_below(rng, a.size());
  if (start) *start = s;
  return collide_with(a, prf_successor<A, mersenne61>{a, seed}, s, cap);
}

struct block_plan {
  unsigned level;
  std::uint64_t trials;
  std::uint64_t budget;
};

// Runs one level block. on_pair(outcome) returns true to stop the whole
// solver. Returns true when stopped. Results do not depend on the worker
// count: outcomes are merged strictly in trial order.
template <array_like A, class OnPair>
bool run_block(const A& a, const block_plan& plan, std::uint64_t master, std::uint64_t tag,
               unsigned workers, solve_stats& stats, OnPair&& on_pair) {
  const prf_params params = prf_params::standard(a.size(), a.bound(), plan.level);
  const std::uint64_t cap = default_step_cap(a.size());
  block_stats blk;
  blk.level = plan.level;

  bool stopped = false;
  auto account = [&](const collide_outcome& out, std::uint64_t words, std::uint64_t t, vertex s) {
    ++blk.trials;
    blk.steps += out.steps;
    blk.peak_words = std::max(blk.peak_words, words);
    blk.min_peak_words = blk.min_peak_words == 0 ? words : std::min(blk.min_peak_words, words);
    switch (out.end) {
      case collide_end::star: ++stats.star_ends; break;
      case collide_end::pure_cycle: ++stats.pure_cycles; break;
      case collide_end::hash_collision: ++stats.hash_collisions; break;
      case collide_end::budget: ++stats.budget_hits; break;
      case collide_end::pair: break;
    }
    if (out.has_pair() && on_pair(out)) {
      stats.witness = witness_origin{plan.level, t, s};
      stopped = true;
    }
    if (!stopped && blk.steps > plan.budget) blk.budget_exhausted = true;
    return stopped || blk.budget_exhausted;
  };

  if (workers <= 1) {
    auto seed = allocate_seed(params);
    const std::uint64_t words = trial_words(seed.word_count());
    for (std::uint64_t t = 0; t < plan.trials; ++t) {
      vertex s = 0;
      const auto out = run_trial(a, seed, master, tag, plan.level, t, cap, &s);
      if (account(out, words, t, s)) break;
    }
  } else {
    std::vector<prf_seed<>> seeds;
    for (unsigned w = 0; w < workers; ++w) seeds.push_back(allocate_seed(params));
    const std::uint64_t words = trial_words(seeds.front().word_count());
    const std::uint64_t batch = 64 * std::uint64_t{workers};
    std::vector<collide_outcome> outs(batch);
    std::vector<vertex> starts(batch);
    bool done = false;
    for (std::uint64_t first = 0; first < plan.trials && !done; first += batch) {
      const std::uint64_t count = std::min(batch, plan.trials - first);
      {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            for (std::uint64_t i = w; i < count; i += workers)
              outs[i] = run_trial(a, seeds[w], master, tag, plan.level, first + i, cap, &starts[i]);
          });
        }
      }
      for (std::uint64_t i = 0; i < count && !done; ++i)
        done = account(outs[i], words, first + i, starts[i]);
    }
  }

  stats.trials += blk.trials;
  stats.total_steps += blk.steps;
  stats.peak_words = std::max(stats.peak_words, blk.peak_words);
  stats.blocks.push_back(blk);
  return stopped;
}

inline std::uint64_t ceil_u64(double x) { return static_cast<std::uint64_t>(std::ceil(x)); }

}  // namespace detail

// Seed and start vertex used by a reported witness, regenerated from the
// master seed (the solver itself does not keep them).
template <array_like A>
std::pair<prf_seed<>, vertex> replay_trial(const A& a, std::uint64_t master, std::uint64_t tag,
                                           const witness_origin& w) {
  auto rng = derive_stream(master, tag, w.level, w.trial);
  auto seed = sample_prf(prf_params::standard(a.size(), a.bound(), w.level), rng);
  const vertex s = 1 + uniform_below(rng, a.size());
  return {std::move(seed), s};
}

inline constexpr std::uint64_t kEdStreamTag = detail::kTagEd;
inline constexpr std::uint64_t kLdStreamTag = detail::kTagLd;
inline constexpr std::uint64_t kSiStreamTag = detail::kTagSi;

// Per-level trial count c_T * n * ceil(ln(1/delta)) for Element Distinctness.
inline std::uint64_t ed_trials_per_level(std::uint64_t n, const solver_config& cfg) {
  const double delta = cfg.failure_target.value_or(1.0 / static_cast<double>(n));
  const double lnf = std::max(1.0, std::ceil(std::log(1.0 / delta)));
  return std::max<std::uint64_t>(1, detail::ceil_u64(cfg.trial_multiplier * static_cast<double>(n) * lnf));
}

// Per-level step budget c_B * n^1.5 * ceil(log2 n).
inline std::uint64_t ed_budget_per_level(std::uint64_t n, const solver_config& cfg) {
  const double lg = std::max(1u, ceil_log2(n));
  return detail::ceil_u64(cfg.budget_multiplier * std::pow(static_cast<double>(n), 1.5) * lg);
}

inline ed_result element_distinctness(const input_array& a, const solver_config& cfg = {}) {
  cfg.validate();
  ed_result res;
  const std::uint64_t n = a.size();
  if (n == 1) return res;
  const detail::block_plan base{0, ed_trials_per_level(n, cfg), ed_budget_per_level(n, cfg)};
  for (unsigned level : ell_schedule(n, cfg.f2_hint)) {
    auto plan = base;
    plan.level = level;
    const bool found = detail::run_block(
        a, plan, cfg.seed, detail::kTagEd, cfg.workers, res.stats, [&](const collide_outcome& o) {
          if (o.u == o.v || a.value(o.u) != a.value(o.v)) return false;
          res.verdict = ed_verdict::collision;
          res.i = std::min(o.u, o.v);
          res.j = std::max(o.u, o.v);
          return true;
        });
    if (found) break;
  }
  return res;
}

// Two-list problems run on the virtual concatenation c = a ++ b.
namespace detail {

inline std::uint64_t list_length(const input_array& a, const input_array& b) {
  return std::max(a.size(), b.size());
}

}  // namespace detail

// Requires p_bound >= F2(a) + F2(b) (so at least |a| + |b|). Per level: up to
// c_T * p * ceil(log2 n) trials and c_B * n * sqrt(p) * ceil(log2 n) steps.
inline ld_result list_disjointness(const input_array& a, const input_array& b,
                                   std::uint64_t p_bound, const solver_config& cfg = {}) {
  cfg.validate();
  if (p_bound < a.size() + b.size())
    throw parameter_error("list_disjointness: p_bound must be >= |a| + |b|");
  const concat_view c(a, b);
  const std::uint64_t n = detail::list_length(a, b);
  const double lg = std::max(1u, ceil_log2(n));
  const double p = static_cast<double>(p_bound);
  const std::uint64_t trials = detail::ceil_u64(cfg.trial_multiplier * p * lg);
  const std::uint64_t budget =
      detail::ceil_u64(cfg.budget_multiplier * static_cast<double>(n) * std::sqrt(p) * lg);

  ld_result res;
  for (unsigned level : ell_schedule(c.size(), cfg.f2_hint.value_or(2 * p_bound))) {
    const bool found = detail::run_block(
        c, {level, trials, budget}, cfg.seed, detail::kTagLd, cfg.workers, res.stats,
        [&](const collide_outcome& o) {
          if (c.in_first(o.u) == c.in_first(o.v)) {
            ++res.stats.same_side_pairs;
            return false;
          }
          const vertex i = std::min(o.u, o.v);
          const vertex j = std::max(o.u, o.v) - c.split();
          if (a.value(i) != b.value(j)) return false;
          res.disjoint = false;
          res.i = i;
          res.j = j;
          return true;
        });
    if (found) break;
  }
  return res;
}

// Convenience when p is unknown: p = |a|+|b|, doubled until a witness is found
// or p exceeds |a|^2 + |b|^2 >= F2(a) + F2(b).
inline ld_result list_disjointness_doubling(const input_array& a, const input_array& b,
                                            const solver_config& cfg = {}) {
  const std::uint64_t cap = a.size() * a.size() + b.size() * b.size();
  std::uint64_t p = a.size() + b.size();
  solve_stats merged;
  for (;;) {
    auto res = list_disjointness(a, b, p, cfg);
    merged.trials += res.stats.trials;
    merged.total_steps += res.stats.total_steps;
    merged.peak_words = std::max(merged.peak_words, res.stats.peak_words);
    merged.blocks.insert(merged.blocks.end(), res.stats.blocks.begin(), res.stats.blocks.end());
    if (!res.disjoint || p >= cap) {
      res.stats = std::move(merged);
      return res;
    }
    p = std::min(2 * p, cap);
  }
}

// Both lists must be duplicate-free. Every cross-list collision found is
// verified and passed to sink(value); values may repeat, order is arbitrary.
// Per level: c_T * n * ceil(log2 n)^2 trials. No block step budget; each trial
// is already capped by COLLIDE itself.
template <class Sink>
si_summary set_intersection(const input_array& a, const input_array& b, const solver_config& cfg,
                            Sink&& sink) {
  cfg.validate();
  const concat_view c(a, b);
  const std::uint64_t n = detail::list_length(a, b);
  const double lg = std::max(1u, ceil_log2(n));
  const double nd = static_cast<double>(n);
  const std::uint64_t trials = detail::ceil_u64(cfg.trial_multiplier * nd * lg * lg);
  constexpr std::uint64_t budget = ~std::uint64_t{0};

  si_summary res;
  for (unsigned level : ell_schedule(c.size(), cfg.f2_hint)) {
    detail::run_block(c, {level, trials, budget}, cfg.seed, detail::kTagSi, cfg.workers, res.stats,
                      [&](const collide_outcome& o) {
                        if (c.in_first(o.u) == c.in_first(o.v)) {
                          ++res.stats.same_side_pairs;
                          return false;
                        }
                        const std::uint64_t v = c.value(o.u);
                        if (v != c.value(o.v)) return false;
                        ++res.emitted;
                        sink(v);
                        return false;
                      });
  }
  return res;
}

}  // namespace lowspace
