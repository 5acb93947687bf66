#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "collide.hpp"
#include "walk.hpp"

namespace lowspace {

// One COLLIDE trial.
struct trial_stats {
  std::uint64_t steps = 0;
  bool reached_u = false;
  bool reached_v = false;
  collide_end outcome = collide_end::star;
  std::uint64_t peak_words = 0;  // seed + cursors + stream state
};

// One pass over a fixed level count l.
struct block_stats {
  unsigned level = 0;
  std::uint64_t trials = 0;
  std::uint64_t steps = 0;
  std::uint64_t peak_words = 0;
  std::uint64_t min_peak_words = 0;
  bool budget_exhausted = false;
};

// Where a reported witness came from; enough to replay its seed.
struct witness_origin {
  unsigned level = 0;
  std::uint64_t trial = 0;
  vertex start = 0;
};

struct solve_stats {
  std::uint64_t trials = 0;
  std::uint64_t total_steps = 0;
  std::uint64_t peak_words = 0;
  std::uint64_t star_ends = 0;
  std::uint64_t pure_cycles = 0;
  std::uint64_t hash_collisions = 0;
  std::uint64_t budget_hits = 0;
  std::uint64_t same_side_pairs = 0;  // two-list problems: pair inside one list
  std::vector<block_stats> blocks;
  std::optional<witness_origin> witness;
};

enum class ed_verdict { distinct, collision };

struct ed_result {
  ed_verdict verdict = ed_verdict::distinct;
  vertex i = 0;  // i < j, a_i = a_j
  vertex j = 0;
  solve_stats stats;

  bool has_collision() const noexcept { return verdict == ed_verdict::collision; }
};

struct ld_result {
  bool disjoint = true;
  vertex i = 0;  // index into a
  vertex j = 0;  // index into b, a_i = b_j
  solve_stats stats;
};

struct si_summary {
  std::uint64_t emitted = 0;
  solve_stats stats;
};

}  // namespace lowspace
