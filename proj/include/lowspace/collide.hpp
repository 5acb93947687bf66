#pragma once

// COLLIDE(s): Floyd cycle finding on x -> h(a_x) from s, with O(1) cursors.
//
// If the walk closes a rho, the cycle entry mu has two predecessors inside
// f*(s): the last tail vertex u and the cycle vertex v. h(a_u) = h(a_v), so
// either a_u = a_v (a genuine collision) or h itself collided.

#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "prf.hpp"
#include "walk.hpp"

namespace lowspace {

enum class collide_end {
  pair,            // u != v and a_u = a_v
  star,            // the walk left f*(s) through a star: f*(s) is a path
  pure_cycle,      // s lies on the cycle, no tail and no merge vertex
  hash_collision,  // merge found but a_u != a_v
  budget           // step cap reached; never reported as a pair
};

struct collide_outcome {
  collide_end end = collide_end::star;
  vertex u = 0;
  vertex v = 0;
  std::uint64_t steps = 0;  // successor evaluations

  bool has_pair() const noexcept { return end == collide_end::pair; }
  // Same verdict and same witness; step counts and no-pair reasons are ignored.
  bool same_result(const collide_outcome& o) const noexcept {
    return has_pair() == o.has_pair() && (!has_pair() || (u == o.u && v == o.v));
  }
};

// Machine words of working state used by collide_with, excluding the seed:
// s, tortoise, hare, two predecessors, step counter, cap, and the last hash.
inline constexpr std::size_t kCollideStateWords = 8;

// Default step cap: Floyd evaluates at most 3*lambda + 5*mu <= 5n successors.
constexpr std::uint64_t default_step_cap(std::uint64_t n) noexcept { return 5 * n; }

template <array_like A, class Next>
collide_outcome collide_with(const A& a, Next&& next, vertex s, std::uint64_t step_cap) {
  collide_outcome out;
  std::uint64_t steps = 0;

  // Phase 1: the hare moves two steps per round, the tortoise one. A star
  // reached by the hare ends the walk; the tortoise only retraces the hare.
  vertex tortoise = s;
  vertex hare = s;
  for (;;) {
    for (int i = 0; i < 2; ++i) {
      if (steps == step_cap) return {collide_end::budget, 0, 0, steps};
      const hash_value h = next(hare);
      ++steps;
      if (h.is_star()) return {collide_end::star, 0, 0, steps};
      hare = h.value();
    }
    if (steps == step_cap) return {collide_end::budget, 0, 0, steps};
    tortoise = next(tortoise).value();
    ++steps;
    if (tortoise == hare) break;
  }

  // Phase 2: restart one cursor at s and move both in lockstep. They first
  // coincide at the cycle entry; the cursors' previous positions are its two
  // predecessors.
  vertex tail = s;
  vertex ring = hare;
  if (tail == ring) return {collide_end::pure_cycle, 0, 0, steps};
  vertex tail_prev = 0;
  vertex ring_prev = 0;
  while (tail != ring) {
    if (steps + 2 > step_cap) return {collide_end::budget, 0, 0, step_cap};
    tail_prev = tail;
    ring_prev = ring;
    tail = next(tail).value();
    ring = next(ring).value();
    steps += 2;
  }

  if (a.value(tail_prev) != a.value(ring_prev))
    return {collide_end::hash_collision, 0, 0, steps};
  return {collide_end::pair, tail_prev, ring_prev, steps};
}

// step_cap == 0 selects default_step_cap(n).
template <array_like A, prime_field F>
collide_outcome collide(const A& a, const prf_seed<F>& seed, vertex s, std::uint64_t step_cap = 0) {
  check_binding(a, seed);
  if (s == 0 || s > a.size()) throw domain_error("collide: start vertex outside [1, n]");
  if (step_cap == 0) step_cap = default_step_cap(a.size());
  return collide_with(a, prf_successor<A, F>{a, seed}, s, step_cap);
}

// Brute-force reference: materialize f*(s) and scan it for equal values.
// Inside a rho component at most one such pair exists; it is reported with
// the earlier-visited vertex first, matching collide's (tail, cycle) order.
template <array_like A, class Next>
collide_outcome collide_oracle_with(const A& a, Next&& next, vertex s) {
  const reach_set rs = reach_set_with(a.size(), next, s, a.size() + 1);
  collide_outcome out;
  out.steps = rs.steps;
  out.end = rs.terminated_by == walk_end::star ? collide_end::star : collide_end::hash_collision;
  std::unordered_map<std::uint64_t, vertex> first_seen;
  int pairs = 0;
  for (vertex x : rs.visited) {
    auto [it, inserted] = first_seen.emplace(a.value(x), x);
    if (!inserted) {
      ++pairs;
      out.end = collide_end::pair;
      out.u = it->second;
      out.v = x;
    }
  }
  if (pairs > 1) throw std::logic_error("collide_oracle: reach set holds more than one equal pair");
  if (!out.has_pair() && rs.terminated_by == walk_end::cycle_closed &&
      rs.closing_vertex == rs.visited.front())
    out.end = collide_end::pure_cycle;
  return out;
}

template <array_like A, prime_field F>
collide_outcome collide_oracle(const A& a, const prf_seed<F>& seed, vertex s) {
  check_binding(a, seed);
  if (s == 0 || s > a.size()) throw domain_error("collide_oracle: start vertex outside [1, n]");
  return collide_oracle_with(a, prf_successor<A, F>{a, seed}, s);
}

}  // namespace lowspace
