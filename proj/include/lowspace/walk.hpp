#pragma once

// The 1-out digraph G_{a,h} on positions [n]: vertex x has the single edge
// x -> h(a_x), or no edge when h(a_x) is star. Nothing here stores the graph.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "prf.hpp"

namespace lowspace {

using vertex = std::uint64_t;  // 1-based position

// Read-only array a_1..a_n with values in [1, m].
class input_array {
 public:
  input_array(std::vector<std::uint64_t> values, std::uint64_t m)
      : values_(std::move(values)), m_(m) {
    if (values_.empty()) throw parameter_error("input array must be non-empty");
    if (m_ == 0) throw parameter_error("value bound m must be >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == 0 || values_[i] > m_)
        throw parameter_error("a_" + std::to_string(i + 1) + " = " + std::to_string(values_[i]) +
                              " outside [1, m]");
  }

  // Smallest admissible bound: the maximum value.
  static input_array from_values(std::vector<std::uint64_t> values) {
    const std::uint64_t m = values.empty() ? 1 : *std::max_element(values.begin(), values.end());
    return input_array(std::move(values), m);
  }

  std::uint64_t size() const noexcept { return values_.size(); }
  std::uint64_t bound() const noexcept { return m_; }
  std::uint64_t value(vertex i) const noexcept { return values_[i - 1]; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }

  friend bool operator==(const input_array&, const input_array&) = default;

 private:
  std::vector<std::uint64_t> values_;
  std::uint64_t m_;
};

template <class A>
concept array_like = requires(const A& a, vertex i) {
  { a.size() } -> std::convertible_to<std::uint64_t>;
  { a.bound() } -> std::convertible_to<std::uint64_t>;
  { a.value(i) } -> std::convertible_to<std::uint64_t>;
};

// c = a followed by b, addressed without copying either array.
class concat_view {
 public:
  concat_view(const input_array& a, const input_array& b) noexcept : a_(&a), b_(&b) {}

  std::uint64_t size() const noexcept { return a_->size() + b_->size(); }
  std::uint64_t bound() const noexcept { return std::max(a_->bound(), b_->bound()); }
  std::uint64_t value(vertex i) const noexcept {
    return i <= a_->size() ? a_->value(i) : b_->value(i - a_->size());
  }
  std::uint64_t split() const noexcept { return a_->size(); }
  bool in_first(vertex i) const noexcept { return i <= a_->size(); }

 private:
  const input_array* a_;
  const input_array* b_;
};

// f(x) = h(a_x) with h drawn from the pseudorandom family.
template <array_like A, prime_field F>
struct prf_successor {
  const A& array;
  const prf_seed<F>& seed;

  hash_value operator()(vertex x) const noexcept {
    return eval_h_unchecked(seed, array.value(x));
  }
};

template <array_like A, prime_field F>
void check_binding(const A& a, const prf_seed<F>& seed) {
  if (seed.params().n != a.size())
    throw parameter_error("seed range n does not match the array length");
  if (seed.params().m < a.bound()) throw parameter_error("seed domain smaller than array bound");
}

template <array_like A, prime_field F>
hash_value successor(const A& a, const prf_seed<F>& seed, vertex x) {
  check_binding(a, seed);
  if (x == 0 || x > a.size())
    throw domain_error("successor: vertex " + std::to_string(x) + " outside [1, n]");
  return prf_successor<A, F>{a, seed}(x);
}

enum class walk_end { star, cycle_closed, budget };

// f*(s) in visiting order. Explicit, O(n) space: for tests and measurement only.
struct reach_set {
  std::vector<vertex> visited;
  walk_end terminated_by = walk_end::star;
  vertex closing_vertex = 0;  // first revisited vertex when cycle_closed
  std::uint64_t steps = 0;    // successor evaluations
};

// Walk from s with any successor function next(x) -> hash_value.
// budget == 0 selects the default of 4n steps.
template <class Next>
reach_set reach_set_with(std::uint64_t n, Next&& next, vertex s, std::uint64_t budget = 0) {
  if (s == 0 || s > n) throw domain_error("reach_set: start vertex outside [1, n]");
  if (budget == 0) budget = 4 * n;
  reach_set out;
  std::vector<bool> seen(n + 1, false);
  out.visited.push_back(s);
  seen[s] = true;
  vertex cur = s;
  for (;;) {
    if (out.steps == budget) {
      out.terminated_by = walk_end::budget;
      return out;
    }
    const hash_value h = next(cur);
    ++out.steps;
    if (h.is_star()) {
      out.terminated_by = walk_end::star;
      return out;
    }
    cur = h.value();
    if (seen[cur]) {
      out.terminated_by = walk_end::cycle_closed;
      out.closing_vertex = cur;
      return out;
    }
    seen[cur] = true;
    out.visited.push_back(cur);
  }
}

template <array_like A, prime_field F>
reach_set compute_reach_set(const A& a, const prf_seed<F>& seed, vertex s,
                            std::uint64_t budget = 0) {
  check_binding(a, seed);
  return reach_set_with(a.size(), prf_successor<A, F>{a, seed}, s, budget);
}

}  // namespace lowspace
