#pragma once

// Instance generators, the second frequency moment, and brute-force reference
// answers. Everything here is offline tooling and uses O(n) space freely.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "results.hpp"
#include "rng.hpp"
#include "walk.hpp"

namespace lowspace {

enum class instance_kind { all_distinct, planted_pairs, all_equal, random_iid };

struct instance_spec {
  std::uint64_t n = 0;
  std::uint64_t m = 0;      // 0 selects 4n
  instance_kind kind = instance_kind::all_distinct;
  std::uint64_t pairs = 0;  // planted_pairs only
  std::uint64_t seed = 0;

  std::uint64_t bound() const noexcept { return m == 0 ? 4 * n : m; }
};

struct f2_summary {
  std::uint64_t f2 = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // C_v for every value present

  std::uint64_t count(std::uint64_t v) const {
    auto it = counts.find(v);
    return it == counts.end() ? 0 : it->second;
  }
};

// F2(a) = sum over values of C_v^2 = #{(i, j) : a_i = a_j}.
template <array_like A>
f2_summary f2(const A& a) {
  f2_summary out;
  for (vertex i = 1; i <= a.size(); ++i) ++out.counts[a.value(i)];
  for (const auto& [v, c] : out.counts) out.f2 += c * c;
  return out;
}

namespace detail {

template <class Rng>
void shuffle(std::vector<std::uint64_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

// `count` distinct values from [1, m] in random order.
template <class Rng>
std::vector<std::uint64_t> distinct_values(std::uint64_t count, std::uint64_t m, Rng& rng) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (m <= 16 * count + 16) {
    std::vector<std::uint64_t> pool(m);
    std::iota(pool.begin(), pool.end(), std::uint64_t{1});
    for (std::uint64_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + uniform_below(rng, m - i)]);
      out.push_back(pool[i]);
    }
  } else {
    std::unordered_set<std::uint64_t> used;
    while (out.size() < count) {
      const std::uint64_t v = 1 + uniform_below(rng, m);
      if (used.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

}  // namespace detail

inline input_array generate(const instance_spec& spec) {
  const std::uint64_t n = spec.n;
  const std::uint64_t m = spec.bound();
  if (n == 0) throw parameter_error("generate: n must be >= 1");
  auto rng = derive_stream(spec.seed, 0x1257a11ce, n, static_cast<std::uint64_t>(spec.kind));
  std::vector<std::uint64_t> values(n);

  switch (spec.kind) {
    case instance_kind::all_distinct: {
      if (m < n) throw parameter_error("generate: all_distinct needs m >= n");
      values = detail::distinct_values(n, m, rng);
      break;
    }
    case instance_kind::planted_pairs: {
      const std::uint64_t k = spec.pairs;
      if (2 * k > n) throw parameter_error("generate: planted pairs need k <= n/2");
      if (m < n - k) throw parameter_error("generate: planted pairs need m >= n - k");
      const auto pool = detail::distinct_values(n - k, m, rng);
      std::vector<std::uint64_t> pos(n);
      std::iota(pos.begin(), pos.end(), std::uint64_t{0});
      detail::shuffle(pos, rng);
      for (std::uint64_t i = 0; i < k; ++i) {
        values[pos[2 * i]] = pool[i];
        values[pos[2 * i + 1]] = pool[i];
      }
      for (std::uint64_t j = 0; j < n - 2 * k; ++j) values[pos[2 * k + j]] = pool[k + j];
      break;
    }
    case instance_kind::all_equal: {
      std::fill(values.begin(), values.end(), 1 + uniform_below(rng, m));
      break;
    }
    case instance_kind::random_iid: {
      for (auto& v : values) v = 1 + uniform_below(rng, m);
      break;
    }
  }
  return input_array(std::move(values), m);
}

// Lexicographically smallest colliding pair (i, j), i < j.
inline ed_result brute_ed(const input_array& a) {
  std::unordered_map<std::uint64_t, std::uint64_t> count;
  for (auto v : a.values()) ++count[v];
  ed_result out;
  for (vertex i = 1; i <= a.size(); ++i) {
    if (count[a.value(i)] < 2) continue;
    for (vertex j = i + 1; j <= a.size(); ++j) {
      if (a.value(j) == a.value(i)) {
        out.verdict = ed_verdict::collision;
        out.i = i;
        out.j = j;
        return out;
      }
    }
  }
  return out;
}

// Smallest i with a_i in b, paired with the first j where b_j = a_i.
inline ld_result brute_ld(const input_array& a, const input_array& b) {
  std::unordered_map<std::uint64_t, vertex> first_in_b;
  for (vertex j = b.size(); j >= 1; --j) first_in_b[b.value(j)] = j;
  ld_result out;
  for (vertex i = 1; i <= a.size(); ++i) {
    auto it = first_in_b.find(a.value(i));
    if (it != first_in_b.end()) {
      out.disjoint = false;
      out.i = i;
      out.j = it->second;
      return out;
    }
  }
  return out;
}

// Sorted distinct values common to a and b.
inline std::vector<std::uint64_t> brute_si(const input_array& a, const input_array& b) {
  std::vector<std::uint64_t> x(a.values().begin(), a.values().end());
  std::vector<std::uint64_t> y(b.values().begin(), b.values().end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  std::vector<std::uint64_t> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

inline const char* to_string(instance_kind k) noexcept {
  switch (k) {
    case instance_kind::all_distinct: return "all_distinct";
    case instance_kind::planted_pairs: return "planted_pairs";
    case instance_kind::all_equal: return "all_equal";
    case instance_kind::random_iid: return "random_iid";
  }
  return "?";
}

inline instance_kind parse_instance_kind(const std::string& s) {
  if (s == "all_distinct" || s == "distinct") return instance_kind::all_distinct;
  if (s == "planted_pairs" || s == "planted") return instance_kind::planted_pairs;
  if (s == "all_equal" || s == "equal") return instance_kind::all_equal;
  if (s == "random_iid" || s == "iid") return instance_kind::random_iid;
  throw parameter_error("unknown instance kind '" + s + "'");
}

}  // namespace lowspace
