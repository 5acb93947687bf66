#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <lowspace/instances.hpp>
#include <lowspace/solvers.hpp>
#include <lowspace/walk.hpp>

using namespace lowspace;

namespace {

// Every gate open at level 1 and r_1 constant: h(x) = 1 + (value mod n).
prf_seed<> constant_seed(std::uint64_t n, std::uint64_t m, std::uint64_t value, bool star = false) {
  const prf_params p{n, m, 1, 2};
  return prf_seed<>(p, {{kwise_seed<>({star ? 0u : 1u, 0}, output_range::bit(), m + 1),
                         kwise_seed<>({value, 0}, output_range::index(n), m + 1)}});
}

}  // namespace

TEST(InputArray, Validation) {
  EXPECT_THROW(input_array({}, 5), parameter_error);
  EXPECT_THROW(input_array({1, 6}, 5), parameter_error);
  EXPECT_THROW(input_array({0}, 5), parameter_error);
  EXPECT_THROW(input_array({1}, 0), parameter_error);
  const auto a = input_array::from_values({4, 9, 4});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.bound(), 9u);
  EXPECT_EQ(a.value(2), 9u);
}

TEST(ConcatView, Addressing) {
  const input_array a({1, 2}, 5), b({3, 4, 5}, 9);
  const concat_view c(a, b);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c.bound(), 9u);
  EXPECT_EQ(c.value(2), 2u);
  EXPECT_EQ(c.value(3), 3u);
  EXPECT_TRUE(c.in_first(2));
  EXPECT_FALSE(c.in_first(3));
  EXPECT_EQ(c.split(), 2u);
}

TEST(Successor, StarForwardedAndRangeChecked) {
  const input_array a({3, 5}, 8);
  const auto dead = constant_seed(2, 8, 0, true);
  EXPECT_TRUE(successor(a, dead, 1).is_star());
  EXPECT_THROW(successor(a, dead, 0), domain_error);
  EXPECT_THROW(successor(a, dead, 3), domain_error);
  const auto wrong_n = constant_seed(3, 8, 0);
  EXPECT_THROW(successor(a, wrong_n, 1), parameter_error);
}

TEST(Successor, SingleVertexSelfLoop) {
  const input_array a({5}, 5);
  const auto seed = constant_seed(1, 5, 0);  // h(5) = 1
  EXPECT_EQ(successor(a, seed, 1), hash_value::defined(1));
}

TEST(Successor, EqualValuesEqualSuccessors) {
  const auto a = generate({200, 0, instance_kind::planted_pairs, 30, 4});
  bit_stream rng(4);
  const auto seed = sample_prf(prf_params::standard(200, a.bound(), 3), rng);
  for (vertex x = 1; x <= a.size(); ++x)
    for (vertex y = x + 1; y <= a.size(); ++y)
      if (a.value(x) == a.value(y)) {
        EXPECT_EQ(successor(a, seed, x), successor(a, seed, y));
      }
}

TEST(ReachSet, ImmediateStar) {
  const input_array a({3, 5}, 8);
  const auto rs = compute_reach_set(a, constant_seed(2, 8, 0, true), 2);
  EXPECT_EQ(rs.visited, std::vector<vertex>{2});
  EXPECT_EQ(rs.terminated_by, walk_end::star);
}

TEST(ReachSet, TwoVertexRho) {
  const input_array a({7, 7}, 7);
  const auto rs = compute_reach_set(a, constant_seed(2, 7, 0), 2);  // h(7) = 1
  EXPECT_EQ(rs.visited, (std::vector<vertex>{2, 1}));
  EXPECT_EQ(rs.terminated_by, walk_end::cycle_closed);
  EXPECT_EQ(rs.closing_vertex, 1u);
}

TEST(ReachSet, BudgetStopsWalk) {
  const input_array a({1, 2, 3, 4}, 4);
  auto next = [](vertex x) { return hash_value::defined(x % 4 + 1); };
  const auto rs = reach_set_with(4, next, 1, 2);
  EXPECT_EQ(rs.terminated_by, walk_end::budget);
  EXPECT_EQ(rs.steps, 2u);
  EXPECT_THROW(reach_set_with(4, next, 5), domain_error);
}

// Walk shape: simple visiting sequence, consecutive vertices linked, closing
// vertex already visited, and never more than n vertices.
TEST(ReachSet, RhoShapeProperty) {
  bit_stream rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t n = 2 + uniform_below(rng, 300);
    const auto kind = trial % 2 ? instance_kind::random_iid : instance_kind::all_distinct;
    const auto a = generate({n, 0, kind, 0, rng()});
    const unsigned l = 1 + static_cast<unsigned>(uniform_below(rng, prf_params::max_levels(n)));
    const auto seed = sample_prf(prf_params::standard(n, a.bound(), l), rng);
    const vertex s = 1 + uniform_below(rng, n);
    const auto rs = compute_reach_set(a, seed, s);
    ASSERT_EQ(rs.visited.front(), s);
    ASSERT_LE(rs.visited.size(), n);
    ASSERT_NE(rs.terminated_by, walk_end::budget);
    std::set<vertex> distinct(rs.visited.begin(), rs.visited.end());
    ASSERT_EQ(distinct.size(), rs.visited.size());
    for (std::size_t i = 0; i + 1 < rs.visited.size(); ++i)
      ASSERT_EQ(successor(a, seed, rs.visited[i]), hash_value::defined(rs.visited[i + 1]));
    const auto last = successor(a, seed, rs.visited.back());
    if (rs.terminated_by == walk_end::star) {
      ASSERT_TRUE(last.is_star());
    } else {
      ASSERT_EQ(last, hash_value::defined(rs.closing_vertex));
      ASSERT_TRUE(distinct.count(rs.closing_vertex));
    }
  }
}

// Mean |f*(s)| on a distinct-valued array against sqrt(F2) = sqrt(n), at the
// level count where the expected walk length is of order sqrt(n):
// l = ceil(log2 n) - ceil(log2 F2) / 2 (no additive slack; see README).
TEST(ReachSet, SizeLawAtSqrtLevel) {
  const std::uint64_t n = 4096;
  const auto a = generate({n, 0, instance_kind::all_distinct, 0, 12});
  const std::uint64_t f2v = f2(a).f2;
  const unsigned l = ceil_log2(n) - ceil_log2(f2v) / 2;
  auto rng = derive_stream(12, 12, 12);
  auto seed = sample_prf(prf_params::standard(n, a.bound(), l), rng);
  double total = 0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    seed.resample(rng);
    total += static_cast<double>(compute_reach_set(a, seed, 1 + uniform_below(rng, n)).visited.size());
  }
  const double mean = total / samples;
  const double root = std::sqrt(static_cast<double>(f2v));
  EXPECT_GE(mean, root / 4);
  EXPECT_LE(mean, root * 4);
}
