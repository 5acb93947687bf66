#include <gtest/gtest.h>

#include <lowspace/collide.hpp>
#include <lowspace/instances.hpp>

using namespace lowspace;

namespace {

prf_seed<> constant_seed(std::uint64_t n, std::uint64_t m, std::uint64_t value) {
  const prf_params p{n, m, 1, 2};
  return prf_seed<>(p, {{kwise_seed<>({1, 0}, output_range::bit(), m + 1),
                         kwise_seed<>({value, 0}, output_range::index(n), m + 1)}});
}

// Successor given as an explicit table; 0 means star.
struct table_next {
  std::vector<vertex> to;
  hash_value operator()(vertex x) const {
    return to[x] == 0 ? hash_value::star() : hash_value::defined(to[x]);
  }
};

}  // namespace

TEST(Collide, TwoVertexExample) {
  const input_array a({7, 7}, 7);
  const auto seed = constant_seed(2, 7, 0);  // h(7) = 1
  const auto from2 = collide(a, seed, 2);
  EXPECT_EQ(from2.end, collide_end::pair);
  EXPECT_EQ(from2.u, 2u);
  EXPECT_EQ(from2.v, 1u);
  EXPECT_TRUE(from2.same_result(collide_oracle(a, seed, 2)));

  const auto from1 = collide(a, seed, 1);
  EXPECT_EQ(from1.end, collide_end::pure_cycle);
  EXPECT_FALSE(from1.has_pair());
  EXPECT_TRUE(from1.same_result(collide_oracle(a, seed, 1)));
  EXPECT_EQ(collide_oracle(a, seed, 1).end, collide_end::pure_cycle);
}

TEST(Collide, StarEndsWithoutPair) {
  const input_array a({1, 2, 3, 4}, 4);
  const table_next next{{0, 2, 3, 4, 0}};  // 1 -> 2 -> 3 -> 4 -> star
  const auto out = collide_with(a, next, 1, 100);
  EXPECT_EQ(out.end, collide_end::star);
  EXPECT_EQ(collide_oracle_with(a, next, 1).end, collide_end::star);
}

TEST(Collide, HashCollisionIsNoPair) {
  // 1 -> 2 -> 3 -> 4 -> 2: entry 2 has predecessors 1 and 4 with a_1 != a_4
  const input_array a({1, 2, 3, 4}, 4);
  const table_next next{{0, 2, 3, 4, 2}};
  const auto out = collide_with(a, next, 1, 100);
  EXPECT_EQ(out.end, collide_end::hash_collision);
  EXPECT_FALSE(out.has_pair());
}

TEST(Collide, LongTailPairFound) {
  // tail 1 -> 2 -> 3 -> 4, cycle 4 -> 5 -> 6 -> 4; a_3 = a_6
  const input_array a({1, 2, 9, 4, 5, 9}, 9);
  const table_next next{{0, 2, 3, 4, 5, 6, 4}};
  const auto out = collide_with(a, next, 1, 100);
  EXPECT_EQ(out.end, collide_end::pair);
  EXPECT_EQ(out.u, 3u);
  EXPECT_EQ(out.v, 6u);
  EXPECT_LE(out.steps, 16u * 6);
}

TEST(Collide, BudgetIsNeverAPair) {
  const input_array a({1, 2, 9, 4, 5, 9}, 9);
  const table_next next{{0, 2, 3, 4, 5, 6, 4}};
  for (std::uint64_t cap = 1; cap < 12; ++cap) {
    const auto out = collide_with(a, next, 1, cap);
    EXPECT_LE(out.steps, cap);
    if (out.end != collide_end::budget) EXPECT_TRUE(out.has_pair());
  }
  EXPECT_EQ(collide_with(a, next, 1, 1).end, collide_end::budget);
}

TEST(Collide, StartChecked) {
  const input_array a({7, 7}, 7);
  const auto seed = constant_seed(2, 7, 0);
  EXPECT_THROW(collide(a, seed, 0), domain_error);
  EXPECT_THROW(collide(a, seed, 3), domain_error);
}

TEST(CollideOracle, DistinctArrayNeverPairs) {
  bit_stream rng(5);
  const auto a = generate({300, 0, instance_kind::all_distinct, 0, 5});
  for (int i = 0; i < 300; ++i) {
    const auto seed = sample_prf(prf_params::standard(300, a.bound(), 1 + i % 9), rng);
    const vertex s = 1 + uniform_below(rng, 300);
    EXPECT_FALSE(collide_oracle(a, seed, s).has_pair());
    EXPECT_FALSE(collide(a, seed, s).has_pair());
  }
}

// Randomized equivalence with the brute-force reference, plus soundness and
// the 16 |f*(s)| step bound.
TEST(CollideOracle, RandomizedEquivalence) {
  for (std::uint64_t n : {64ull, 1024ull}) {
    const int trials = n == 64 ? 3000 : 300;
    auto rng = derive_stream(6, 6, n);
    int pairs = 0;
    for (int t = 0; t < trials; ++t) {
      const auto kind = t % 3 == 0 ? instance_kind::random_iid : instance_kind::planted_pairs;
      const auto a = generate({n, 0, kind, 1 + uniform_below(rng, n / 4), rng()});
      const unsigned l = 1 + static_cast<unsigned>(uniform_below(rng, prf_params::max_levels(n)));
      const auto seed = sample_prf(prf_params::standard(n, a.bound(), l), rng);
      const vertex s = 1 + uniform_below(rng, n);
      const auto fast = collide(a, seed, s);
      const auto ref = collide_oracle(a, seed, s);
      ASSERT_TRUE(fast.same_result(ref)) << "n=" << n << " t=" << t;
      ASSERT_NE(fast.end, collide_end::budget);
      if (fast.has_pair()) {
        ++pairs;
        ASSERT_NE(fast.u, fast.v);
        ASSERT_EQ(a.value(fast.u), a.value(fast.v));
      }
      const auto rs = compute_reach_set(a, seed, s, n + 1);
      ASSERT_LE(fast.steps, 16 * rs.visited.size());
      ASSERT_LE(fast.steps, default_step_cap(n));
    }
    EXPECT_GT(pairs, 0);
  }
}
