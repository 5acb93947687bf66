#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <lowspace/instances.hpp>
#include <lowspace/stats.hpp>

using namespace lowspace;

TEST(Estimate, NormalInterval) {
  const auto e = make_estimate(250, 1000);
  EXPECT_DOUBLE_EQ(e.point, 0.25);
  const double half = 1.959963984540054 * std::sqrt(0.25 * 0.75 / 1000);
  EXPECT_NEAR(e.ci_lo, 0.25 - half, 1e-12);
  EXPECT_NEAR(e.ci_hi, 0.25 + half, 1e-12);
  const auto zero = make_estimate(0, 1000);
  EXPECT_EQ(zero.ci_lo, 0);
  EXPECT_EQ(zero.ci_hi, 0);
  EXPECT_THROW(make_estimate(1, 0), parameter_error);
  EXPECT_THROW(make_estimate(5, 4), parameter_error);
}

TEST(Estimate, MinimumSamples) {
  const auto a = input_array::from_values({1, 2, 3, 4});
  EXPECT_THROW(estimate_visit_prob(a, 1, 1, oracle_mode::pseudorandom(), 999), parameter_error);
  EXPECT_THROW(estimate_star_rate(1, 10), parameter_error);
}

TEST(RandomOracle, ConsistentAndOrderFree) {
  random_oracle_table t1(50, 200, 3), t2(50, 200, 3);
  t1.reset(99);
  t2.reset(99);
  std::vector<hash_value> forward, backward(201, hash_value::star());
  for (std::uint64_t y = 1; y <= 200; ++y) forward.push_back(t1(y));
  for (std::uint64_t y = 200; y >= 1; --y) backward[y] = t2(y);
  for (std::uint64_t y = 1; y <= 200; ++y) {
    EXPECT_EQ(forward[y - 1], backward[y]);
    EXPECT_EQ(t1(y), forward[y - 1]);  // repeated query
  }
  t1.reset(100);
  int changed = 0;
  for (std::uint64_t y = 1; y <= 200; ++y) changed += t1(y) == forward[y - 1] ? 0 : 1;
  EXPECT_GT(changed, 100);
  EXPECT_THROW(t1(0), domain_error);
  EXPECT_THROW(t1(201), domain_error);
}

TEST(RandomOracle, StarRate) {
  random_oracle_table t(10, 100000, 2);
  t.reset(5);
  int stars = 0;
  for (std::uint64_t y = 1; y <= 100000; ++y) stars += t(y).is_star() ? 1 : 0;
  EXPECT_NEAR(stars / 100000.0, 0.25, 5 * std::sqrt(0.25 * 0.75 / 100000));
}

TEST(VisitProb, SingleVertexIsCertain) {
  const auto a = input_array::from_values({3});
  for (auto mode : {oracle_mode::pseudorandom(), oracle_mode::random_oracle()}) {
    const auto e = estimate_visit_prob(a, 1, 1, mode, 1000);
    EXPECT_EQ(e.point, 1.0);
  }
}

TEST(VisitProb, ReproducibleAndWorkerIndependent) {
  const auto a = generate({256, 0, instance_kind::all_distinct, 0, 3});
  const auto e1 = estimate_visit_prob(a, 5, 3, oracle_mode::pseudorandom(), 4000, {7, 1});
  const auto e2 = estimate_visit_prob(a, 5, 3, oracle_mode::pseudorandom(), 4000, {7, 1});
  const auto e3 = estimate_visit_prob(a, 5, 3, oracle_mode::pseudorandom(), 4000, {7, 3});
  EXPECT_EQ(e1.hits, e2.hits);
  EXPECT_EQ(e1.hits, e3.hits);
}

TEST(VisitProb, PseudorandomTracksRandomOracle) {
  const std::uint64_t n = 1024;
  const auto a = generate({n, 0, instance_kind::all_distinct, 0, 4});
  const unsigned l = hinted_level(n, f2(a).f2);
  EXPECT_EQ(l, 1u);
  const auto pr = estimate_visit_prob(a, 10, l, oracle_mode::pseudorandom(), 20000, {1, 1});
  const auto ro = estimate_visit_prob(a, 10, l, oracle_mode::random_oracle(), 20000, {1, 1});
  EXPECT_GE(pr.point, 1 / (32 * std::sqrt(1024.0)));
  EXPECT_LE(pr.point, 32 / std::sqrt(1024.0));
  EXPECT_GE(pr.point / ro.point, 0.25);
  EXPECT_LE(pr.point / ro.point, 4);
}

// n = 2, a = (7, 7) over F_11 with tau = 2: enumerate all gate/target seeds
// and both starts. Both vertices are reached iff the gate opens and h(7) != s.
TEST(PairProb, TinyFieldExactVersusMonteCarlo) {
  using F = small_prime_field<11>;
  const auto a = input_array::from_values({7, 7});
  std::uint64_t good = 0, total = 0;
  for (std::uint64_t g0 = 0; g0 < 11; ++g0)
    for (std::uint64_t g1 = 0; g1 < 11; ++g1)
      for (std::uint64_t r0 = 0; r0 < 11; ++r0)
        for (std::uint64_t r1 = 0; r1 < 11; ++r1)
          for (std::uint64_t s = 1; s <= 2; ++s) {
            ++total;
            const bool open = (g0 + g1 * 7) % 11 % 2 == 1;
            const std::uint64_t t = 1 + (r0 + r1 * 7) % 11 % 2;
            good += open && t != s ? 1 : 0;
          }
  const double exact = static_cast<double>(good) / static_cast<double>(total);
  EXPECT_DOUBLE_EQ(exact, 5.0 / 22);

  const auto e = estimate_pair_prob<F>(a, 1, oracle_mode::pseudorandom(), 40000, {3, 1});
  EXPECT_NEAR(e.point, exact, 4 * std::sqrt(exact * (1 - exact) / 40000));
  const auto ro = estimate_pair_prob(a, 1, oracle_mode::random_oracle(), 40000, {3, 1});
  EXPECT_NEAR(ro.point, 0.25, 4 * std::sqrt(0.25 * 0.75 / 40000));
}

TEST(PairProb, RequiresSinglePair) {
  EXPECT_THROW(estimate_pair_prob(input_array::from_values({1, 2, 3}), 1, oracle_mode::pseudorandom(), 1000),
               parameter_error);
  EXPECT_THROW(estimate_pair_prob(input_array::from_values({1, 1, 1}), 1, oracle_mode::pseudorandom(), 1000),
               parameter_error);
  EXPECT_EQ(unique_pair(input_array::from_values({3, 5, 3})), (std::pair<vertex, vertex>{1, 3}));
}

TEST(PairProb, BaselineNotFarBelow) {
  const auto a = generate({128, 0, instance_kind::planted_pairs, 1, 2});
  const auto pr = estimate_pair_prob(a, 4, oracle_mode::pseudorandom(), 50000, {2, 1});
  const auto ro = estimate_pair_prob(a, 4, oracle_mode::random_oracle(), 50000, {2, 1});
  EXPECT_GT(pr.hits, 20u);
  EXPECT_GE(ro.point, pr.point / 4);
}

TEST(StarRate, MatchesClosedForm) {
  for (unsigned l : {1u, 4u, 8u}) {
    const auto e = estimate_star_rate(l, 20000, 256, 0, {l, 1});
    const double q = star_probability(l).to_double();
    EXPECT_NEAR(e.point, q, 5 * std::sqrt(q * (1 - q) / 20000)) << "l=" << l;
  }
}

TEST(KwiseEnumeration, ExactlyUniform) {
  for (unsigned k : {1u, 2u, 3u}) {
    EXPECT_TRUE(kwise_exhaustive_uniform<5>(k));
    EXPECT_TRUE(kwise_exhaustive_uniform<7>(k));
  }
  EXPECT_THROW(kwise_exhaustive_uniform<5>(6), parameter_error);
}

TEST(FitSlope, ExactLine) {
  EXPECT_NEAR(fit_slope({1, 2, 3}, {2, 3.5, 5}), 1.5, 1e-12);
  EXPECT_THROW(fit_slope({1}, {1}), parameter_error);
  EXPECT_THROW(fit_slope({2, 2}, {1, 3}), parameter_error);
}

TEST(ScalingBench, SmallRunAndPreconditions) {
  const auto t = scaling_bench({64, 128, 256}, 3, 5);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.steps.size(), 3u);
    EXPECT_GT(r.median_steps, 0u);
  }
  EXPECT_TRUE(std::isfinite(t.slope));
  EXPECT_THROW(scaling_bench({64}, 1), parameter_error);
  EXPECT_THROW(scaling_bench({64, 100}, 1), parameter_error);
  EXPECT_THROW(scaling_bench({128, 64}, 1), parameter_error);
  EXPECT_THROW(scaling_bench({64, 128}, 0), parameter_error);
}

// Distinct inputs never stop early, so every block's steps stay near its budget.
TEST(ScalingBench, DistinctStepsBoundedByBudgets) {
  const std::uint64_t n = 512;
  const auto a = generate({n, 0, instance_kind::all_distinct, 0, 6});
  solver_config cfg;
  const auto r = element_distinctness(a, cfg);
  EXPECT_LE(r.stats.total_steps,
            prf_params::max_levels(n) * (ed_budget_per_level(n, cfg) + default_step_cap(n)));
}
