#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <lowspace/instance_io.hpp>
#include <lowspace/instances.hpp>

using namespace lowspace;

TEST(F2, Examples) {
  EXPECT_EQ(f2(input_array::from_values({1, 2, 3})).f2, 3u);
  EXPECT_EQ(f2(input_array::from_values({1, 1, 2})).f2, 5u);
  const auto s = f2(input_array::from_values({7, 7}));
  EXPECT_EQ(s.f2, 4u);
  EXPECT_EQ(s.count(7), 2u);
  EXPECT_EQ(s.count(3), 0u);
}

// Double loop over all index pairs, independent of the count-based formula.
TEST(F2, MatchesPairCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = generate({60, 30, instance_kind::random_iid, 0, seed});
    std::uint64_t pairs = 0;
    for (vertex i = 1; i <= a.size(); ++i)
      for (vertex j = 1; j <= a.size(); ++j) pairs += a.value(i) == a.value(j) ? 1 : 0;
    EXPECT_EQ(f2(a).f2, pairs);
  }
}

TEST(Generate, Kinds) {
  const auto planted = generate({512, 0, instance_kind::planted_pairs, 1, 1});
  EXPECT_EQ(planted.bound(), 4 * 512u);
  EXPECT_EQ(f2(planted).f2, 514u);
  const auto distinct = generate({300, 0, instance_kind::all_distinct, 0, 1});
  EXPECT_FALSE(brute_ed(distinct).has_collision());
  EXPECT_EQ(f2(generate({4, 0, instance_kind::all_equal, 0, 1})).f2, 16u);
  const auto iid = generate({100, 10, instance_kind::random_iid, 0, 1});
  for (auto v : iid.values()) EXPECT_LE(v, 10u);
}

TEST(Generate, PlantedPairsExactlyK) {
  for (std::uint64_t k : {0ull, 1ull, 5ull, 50ull}) {
    const auto a = generate({100, 0, instance_kind::planted_pairs, k, 3 + k});
    const auto s = f2(a);
    EXPECT_EQ(s.f2, 100 + 2 * k);
    std::uint64_t doubled = 0;
    for (const auto& [v, c] : s.counts) {
      EXPECT_LE(c, 2u);
      doubled += c == 2 ? 1 : 0;
    }
    EXPECT_EQ(doubled, k);
  }
}

TEST(Generate, F2BoundsAndDeterminism) {
  for (auto kind : {instance_kind::all_distinct, instance_kind::planted_pairs, instance_kind::all_equal,
                    instance_kind::random_iid}) {
    const auto a = generate({77, 0, kind, 3, 9});
    const auto v = f2(a).f2;
    EXPECT_GE(v, 77u);
    EXPECT_LE(v, 77u * 77);
    EXPECT_EQ(a, generate({77, 0, kind, 3, 9}));
  }
}

TEST(Generate, InfeasibleSpecs) {
  EXPECT_THROW(generate({0, 0, instance_kind::all_distinct, 0, 0}), parameter_error);
  EXPECT_THROW(generate({10, 5, instance_kind::all_distinct, 0, 0}), parameter_error);
  EXPECT_THROW(generate({10, 0, instance_kind::planted_pairs, 6, 0}), parameter_error);
}

TEST(Brute, Examples) {
  const auto ed = brute_ed(input_array::from_values({4, 9, 4}));
  EXPECT_TRUE(ed.has_collision());
  EXPECT_EQ(ed.i, 1u);
  EXPECT_EQ(ed.j, 3u);
  EXPECT_TRUE(brute_ld(input_array::from_values({1, 2}), input_array::from_values({3, 4})).disjoint);
  const auto ld = brute_ld(input_array::from_values({1, 2}), input_array::from_values({2, 5}));
  EXPECT_FALSE(ld.disjoint);
  EXPECT_EQ(ld.i, 2u);
  EXPECT_EQ(ld.j, 1u);
  EXPECT_EQ(brute_si(input_array::from_values({1, 2, 3}), input_array::from_values({3, 4, 5})),
            std::vector<std::uint64_t>{3});
}

TEST(Brute, SmallestPairFirst) {
  const auto ed = brute_ed(input_array::from_values({5, 3, 8, 3, 5}));
  EXPECT_EQ(ed.i, 1u);
  EXPECT_EQ(ed.j, 5u);
}

TEST(InstanceKind, Names) {
  for (auto k : {instance_kind::all_distinct, instance_kind::planted_pairs, instance_kind::all_equal,
                 instance_kind::random_iid})
    EXPECT_EQ(parse_instance_kind(to_string(k)), k);
  EXPECT_THROW(parse_instance_kind("nope"), parameter_error);
}

TEST(InstanceIo, TextAndBinaryRoundTrip) {
  const auto a = generate({50, 0, instance_kind::planted_pairs, 2, 8});
  for (auto fmt : {instance_format::text, instance_format::binary}) {
    const auto bytes = encode_instance(a, fmt);
    EXPECT_EQ(decode_instance(bytes), a);
  }
  const auto text = encode_instance(input_array({4, 9, 4}, 10), instance_format::text);
  EXPECT_EQ(std::string(text.begin(), text.end()), "3 10\n4 9 4\n");
  const auto bin = encode_instance(input_array({4}, 10), instance_format::binary);
  EXPECT_EQ(bin.size(), 8u + 8 * 3);
  EXPECT_EQ(std::string(bin.begin(), bin.begin() + 8), "LSARRAY1");
}

TEST(InstanceIo, MalformedInputs) {
  auto decode = [](const std::string& s) {
    return decode_instance(std::vector<std::uint8_t>(s.begin(), s.end()));
  };
  EXPECT_THROW(decode(""), format_error);
  EXPECT_THROW(decode("3 10\n1 2"), format_error);
  EXPECT_THROW(decode("2 10\n1 2 3"), format_error);
  EXPECT_THROW(decode("2 10\n1 11"), format_error);
  EXPECT_THROW(decode("2 10\n1 x"), format_error);
  EXPECT_THROW(decode("0 10\n"), format_error);
  EXPECT_EQ(decode("2 10\n  1\n\n 2 \n"), input_array({1, 2}, 10));
  auto bin = encode_instance(input_array({4, 5}, 10), instance_format::binary);
  bin.pop_back();
  EXPECT_THROW(decode_instance(bin), format_error);
}

TEST(InstanceIo, Files) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "lowspace_io_test.bin").string();
  const auto a = generate({40, 0, instance_kind::random_iid, 0, 2});
  write_instance(path, a, instance_format::binary);
  EXPECT_EQ(read_instance(path), a);
  std::remove(path.c_str());
  EXPECT_THROW(read_instance((dir / "lowspace_missing_file").string()), io_error);
  EXPECT_THROW(write_instance("/nonexistent-dir/x", a, instance_format::text), io_error);
}
