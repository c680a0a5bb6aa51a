// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "behave/random.hpp"

namespace behave {
namespace {

// Published SplitMix64 outputs for seed 0.
TEST(Rng, MatchesReferenceSplitMix64Stream) {
  Rng rng(0);
  EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng(), 0x06c45d188009454fULL);
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
  }
}

TEST(Rng, NormalHasRoughlyUnitMoments) {
  Rng rng(3);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(9), b(9);
  (void)a.split(1);
  EXPECT_EQ(a(), b());
}

TEST(Shuffle, IsAPermutationAndSeeded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<int> v(50), w(50);
    std::iota(v.begin(), v.end(), 0);
    w = v;
    Rng r1(seed), r2(seed);
    shuffle(std::span<int>(v), r1);
    shuffle(std::span<int>(w), r2);
    EXPECT_EQ(v, w);
    std::sort(v.begin(), v.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(v[i], i);
  }
}

TEST(HashBytes, DependsOnSeedAndBytes) {
  EXPECT_NE(hash_bytes("Pan", 0), hash_bytes("Pan", 1));
  EXPECT_NE(hash_bytes("Pan", 0), hash_bytes("Gun", 0));
  EXPECT_EQ(hash_bytes("Pan", 5), hash_bytes("Pan", 5));
}

}  // namespace
}  // namespace behave
