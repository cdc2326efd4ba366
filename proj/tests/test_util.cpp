#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "panolayout/common.hpp"
#include "panolayout/random.hpp"

namespace panolayout {
namespace {

TEST(Angles, WrapDegrees) {
  EXPECT_DOUBLE_EQ(wrap_degrees(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(360.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(725.0), 5.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(-90.0), 270.0);
  EXPECT_DOUBLE_EQ(wrap_degrees(359.5), 359.5);
  EXPECT_DOUBLE_EQ(wrap_degrees(-720.0), 0.0);
}

TEST(Angles, CircularDifference) {
  EXPECT_DOUBLE_EQ(circular_diff_degrees(1.0, 359.0), 2.0);
  EXPECT_DOUBLE_EQ(circular_diff_degrees(359.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(circular_diff_degrees(180.0, -180.0), 0.0);
  EXPECT_DOUBLE_EQ(circular_diff_degrees(0.0, 180.0), 180.0);
  EXPECT_DOUBLE_EQ(circular_diff_degrees(10.0, 350.0), 20.0);
  EXPECT_DOUBLE_EQ(circular_diff_degrees(45.0, 45.0), 0.0);
}

TEST(Angles, DegreesRadiansRoundTrip) {
  for (double d = -360.0; d <= 360.0; d += 7.3) {
    EXPECT_NEAR(rad_to_deg(deg_to_rad(d)), d, 1e-12);
  }
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  for (int jobs : {1, 2, 4, 9}) {
    std::vector<std::atomic<int>> hits(57);
    for (auto& h : hits) h = 0;
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, MoreJobsThanWork) {
  std::atomic<int> total{0};
  parallel_for(3, 16, [&](std::size_t) { total++; });
  EXPECT_EQ(total.load(), 3);
}

TEST(ParallelFor, EmptyRange) {
  bool called = false;
  parallel_for(0, 4, [&](std::size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST(Errors, HierarchyAndMessages) {
  try {
    throw ValidationError("bad input");
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "bad input");
  }
  EXPECT_THROW(throw IoError("x"), Error);
  EXPECT_THROW(throw EstimationError("x"), Error);
  EXPECT_THROW(throw ConfigError("x"), Error);
}

// Reference outputs of the splitmix64 sequence started at state 0.
TEST(SplitMix, KnownSequence) {
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64_next(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64_next(s), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64_next(s), 0x06c45d188009454fULL);
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(1234), b(1234);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiffer) {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  EXPECT_LT(same, 3);
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, UniformRangeAndMean) {
  Rng rng(11);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform(-2.0, 6.0);
    EXPECT_GE(u, -2.0);
    EXPECT_LT(u, 6.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 2.0, 0.05);
}

TEST(Rng, UniformIntInclusiveEndpoints) {
  Rng rng(3);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(rng.uniform_int(-2, 3));
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_TRUE(seen.count(-2));
  EXPECT_TRUE(seen.count(3));
  EXPECT_THROW(rng.uniform_int(4, 2), ValidationError);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rng.uniform_int(5, 5), 5);
}

TEST(Rng, NormalMoments) {
  Rng rng(99);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.02);
}

// A normal draw always consumes exactly two uniforms, so interleaving
// other draws never shifts later values.
TEST(Rng, NormalConsumesFixedDraws) {
  Rng a(42), b(42);
  a.normal();
  b.uniform();
  b.uniform();
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsAreOrderSensitiveAndIndependent) {
  const std::uint64_t master = 555;
  Rng a = Rng::stream(master, {1, 2});
  Rng b = Rng::stream(master, {2, 1});
  EXPECT_NE(a.next_u64(), b.next_u64());
  // Same path reproduces the same stream.
  Rng d = Rng::stream(master, {1, 2});
  Rng e = Rng::stream(master, {1, 2});
  for (int i = 0; i < 16; ++i) EXPECT_EQ(d.next_u64(), e.next_u64());
  // Longer paths branch off rather than extend.
  Rng f = Rng::stream(master, {1});
  Rng g = Rng::stream(master, {1, 0});
  int same = 0;
  for (int i = 0; i < 64; ++i) same += f.next_u64() == g.next_u64();
  EXPECT_LT(same, 3);
}

TEST(Rng, StreamDiffersFromParent) {
  Rng parent(888);
  Rng child = Rng::stream(888, {0});
  int same = 0;
  for (int i = 0; i < 64; ++i) same += parent.next_u64() == child.next_u64();
  EXPECT_LT(same, 3);
}

}  // namespace
}  // namespace panolayout
