#include "momentdecomp/power_sums.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "momentdecomp/error.hpp"
#include "oracle/oracle.hpp"
#include "test_support.hpp"

namespace momentdecomp {
namespace {

using oracle::compare;
using oracle::direct_sums4;
using oracle::ToleranceSpec;

constexpr ToleranceSpec kTight{1e-12, 1e-12};

void expect_sums_eq(const PowerSums& expected, const PowerSums& actual) {
  EXPECT_EQ(actual.n, expected.n);
  EXPECT_DOUBLE_EQ(actual.mean, expected.mean);
  EXPECT_DOUBLE_EQ(actual.ss, expected.ss);
  EXPECT_DOUBLE_EQ(actual.sc, expected.sc);
  EXPECT_DOUBLE_EQ(actual.sq, expected.sq);
}

void expect_close(const PowerSums& expected, const PowerSums& actual,
                  const ToleranceSpec& tol = kTight) {
  const auto report = compare(expected, actual, tol);
  EXPECT_TRUE(report.pass) << report.describe();
}

void expect_close(const PowerSums& expected, const PowerSums& actual, const ToleranceSpec& tol,
                  const PowerSums& scale_reference) {
  const auto report = compare(expected, actual, tol, scale_reference);
  EXPECT_TRUE(report.pass) << report.describe();
}

// Cauchy-Schwarz bounds with relative slack.
void expect_valid(const PowerSums& ps) {
  EXPECT_GE(ps.ss, 0.0);
  EXPECT_GE(ps.sq, 0.0);
  const double n = static_cast<double>(ps.n);
  EXPECT_GE(n * ps.sq, ps.ss * ps.ss * (1.0 - 1e-9));
  EXPECT_LE(ps.sc * ps.sc, ps.ss * ps.sq * (1.0 + 1e-9) + 1e-300);
  if (ps.n <= 1) {
    EXPECT_EQ(ps.ss, 0.0);
    EXPECT_EQ(ps.sc, 0.0);
    EXPECT_EQ(ps.sq, 0.0);
  }
}

TEST(PowerSums, EmptyIsAllZero) {
  expect_sums_eq(PowerSums{0, 0, 0, 0, 0}, empty());
  expect_sums_eq(empty(), from_sequence(std::vector<double>{}));
}

TEST(PowerSums, EmptyIsMergeIdentity) {
  const std::vector<double> xs{1.5, -2.0, 7.25};
  const PowerSums b = from_sequence(xs);
  EXPECT_EQ(merge2(empty(), b), b);
  EXPECT_EQ(merge2(b, empty()), b);
}

TEST(PowerSums, FromValue) {
  expect_sums_eq(PowerSums{1, 5, 0, 0, 0}, from_value(5));
  expect_sums_eq(PowerSums{1, 0, 0, 0, 0}, from_value(0));
}

TEST(PowerSums, MergeTwoSingletonsMatchesTwoPass) {
  const std::vector<double> xs{1, 3};
  const PowerSums expected = direct_sums4(xs);
  expect_sums_eq(PowerSums{2, 2, 2, 0, 2}, expected);
  expect_sums_eq(expected, merge2(from_value(1), from_value(3)));
}

TEST(PowerSums, PushMatchesTwoPass) {
  const std::vector<double> xs{1, 3, 5};
  const PowerSums expected = direct_sums4(xs);
  expect_sums_eq(PowerSums{3, 3, 8, 0, 32}, expected);
  expect_sums_eq(expected, push(PowerSums{2, 2, 2, 0, 2}, 5));
}

TEST(PowerSums, PushConstantAndDegenerateStart) {
  for (double c : {0.1, -3.7, 1e9 + 0.5}) {
    expect_sums_eq(PowerSums{2, c, 0, 0, 0}, push(from_value(c), c));
    expect_sums_eq(from_value(c), push(empty(), c));
  }
}

TEST(PowerSums, FromSequenceExamples) {
  expect_sums_eq(PowerSums{3, 3, 8, 0, 32}, from_sequence(std::vector<double>{1, 3, 5}));
  expect_sums_eq(from_value(4.25), from_sequence(std::vector<double>{4.25}));
  expect_sums_eq(PowerSums{4, 2, 0, 0, 0}, from_sequence(std::vector<double>{2, 2, 2, 2}));
}

TEST(PowerSums, RejectsNonFinite) {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(from_value(inf), StatsError);
  EXPECT_THROW(push(empty(), nan), StatsError);
  EXPECT_THROW(from_sequence(std::vector<double>{1.0, nan}), StatsError);
}

TEST(PowerSums, MergeExample) {
  const PowerSums ab = from_sequence(std::vector<double>{1, 3});
  expect_sums_eq(PowerSums{3, 3, 8, 0, 32}, merge2(ab, from_value(5)));
}

TEST(PowerSums, EqualMeansAddSumOfSquaresExactly) {
  const PowerSums a = from_sequence(std::vector<double>{1, 3});      // mean 2
  const PowerSums b = from_sequence(std::vector<double>{0, 2, 4});   // mean 2
  const PowerSums p = merge2(a, b);
  EXPECT_EQ(p.ss, a.ss + b.ss);
  EXPECT_EQ(p.sc, a.sc + b.sc);
  EXPECT_EQ(p.sq, a.sq + b.sq);
}

TEST(PowerSums, SubtractExample) {
  const PowerSums pooled = from_sequence(std::vector<double>{1, 3, 5});
  expect_sums_eq(PowerSums{2, 2, 2, 0, 2}, subtract(pooled, from_value(5)));
}

TEST(PowerSums, SubtractRejectsImpossibleRemainder) {
  // ss_1 = 0 - 0 - (1*2/1) * (5 - 0)^2 = -50
  try {
    subtract(PowerSums{2, 0, 0, 0, 0}, from_value(5));
    FAIL() << "expected an inconsistency error";
  } catch (const StatsError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInconsistent);
    EXPECT_NE(std::string(e.what()).find("inconsistent group statistics"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("order-2"), std::string::npos);
  }
}

TEST(PowerSums, SubtractRequiresRemainder) {
  const PowerSums a = from_sequence(std::vector<double>{1, 2, 3});
  try {
    subtract(a, a);
    FAIL();
  } catch (const StatsError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoRemainder);
    EXPECT_NE(std::string(e.what()).find("no remainder group"), std::string::npos);
  }
  EXPECT_THROW(subtract(from_value(1), a), StatsError);
}

TEST(PowerSums, SubtractClampsRoundingNegatives) {
  // Remainder is a constant group: its ss may come out as a tiny negative.
  const PowerSums a = from_sequence(std::vector<double>{0.1, 0.1, 0.1});
  const PowerSums b = from_sequence(std::vector<double>{0.3, -0.7, 12.9, 4.4});
  const PowerSums r = subtract(merge2(a, b), b);
  EXPECT_GE(r.ss, 0.0);
  EXPECT_GE(r.sq, 0.0);
  EXPECT_NEAR(r.ss, 0.0, 1e-9 * (b.ss + 1));
}

TEST(PowerSums, SubtractWarnsOnSkewInconsistency) {
  // Equal means make the remainder's sc = pooled.sc - b.sc with no cross
  // terms, so only sc^2 <= ss*sq breaks.
  PowerSums a = from_sequence(std::vector<double>{1, 2, 3, 4, 10});
  const PowerSums b = from_sequence(std::vector<double>{3, 5});
  PowerSums pooled = merge2(a, b);
  pooled.sc += 40.0 * std::sqrt(pooled.ss * pooled.sq);
  const auto result = subtract_checked(pooled, b);
  ASSERT_FALSE(result.warnings.empty());
  EXPECT_NE(result.warnings.front().find("sc^2"), std::string::npos);
}

TEST(PowerSums, SubtractTruncatedOrderIgnoresHigherFields) {
  // Order-2 inputs carry no sq; validation must not look at it.
  PowerSums pooled{10, 1.0, 20.0, 0.0, 0.0};
  PowerSums known{4, 2.0, 5.0, 0.0, 0.0};
  const auto r = subtract_checked(pooled, known, 2);
  EXPECT_EQ(r.remainder.n, 6);
  EXPECT_DOUBLE_EQ(r.remainder.mean, (10.0 * 1.0 - 4.0 * 2.0) / 6.0);
  EXPECT_DOUBLE_EQ(r.remainder.ss, 20.0 - 5.0 - 4.0 * 10.0 / 6.0 * 1.0);
  EXPECT_EQ(r.remainder.sq, 0.0);
}

TEST(PowerSums, PoolManyExample) {
  const std::vector<PowerSums> groups{from_value(0), from_value(3), from_value(6)};
  const std::vector<double> xs{0, 3, 6};
  const PowerSums expected = direct_sums4(xs);
  expect_sums_eq(PowerSums{3, 3, 18, 0, 162}, expected);
  expect_sums_eq(expected, pool_many(groups));
}

TEST(PowerSums, PoolManySingleAndEmpty) {
  const PowerSums a = from_sequence(std::vector<double>{1.5, 2.5, 9.0, -4.0});
  const std::vector<PowerSums> one{a};
  EXPECT_EQ(pool_many(one), a);
  EXPECT_EQ(pool_many(std::span<const PowerSums>{}), empty());
}

// ---- Properties over generated data ---------------------------------------

class PowerSumsProperty : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20210115};

  PowerSums random_group(std::size_t max_n = 200) {
    const auto xs = testing::mixed_values(rng, testing::uniform_size(rng, 1, max_n));
    return from_sequence(xs);
  }
};

TEST_F(PowerSumsProperty, CauchySchwarzAndSingletonsHoldEverywhere) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    const PowerSums b = random_group();
    const PowerSums c = random_group();
    expect_valid(a);
    expect_valid(merge2(a, b));
    const std::vector<PowerSums> abc{a, b, c};
    expect_valid(pool_many(abc));
    expect_valid(subtract(merge2(a, b), b));
    expect_valid(push(a, testing::uniform_values(rng, 1, -1e3, 1e3)[0]));
  }
}

TEST_F(PowerSumsProperty, MergeIsCommutative) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    const PowerSums b = random_group();
    expect_close(merge2(a, b), merge2(b, a));
  }
}

TEST_F(PowerSumsProperty, MergeIsAssociative) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    const PowerSums b = random_group();
    const PowerSums c = random_group();
    expect_close(merge2(merge2(a, b), c), merge2(a, merge2(b, c)));
  }
}

TEST_F(PowerSumsProperty, MergeIdentity) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    EXPECT_EQ(merge2(a, empty()), a);
    EXPECT_EQ(merge2(empty(), a), a);
  }
}

TEST_F(PowerSumsProperty, MeanOffsetIdentities) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    const PowerSums b = random_group();
    const PowerSums p = merge2(a, b);
    const double n = static_cast<double>(a.n + b.n);
    const double scale = std::abs(a.mean) + std::abs(b.mean) + 1.0;
    const double lhs_a = a.mean - p.mean;
    const double rhs_a = static_cast<double>(b.n) / n * (a.mean - b.mean);
    EXPECT_NEAR(lhs_a, rhs_a, 1e-12 * scale);
    const double lhs_b = b.mean - p.mean;
    const double rhs_b = static_cast<double>(a.n) / n * (b.mean - a.mean);
    EXPECT_NEAR(lhs_b, rhs_b, 1e-12 * scale);
    // (x1 - xp) = -(n2/n1) (x2 - xp)
    EXPECT_NEAR(lhs_a, -static_cast<double>(b.n) / static_cast<double>(a.n) * lhs_b,
                1e-12 * scale * (1.0 + static_cast<double>(b.n) / static_cast<double>(a.n)));
  }
}

TEST_F(PowerSumsProperty, SubtractInvertsMerge) {
  for (int i = 0; i < 1000; ++i) {
    const PowerSums a = random_group();
    const PowerSums b = random_group();
    const PowerSums pooled = merge2(a, b);
    // Recovering a cancels terms of the pooled magnitude.
    expect_close(a, subtract(pooled, b), kTight, pooled);
  }
}

TEST_F(PowerSumsProperty, PoolManyMatchesMergeFold) {
  for (int i = 0; i < 300; ++i) {
    std::vector<PowerSums> groups(testing::uniform_size(rng, 1, 8));
    for (auto& g : groups) g = random_group();
    PowerSums fold = empty();
    for (const auto& g : groups) fold = merge2(fold, g);
    expect_close(fold, pool_many(groups));
  }
}

TEST_F(PowerSumsProperty, MatchesTwoPassOracle) {
  for (int i = 0; i < 60; ++i) {
    const auto xs = testing::uniform_values(rng, testing::uniform_size(rng, 1, 10000), -1e3, 1e3);
    expect_close(direct_sums4(xs), from_sequence(xs), {1e-10, 1e-10});
  }
}

TEST_F(PowerSumsProperty, ShiftInvariance) {
  for (int i = 0; i < 50; ++i) {
    // Quantized so that xs + c is exactly representable.
    const auto xs = testing::quantized(testing::normal_values(rng, testing::uniform_size(rng, 2, 1000)));
    const double c = testing::quantized({std::uniform_real_distribution<double>(-1e9, 1e9)(rng)})[0];
    std::vector<double> shifted(xs);
    for (auto& x : shifted) x += c;
    const PowerSums base = from_sequence(xs);
    const PowerSums moved = from_sequence(shifted);
    const double s = std::sqrt(base.ss / static_cast<double>(base.n));
    const double n = static_cast<double>(base.n);
    EXPECT_NEAR(moved.ss, base.ss, 1e-9 * base.ss);
    EXPECT_NEAR(moved.sc, base.sc, 1e-9 * n * s * s * s);
    EXPECT_NEAR(moved.sq, base.sq, 1e-9 * base.sq);
    EXPECT_NEAR(moved.mean - c, base.mean, 1e-12 * std::abs(c) + 1e-12);
  }
}

TEST_F(PowerSumsProperty, PowerOfTwoScalingIsExact) {
  for (int i = 0; i < 200; ++i) {
    const auto xs = testing::mixed_values(rng, testing::uniform_size(rng, 1, 300));
    const int k = std::uniform_int_distribution<int>(-20, 20)(rng);
    const double a = std::ldexp(1.0, k);
    std::vector<double> scaled(xs);
    for (auto& x : scaled) x *= a;
    const PowerSums base = from_sequence(xs);
    const PowerSums s = from_sequence(scaled);
    EXPECT_EQ(s.mean, base.mean * a);
    EXPECT_EQ(s.ss, base.ss * a * a);
    EXPECT_EQ(s.sc, base.sc * a * a * a);
    EXPECT_EQ(s.sq, base.sq * a * a * a * a);
  }
}

}  // namespace
}  // namespace momentdecomp
