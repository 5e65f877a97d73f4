#include <gtest/gtest.h>

#include <random>

#include "commutant/expsum.hpp"
#include "oracles.hpp"

using namespace commutant;

namespace {

// residue histogram of tr(AU + BV) over the 3^8 commuting pairs, n = 2, p = 3, A = E12, B = E21
const std::vector<std::int64_t> kE12E21p3{297, 324, 324};
constexpr std::uint64_t kCommuting22 = 88;
constexpr std::uint64_t kCommuting23 = 945;

oracle::Mat as_oracle(const MatF& m) { return {m.entries().begin(), m.entries().end()}; }

}  // namespace

TEST(ExpSumCounts, NormalizationAndValue) {
  ExpSumCounts s(3, {297, 324, 324});
  EXPECT_EQ(s.normalized().counts(), (std::vector<std::int64_t>{0, 27, 27}));
  EXPECT_EQ(s.as_integer(), -27);
  EXPECT_EQ(s, ExpSumCounts(3, {0, 27, 27}));
  EXPECT_FALSE(ExpSumCounts(5, {0, 1, 0, 0, 0}).as_integer());
  EXPECT_THROW(ExpSumCounts(3, {1, 2}), std::invalid_argument);
}

TEST(Magnitude, Examples) {
  EXPECT_EQ(magnitude(ExpSumCounts(5)), 0.0);
  EXPECT_NEAR(magnitude(ExpSumCounts(7, {9, 0, 0, 0, 0, 0, 0})), 9.0, 1e-12);
  EXPECT_NEAR(magnitude(ExpSumCounts(7, std::vector<std::int64_t>(7, 4))), 0.0, 1e-12);
  EXPECT_NEAR(magnitude(ExpSumCounts(3, {0, 27, 27})), 27.0, 1e-9);
}

TEST(ExpSum, Examples) {
  FieldCtx f(3);
  const MatF zero(f, 2, 2);
  EXPECT_EQ(exp_sum(zero, zero).as_integer(), static_cast<std::int64_t>(commuting_count(2, 3)));
  EXPECT_TRUE(exp_sum(MatF::identity(f, 2), zero).is_zero());
  EXPECT_EQ(exp_sum(MatF::unit(f, 2, 0, 1), MatF::unit(f, 2, 1, 0)), ExpSumCounts(3, kE12E21p3));
}

TEST(ExpSum, TripleOracleExamples) {
  FieldCtx f(3);
  const MatF zero(f, 2, 2);
  EXPECT_EQ(exp_sum_triple_oracle(zero, zero).as_integer(), static_cast<std::int64_t>(kCommuting23));
  EXPECT_TRUE(exp_sum_triple_oracle(MatF::identity(f, 2), zero).is_zero());
}

TEST(ExpSum, AgreesWithTripleSumExhaustivelyOverF2) {
  const TripleSumOracle oracle(2, 2);
  const CommutingTable table(2, 2);
  FieldCtx f(2);
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b) {
      const MatF A = MatF::from_index(f, 2, a), B = MatF::from_index(f, 2, b);
      ASSERT_EQ(exp_sum(A, B, table), oracle(A, B)) << a << " " << b;
    }
}

TEST(ExpSum, AgreesWithTripleSumOnSeededPairsOverF3) {
  const TripleSumOracle oracle(2, 3);
  const CommutingTable table(2, 3);
  FieldCtx f(3);
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::uint64_t> d(0, 80);
  for (int t = 0; t < 200; ++t) {
    const MatF A = MatF::from_index(f, 2, d(rng)), B = MatF::from_index(f, 2, d(rng));
    ASSERT_EQ(exp_sum(A, B, table), oracle(A, B));
  }
}

TEST(ExpSum, AgreesWithPairEnumeration) {
  for (std::uint64_t p : {2, 3}) {
    FieldCtx f(p);
    const CommutingTable table(2, p);
    for (std::uint64_t a = 0; a < p * p * p * p; a += 5)
      for (std::uint64_t b = 1; b < p * p * p * p; b += 7) {
        const MatF A = MatF::from_index(f, 2, a), B = MatF::from_index(f, 2, b);
        const auto h = oracle::exp_sum_pairs(as_oracle(A), as_oracle(B), 2, static_cast<std::int64_t>(p));
        ASSERT_EQ(exp_sum(A, B, table), ExpSumCounts(p, h));
      }
  }
}

TEST(ExpSum, SimultaneousConjugationInvariance) {
  FieldCtx f(5);
  const CommutingTable table(2, 5);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> d(0, 624);
  for (int t = 0; t < 40; ++t) {
    const MatF g = MatF::from_index(f, 2, d(rng));
    if (!is_invertible(g)) continue;
    const MatF A = MatF::from_index(f, 2, d(rng)), B = MatF::from_index(f, 2, d(rng));
    EXPECT_EQ(exp_sum(conjugate(g, A), conjugate(g, B), table), exp_sum(A, B, table));
  }
}

TEST(ExpSum, SAZeroIsNonNegativeInteger) {
  FieldCtx f(3);
  const CommutingTable table(2, 3);
  for (std::uint64_t a = 0; a < 81; ++a) {
    const auto v = exp_sum(MatF::from_index(f, 2, a), MatF(f, 2, 2), table).as_integer();
    ASSERT_TRUE(v);
    EXPECT_GE(*v, 0);
  }
}

TEST(CommutingCount, Values) {
  for (std::uint64_t p : {2, 3, 5}) EXPECT_EQ(commuting_count(1, p), p * p);
  EXPECT_EQ(commuting_count(2, 2), kCommuting22);
  EXPECT_EQ(commuting_count(2, 3), kCommuting23);
  EXPECT_EQ(commuting_count_brute(2, 2), kCommuting22);
  EXPECT_EQ(commuting_count_brute(2, 3), kCommuting23);
  for (std::uint64_t p : {2, 3, 5, 7})
    for (std::size_t n : {2, 3}) {
      const double ratio = static_cast<double>(commuting_count_classes(enumerate_classes(n, p), p)) /
                           std::pow(static_cast<double>(p), static_cast<double>(n * n + n));
      EXPECT_LE(ratio, 8.0) << n << " " << p;
    }
}

TEST(LemmaExp, ExhaustiveSmall) {
  for (std::uint64_t p : {2, 3}) {
    const auto r = lemma_exp_report(2, p, Mode::exhaustive);
    EXPECT_EQ(r.tested, checked_pow(p, 8) - 1);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_EQ(r.bound_violations, 0u);
    EXPECT_LE(r.max_ratio, 4.0);
  }
  const auto r3 = lemma_exp_report(2, 3, Mode::exhaustive);
  EXPECT_NEAR(r3.max_ratio, 8.0 / 9.0, 1e-12);
  EXPECT_EQ(r3.argmax_a, 0u);
}

TEST(LemmaExp, SampleModeIsSeeded) {
  const auto a = lemma_exp_report(2, 5, Mode::sample, 42, 300);
  const auto b = lemma_exp_report(2, 5, Mode::sample, 42, 300, false, Limits{1'000'000'000, 4});
  EXPECT_EQ(a.tested, 300u);
  EXPECT_EQ(a.nonzero_sums, b.nonzero_sums);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.violations, 0u);
}

TEST(StrataProbe, CoversEveryPair) {
  const auto h = strata_probe(2, 3);
  std::uint64_t total = 0;
  for (const auto& [bin, c] : h) total += c;
  EXPECT_EQ(total, 6560u);
  EXPECT_GT(h.at("zero"), 0u);
}
