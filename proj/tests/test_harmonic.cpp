#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "commutant/harmonic.hpp"

using namespace commutant;

namespace {

// both sides evaluated independently, left side truncated at R = 200000
constexpr double kLhs1 = 1.1199996758;
constexpr double kRhs1 = 1.12;
constexpr double kLhs2 = 1.26286777;
constexpr double kRhs2 = 1.26286932;

}  // namespace

TEST(Weight, Examples) {
  const std::vector<double> zero(4, 0.0), half(4, 0.5);
  EXPECT_EQ(weight_w(zero), 1.0);
  EXPECT_NEAR(weight_w(std::vector<double>{0.2, 3.0, 0.1, 0.0}), 0.0, 1e-30);
  EXPECT_NEAR(weight_w(half), std::pow(4 / (std::numbers::pi * std::numbers::pi), 4), 1e-15);
  EXPECT_EQ(weight_what(zero), 1.0);
  EXPECT_EQ(weight_what(std::vector<double>{0.1, -1.0, 0, 0}), 0.0);
  EXPECT_EQ(weight_what(std::vector<double>{0.5, 0, 0, 0}), 0.5);
}

TEST(Weight, LowerBoundOnGrid) {
  const double floor4 = std::pow(4 / (std::numbers::pi * std::numbers::pi), 4);
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= 10; ++b) {
      const std::vector<double> x{a / 10.0, b / 10.0, (a + b) / 20.0, -a / 10.0};
      std::vector<double> h(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) h[i] = x[i] / 2;
      EXPECT_GE(weight_w(h), floor4 - 1e-15);
      EXPECT_LE(weight_w(x), 1.0);
      if (std::abs(a) < 10 && std::abs(b) < 10) {
        EXPECT_GT(weight_w(x), 0.0);
      }
    }
}

TEST(Weight, TransformEvenAndSupported) {
  for (double a = -1.5; a <= 1.5; a += 0.125) {
    const std::vector<double> x{a, 0.25}, y{-a, -0.25};
    EXPECT_EQ(weight_what(x), weight_what(y));
    EXPECT_EQ(weight_what(x) > 0, std::abs(a) < 1);
  }
}

TEST(Poisson, FrozenConfigurations) {
  const auto r1 = poisson_check({0}, {1, 2, 5, 200000, 1e-3});
  EXPECT_TRUE(r1.passed);
  EXPECT_NEAR(r1.lhs, kLhs1, 1e-8);
  EXPECT_NEAR(r1.rhs, kRhs1, 1e-12);
  const auto r2 = poisson_check({0, 1, 0, 0}, {2, 2, 5, 200000, 1e-3});
  EXPECT_TRUE(r2.passed);
  EXPECT_NEAR(r2.lhs, kLhs2, 1e-6);
  EXPECT_NEAR(r2.rhs, kRhs2, 1e-6);
  EXPECT_LT(std::abs(r2.rhs_imag), 1e-9);
}

TEST(Poisson, SeededResidueSamples) {
  struct Config {
    std::size_t n;
    double T;
    std::uint64_t p;
  };
  std::mt19937_64 rng(2024);
  for (const Config c : {Config{1, 2, 5}, Config{2, 2, 5}, Config{2, 3, 7}}) {
    std::uniform_int_distribution<std::int64_t> d(0, static_cast<std::int64_t>(c.p) - 1);
    for (int t = 0; t < 20; ++t) {
      std::vector<std::int64_t> u(c.n * c.n);
      for (auto& x : u) x = d(rng);
      const auto r = poisson_check(u, {c.n, c.T, c.p, 20000, 1e-2});
      EXPECT_TRUE(r.passed) << r.lhs << " " << r.rhs << " " << r.tail_bound;
    }
  }
}

TEST(Poisson, ToleranceUnreachable) {
  EXPECT_THROW(poisson_check({0}, {1, 2, 5, 10, 1e-9}), std::invalid_argument);
  EXPECT_THROW(poisson_check(std::vector<std::int64_t>(9, 0), {3, 2, 5, 10, 1}), std::invalid_argument);
}

TEST(Exponent, Examples) {
  EXPECT_EQ(exponent_general({8, 6, 2}).exponent, Rational(16, 3));
  EXPECT_EQ(exponent_general({18, 12, 4}).exponent, Rational(21, 2));
  EXPECT_EQ(exponent_general({10, 7, 0}).exponent, Rational(7));
  EXPECT_EQ(exponent_general({8, 6, 2}).dimension_growth, 5);
  EXPECT_THROW(exponent_general({6, 6, 2}), std::invalid_argument);
  EXPECT_THROW(exponent_general({8, 2, 6}), std::invalid_argument);
}

TEST(Exponent, RecoversMainExponent) {
  for (std::int64_t n = 2; n <= 10; ++n)
    EXPECT_EQ(exponent_general({2 * n * n, n * n + n, 2 * (n - 1)}).exponent, Rational(n * n + 2) - Rational(2, n + 1));
}

TEST(OptimizeP, Examples) {
  const auto c = optimize_p(2, 10);
  EXPECT_EQ(c.p, 23u);
  EXPECT_NEAR(c.target, 21.544, 1e-3);
  EXPECT_EQ(optimize_p(3, 10).exponent, Rational(10, 8));
  for (double T : {10.0, 100.0, 1000.0}) {
    const auto r = optimize_p(2, T);
    EXPECT_LE(std::max(r.term_main, r.term_error) / std::min(r.term_main, r.term_error), 100.0);
    EXPECT_GE(static_cast<double>(r.p), T);
    EXPECT_LE(static_cast<double>(r.p), 2 * T * T);
    EXPECT_DOUBLE_EQ(r.total(), r.term_main + r.term_error);
  }
  EXPECT_EQ(optimize_p(2, 1).p, 2u);
}
