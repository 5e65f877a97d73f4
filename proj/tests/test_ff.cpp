#include <gtest/gtest.h>

#include <random>

#include "commutant/charpoly.hpp"
#include "commutant/ff.hpp"

using namespace commutant;

namespace {

Poly P(std::uint64_t p, std::vector<std::int64_t> c) { return Poly::from_signed(FieldCtx(p), c); }

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return 0;
      mu = -mu;
    }
  return n > 1 ? -mu : mu;
}

std::vector<Poly> monics(const FieldCtx& ctx, unsigned d) {
  std::vector<Poly> out;
  const std::uint64_t total = checked_pow(ctx.p(), d);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Residue> c(d + 1);
    std::uint64_t x = idx;
    for (unsigned i = 0; i < d; ++i) {
      c[i] = static_cast<Residue>(x % ctx.p());
      x /= ctx.p();
    }
    c[d] = 1;
    out.emplace_back(ctx, c);
  }
  return out;
}

MatF random_matrix(const FieldCtx& ctx, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, checked_pow(ctx.p(), static_cast<unsigned>(n * n)) - 1);
  return MatF::from_index(ctx, n, d(rng));
}

}  // namespace

TEST(FieldCtx, RejectsNonPrimes) {
  EXPECT_THROW(FieldCtx(1), std::invalid_argument);
  EXPECT_THROW(FieldCtx(9), std::invalid_argument);
  EXPECT_NO_THROW(FieldCtx(101));
}

TEST(FieldCtx, Arithmetic) {
  FieldCtx f(7);
  EXPECT_EQ(f.reduce(-1), 6u);
  EXPECT_EQ(f.mul(3, 5), 1u);
  for (Residue a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  EXPECT_EQ(f.pow(3, 6), 1u);
  EXPECT_EQ(f.sub(2, 5), 4u);
  EXPECT_THROW(f.inv(0), std::domain_error);
}

TEST(Irreducibles, SmallCases) {
  auto i21 = enumerate_irreducibles(FieldCtx(2), 1);
  ASSERT_EQ(i21.size(), 2u);
  EXPECT_EQ(i21[0], P(2, {0, 1}));
  EXPECT_EQ(i21[1], P(2, {1, 1}));

  auto i22 = enumerate_irreducibles(FieldCtx(2), 2);
  ASSERT_EQ(i22.size(), 3u);
  EXPECT_EQ(i22[2], P(2, {1, 1, 1}));

  auto i32 = enumerate_irreducibles(FieldCtx(3), 2);
  EXPECT_EQ(std::count_if(i32.begin(), i32.end(), [](const Poly& f) { return f.degree() == 2; }), 3);
}

TEST(Irreducibles, NecklaceCount) {
  for (std::uint64_t p : {2, 3, 5}) {
    const auto irr = enumerate_irreducibles(FieldCtx(p), 4);
    for (unsigned d = 1; d <= 4; ++d) {
      std::int64_t necklace = 0;
      for (unsigned e = 1; e <= d; ++e)
        if (d % e == 0) necklace += mobius(e) * static_cast<std::int64_t>(checked_pow(p, d / e));
      necklace /= d;
      const auto got = std::count_if(irr.begin(), irr.end(), [d](const Poly& f) { return f.degree() == static_cast<int>(d); });
      EXPECT_EQ(got, necklace) << "p=" << p << " d=" << d;
    }
  }
}

TEST(Irreducibles, EveryListedPolynomialHasNoRoot) {
  FieldCtx f(5);
  for (const auto& phi : enumerate_irreducibles(f, 3)) {
    if (phi.degree() == 1) continue;
    for (Residue x = 0; x < 5; ++x) {
      Residue v = 0;
      for (int i = phi.degree(); i >= 0; --i) v = f.add(f.mul(v, x), phi.coeff(static_cast<std::size_t>(i)));
      EXPECT_NE(v, 0u) << phi.to_string();
    }
  }
}

TEST(Irreducibles, DegreeGuard) { EXPECT_THROW(enumerate_irreducibles(FieldCtx(2), 7), BudgetError); }

TEST(Radical, Examples) {
  EXPECT_EQ(radical(P(3, {1, -2, 1}), enumerate_irreducibles(FieldCtx(3), 2)), P(3, {-1, 1}));
  EXPECT_EQ(radical(P(5, {0, 0, 0, 1}), enumerate_irreducibles(FieldCtx(5), 3)), P(5, {0, 1}));
  EXPECT_EQ(radical(P(2, {1, 1, 1}), enumerate_irreducibles(FieldCtx(2), 2)), P(2, {1, 1, 1}));
  EXPECT_THROW(radical(P(3, {1, 2}), enumerate_irreducibles(FieldCtx(3), 1)), std::invalid_argument);
}

TEST(Radical, PropertiesExhaustive) {
  for (std::uint64_t p : {2, 3, 5}) {
    FieldCtx ctx(p);
    const auto irr = enumerate_irreducibles(ctx, 4);
    for (unsigned d = 1; d <= 4; ++d)
      for (const auto& f : monics(ctx, d)) {
        const Poly r = radical(f, irr);
        EXPECT_TRUE(f.divisible_by(r));
        EXPECT_EQ(radical(r, irr), r);
        // squarefree: no irreducible divides it twice
        for (const auto& phi : irr)
          if (2 * phi.degree() <= r.degree()) {
            EXPECT_FALSE(r.divisible_by(phi * phi));
          }
      }
  }
}

TEST(CharPoly, Examples) {
  FieldCtx f5(5);
  EXPECT_EQ(char_poly(MatF::identity(f5, 2)), P(5, {1, -2, 1}));
  EXPECT_EQ(char_poly(MatF(f5, 3, 3)), Poly::monomial(f5, 3));
  const Poly g = P(5, {2, 0, 3, 1});
  EXPECT_EQ(char_poly(companion(g)), g);
  const Poly h = P(3, {1, 2, 0, 1, 1});
  EXPECT_EQ(char_poly(companion(h)), h);
}

TEST(CharPoly, AgreesWithDeterminantFor2x2) {
  FieldCtx f(7);
  for (std::uint64_t i = 0; i < 2401; i += 7) {
    const MatF v = MatF::from_index(f, 2, i);
    const Residue det = f.sub(f.mul(v(0, 0), v(1, 1)), f.mul(v(0, 1), v(1, 0)));
    EXPECT_EQ(char_poly(v), Poly(f, {det, f.neg(v.trace()), 1}));
  }
}

TEST(CharPoly, ConjugationInvariant) {
  std::mt19937_64 rng(20261017);
  for (std::size_t n : {2, 3})
    for (std::uint64_t p : {3, 5}) {
      FieldCtx ctx(p);
      int done = 0;
      while (done < 100) {
        const MatF g = random_matrix(ctx, n, rng);
        if (!is_invertible(g)) continue;
        const MatF v = random_matrix(ctx, n, rng);
        EXPECT_EQ(char_poly(g * v * inverse(g)), char_poly(v));
        ++done;
      }
    }
}
