#pragma once

// The Fourier weight used to detect a box, its transform, a truncated Poisson
// summation check, and the exponent bookkeeping of the auxiliary-prime method.

#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "ff.hpp"

namespace commutant {

// (sin(pi x) / (pi x))^2, with value 1 at x = 0.
inline double fejer_factor(double x) {
  if (x == 0.0) return 1.0;
  const double y = std::numbers::pi * x;
  const double s = std::sin(y) / y;
  return s * s;
}

// w(X) = prod_ij (sin(pi X_ij) / (pi X_ij))^2.
inline double weight_w(std::span<const double> x) {
  double r = 1.0;
  for (double v : x) r *= fejer_factor(v);
  return r;
}

// Fourier transform of w: prod_ij max(1 - |A_ij|, 0).
inline double weight_what(std::span<const double> a) {
  double r = 1.0;
  for (double v : a) r *= std::max(1.0 - std::abs(v), 0.0);
  return r;
}

struct WeightParams {
  std::size_t n = 1;
  double T = 1;
  std::uint64_t p = 2;
  std::int64_t R = 100000;    // truncation radius of the lattice sum
  double tolerance = 1e-3;    // largest admissible certified tail bound
};

struct PoissonResult {
  double lhs = 0;         // truncated sum over |X'| <= R of w((U + pX') / 2T)
  double rhs = 0;         // real part of the dual sum
  double rhs_imag = 0;
  double tail_bound = 0;  // certified bound on the omitted part of the lhs
  double difference = 0;  // |lhs - rhs|
  bool passed = false;
};

// Checks sum_{X'} w((U + pX')/2T) = (2T/p)^{n^2} sum_A e_p(-tr(AU)) ŵ(2TA/p).
// The left side over the box |X'| <= R factors into one lattice sum per coordinate.
// Tail per coordinate: |u + pm| >= p|m| for m > R and >= p(|m| - 1) for m < -R, so the
// omitted terms are at most (2T/(pi p))^2 (sum_{m>R} m^{-2} + sum_{m>=R} m^{-2}).
inline PoissonResult poisson_check(const std::vector<std::int64_t>& u, const WeightParams& prm) {
  const std::size_t N = prm.n * prm.n;
  if (prm.n < 1 || prm.n > 2) throw std::invalid_argument("poisson_check: n must be 1 or 2");
  if (u.size() != N) throw std::invalid_argument("poisson_check: U must have n^2 entries");
  if (prm.T <= 0 || prm.R < 1) throw std::invalid_argument("poisson_check: need T > 0 and R >= 1");
  FieldCtx ctx(prm.p);
  const double p = static_cast<double>(prm.p), two_t = 2 * prm.T;

  std::vector<Residue> res(N);
  for (std::size_t c = 0; c < N; ++c) res[c] = ctx.reduce(u[c]);

  const double R = static_cast<double>(prm.R);
  const double env = std::pow(two_t / (std::numbers::pi * p), 2);
  const double tau = env * (1.0 / R + (1.0 / (R * R) + 1.0 / R));

  PoissonResult out;
  double truncated = 1.0, padded = 1.0;
  for (std::size_t c = 0; c < N; ++c) {
    double sum = 0, comp = 0;
    for (std::int64_t m = -prm.R; m <= prm.R; ++m) {
      const double y = fejer_factor((static_cast<double>(res[c]) + p * static_cast<double>(m)) / two_t) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    truncated *= sum;
    padded *= sum + tau;
  }
  out.lhs = truncated;
  out.tail_bound = padded - truncated;
  if (!(out.tail_bound < prm.tolerance))
    throw std::invalid_argument("poisson_check: tail bound " + std::to_string(out.tail_bound) +
                                " does not reach tolerance at R = " + std::to_string(prm.R));

  // dual side: A ranges over integer matrices with |2T a / p| < 1
  std::int64_t amax = static_cast<std::int64_t>(std::floor(p / two_t));
  while (amax > 0 && two_t * static_cast<double>(amax) / p >= 1.0) --amax;
  const std::int64_t side = 2 * amax + 1;
  std::uint64_t count = 1;
  for (std::size_t c = 0; c < N; ++c) count *= static_cast<std::uint64_t>(side);
  std::complex<double> acc = 0;
  std::vector<double> scaled(N);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t x = idx;
    std::vector<std::int64_t> a(N);
    for (std::size_t c = 0; c < N; ++c) {
      a[c] = static_cast<std::int64_t>(x % static_cast<std::uint64_t>(side)) - amax;
      x /= static_cast<std::uint64_t>(side);
      scaled[c] = two_t * static_cast<double>(a[c]) / p;
    }
    // tr(AU) = sum_ij A_ij U_ji
    std::int64_t tr = 0;
    for (std::size_t i = 0; i < prm.n; ++i)
      for (std::size_t j = 0; j < prm.n; ++j) tr += a[i * prm.n + j] * static_cast<std::int64_t>(res[j * prm.n + i]);
    const auto r = static_cast<std::int64_t>(prm.p);
    const double phase = -2 * std::numbers::pi * static_cast<double>(((tr % r) + r) % r) / p;
    acc += std::polar(weight_what(scaled), phase);
  }
  acc *= std::pow(two_t / p, static_cast<double>(N));
  out.rhs = acc.real();
  out.rhs_imag = acc.imag();
  out.difference = std::abs(out.lhs - out.rhs);
  out.passed = std::abs(out.rhs_imag) < 1e-9 && out.difference <= out.tail_bound + 1e-6;
  return out;
}

using Rational = boost::rational<std::int64_t>;

struct ExponentInputs {
  std::int64_t N = 0;       // ambient dimension
  std::int64_t D = 0;       // dimension of the variety
  std::int64_t twice_L = 0; // 2L, the saving exponent doubled
};

struct ExponentResult {
  Rational exponent;              // D - L + L^2 / (N - D + L)
  std::int64_t dimension_growth;  // D - 1
};

inline ExponentResult exponent_general(const ExponentInputs& in) {
  const Rational L(in.twice_L, 2);
  if (in.twice_L < 0 || !(in.N > in.D) || Rational(in.D) < L)
    throw std::invalid_argument("exponent_general: need N > D >= L >= 0");
  return {Rational(in.D) - L + L * L / (Rational(in.N - in.D) + L), in.D - 1};
}

struct PrimeChoice {
  Rational exponent;  // (n^2 + n - 2) / (n^2 - 1)
  double target = 0;  // T^exponent
  std::uint64_t p = 0;
  double term_main = 0;   // T^{2n^2} / p^{n^2 - n}
  double term_error = 0;  // T^{n^2 - n + 2} p^{n - 1}
  double total() const { return term_main + term_error; }
};

// Smallest prime >= T^{(n^2+n-2)/(n^2-1)}, kept inside [T, 2T^2].
inline PrimeChoice optimize_p(std::size_t n, double T) {
  if (n < 2) throw std::invalid_argument("optimize_p: n must be at least 2");
  if (!(T >= 1)) throw std::invalid_argument("optimize_p: T must be at least 1");
  const auto nn = static_cast<std::int64_t>(n);
  PrimeChoice c;
  c.exponent = Rational(nn * nn + nn - 2, nn * nn - 1);
  c.target = std::pow(T, static_cast<double>(c.exponent.numerator()) / static_cast<double>(c.exponent.denominator()));
  const double lo = std::max(c.target, T), hi = 2 * T * T;
  c.p = next_prime(static_cast<std::uint64_t>(std::ceil(lo)));
  if (static_cast<double>(c.p) > hi) {
    // Bertrand: a prime lies in [T, 2T]
    auto q = static_cast<std::uint64_t>(std::floor(hi));
    while (!is_prime(q)) --q;
    c.p = q;
  }
  const double p = static_cast<double>(c.p), dn = static_cast<double>(n);
  c.term_main = std::pow(T, 2 * dn * dn) / std::pow(p, dn * dn - dn);
  c.term_error = std::pow(T, dn * dn - dn + 2) * std::pow(p, dn - 1);
  return c;
}

}  // namespace commutant
