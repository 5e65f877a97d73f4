#pragma once

// Prime-field scalars and dense univariate polynomials over F_p.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"

namespace commutant {

using Residue = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  while (!is_prime(n)) ++n;
  return n;
}

// Arithmetic context for F_p. Elements are canonical residues in [0, p).
class FieldCtx {
 public:
  explicit FieldCtx(std::uint64_t p) : p_(p) {
    if (p < 2 || p > (1ULL << 31)) throw std::invalid_argument("modulus out of range: " + std::to_string(p));
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
  }

  std::uint64_t p() const { return p_; }

  Residue reduce(std::int64_t x) const {
    auto m = static_cast<std::int64_t>(p_);
    auto r = x % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue add(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + b) % p_); }
  Residue sub(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + p_ - b) % p_); }
  Residue neg(Residue a) const { return a == 0 ? 0 : static_cast<Residue>(p_ - a); }
  Residue mul(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} * b) % p_); }

  Residue pow(Residue a, std::uint64_t e) const {
    std::uint64_t r = 1 % p_, b = a % p_;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return static_cast<Residue>(r);
  }

  Residue inv(Residue a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
      std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
    }
    return reduce(t);
  }

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

// Dense polynomial, coefficients lowest degree first, no trailing zeros.
class Poly {
 public:
  explicit Poly(FieldCtx ctx) : ctx_(ctx) {}
  Poly(FieldCtx ctx, std::vector<Residue> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
    for (auto& x : c_) x = static_cast<Residue>(x % ctx_.p());
    trim();
  }
  static Poly from_signed(FieldCtx ctx, const std::vector<std::int64_t>& coeffs) {
    std::vector<Residue> c;
    for (auto x : coeffs) c.push_back(ctx.reduce(x));
    return Poly(ctx, std::move(c));
  }
  static Poly monomial(FieldCtx ctx, unsigned deg, Residue coeff = 1) {
    std::vector<Residue> c(deg + 1, 0);
    c[deg] = coeff;
    return Poly(ctx, std::move(c));
  }
  static Poly one(FieldCtx ctx) { return monomial(ctx, 0); }

  const FieldCtx& ctx() const { return ctx_; }
  const std::vector<Residue>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Residue coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Residue leading() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Residue> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ctx_.add(a.coeff(i), b.coeff(i));
    return Poly(a.ctx_, std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Residue> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ctx_.sub(a.coeff(i), b.coeff(i));
    return Poly(a.ctx_, std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx_);
    std::vector<Residue> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = a.ctx_.add(c[i + j], a.ctx_.mul(a.c_[i], b.c_[j]));
    return Poly(a.ctx_, std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

  Poly pow(unsigned e) const {
    Poly r = one(ctx_);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // Euclidean division; returns {quotient, remainder}.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Residue> r = c_;
    const int dd = d.degree();
    if (degree() < dd) return {Poly(ctx_), *this};
    std::vector<Residue> q(static_cast<std::size_t>(degree() - dd + 1), 0);
    const Residue lead_inv = ctx_.inv(d.leading());
    for (int i = degree(); i >= dd; --i) {
      Residue coef = ctx_.mul(r[static_cast<std::size_t>(i)], lead_inv);
      if (coef == 0) continue;
      q[static_cast<std::size_t>(i - dd)] = coef;
      for (int j = 0; j <= dd; ++j) {
        auto idx = static_cast<std::size_t>(i - dd + j);
        r[idx] = ctx_.sub(r[idx], ctx_.mul(coef, d.c_[static_cast<std::size_t>(j)]));
      }
    }
    return {Poly(ctx_, std::move(q)), Poly(ctx_, std::move(r))};
  }
  bool divisible_by(const Poly& d) const { return divmod(d).second.is_zero(); }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      Residue a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0 || a != 1) os << a;
      if (i >= 1) os << "t";
      if (i >= 2) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  FieldCtx ctx_;
  std::vector<Residue> c_;
};

// Lexicographic on coefficient vectors, lowest degree first.
inline bool poly_order(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.coeffs() < b.coeffs();
}

// All monic irreducibles of degree 1..d_max over F_p, sorted by (degree, coefficients).
// A candidate of degree d is irreducible iff no listed irreducible of degree <= d/2 divides it.
inline std::vector<Poly> enumerate_irreducibles(const FieldCtx& ctx, unsigned d_max,
                                                const Limits& limits = {}) {
  if (d_max == 0) throw std::invalid_argument("d_max must be positive");
  if (d_max > 6) throw BudgetError("enumerate_irreducibles: d_max > 6 is beyond the desk-scale guard");
  require_budget(checked_pow(ctx.p(), d_max), limits, "enumerate_irreducibles");
  const std::uint64_t p = ctx.p();
  std::vector<Poly> irr;
  for (unsigned d = 1; d <= d_max; ++d) {
    std::vector<Poly> layer;
    const std::uint64_t count = checked_pow(p, d);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Residue> c(d + 1);
      std::uint64_t x = idx;
      for (unsigned i = 0; i < d; ++i) {
        c[i] = static_cast<Residue>(x % p);
        x /= p;
      }
      c[d] = 1;
      Poly f(ctx, std::move(c));
      bool irreducible = true;
      for (const auto& g : irr) {
        if (2 * g.degree() > static_cast<int>(d)) break;
        if (f.divisible_by(g)) {
          irreducible = false;
          break;
        }
      }
      if (irreducible) layer.push_back(std::move(f));
    }
    std::sort(layer.begin(), layer.end(), poly_order);
    irr.insert(irr.end(), layer.begin(), layer.end());
  }
  return irr;
}

// Product of the distinct monic irreducible factors of f, by trial division against `irr`.
inline Poly radical(const Poly& f, const std::vector<Poly>& irr) {
  if (!f.is_monic()) throw std::invalid_argument("radical: polynomial must be monic");
  Poly rest = f;
  Poly rad = Poly::one(f.ctx());
  for (const auto& phi : irr) {
    if (rest.degree() == 0) break;
    if (phi.degree() > rest.degree()) continue;
    auto [q, r] = rest.divmod(phi);
    if (!r.is_zero()) continue;
    rad = rad * phi;
    rest = q;
    for (;;) {
      auto [q2, r2] = rest.divmod(phi);
      if (!r2.is_zero()) break;
      rest = q2;
    }
  }
  if (rest.degree() > 0)
    throw std::invalid_argument("radical: irreducible list does not reach degree " +
                                std::to_string(rest.degree()));
  return rad;
}

}  // namespace commutant
