#pragma once

// Integer matrices, commutant lattices and exact counts of commuting pairs in a box.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "matfp.hpp"

namespace commutant {

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in addition");
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in subtraction");
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in multiplication");
  return r;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace checked

class IntMat {
 public:
  explicit IntMat(std::size_t n) : n_(n), e_(n * n, 0) {}
  IntMat(std::size_t n, std::vector<std::int64_t> entries) : n_(n), e_(std::move(entries)) {
    if (e_.size() != n * n) throw std::invalid_argument("IntMat: entry count is not n^2");
  }
  static IntMat scalar(std::size_t n, std::int64_t c) {
    IntMat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }

  std::size_t n() const { return n_; }
  const std::vector<std::int64_t>& entries() const { return e_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  // Maximum modulus of the entries.
  std::int64_t norm() const {
    std::int64_t m = 0;
    for (auto x : e_) m = std::max(m, x < 0 ? checked::sub(0, x) : x);
    return m;
  }

  friend IntMat operator*(const IntMat& a, const IntMat& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("IntMat *: dimension mismatch");
    IntMat r(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < a.n_; ++k) s = checked::add(s, checked::mul(a(i, k), b(k, j)));
        r(i, j) = s;
      }
    return r;
  }
  friend IntMat operator-(const IntMat& a, const IntMat& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("IntMat -: dimension mismatch");
    IntMat r(a.n_);
    for (std::size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = checked::sub(a.e_[k], b.e_[k]);
    return r;
  }
  friend bool operator==(const IntMat& a, const IntMat& b) { return a.n_ == b.n_ && a.e_ == b.e_; }

  MatF mod(const FieldCtx& ctx) const { return MatF::from_signed(ctx, n_, n_, e_); }

 private:
  std::size_t n_;
  std::vector<std::int64_t> e_;
};

inline IntMat commutator(const IntMat& x, const IntMat& y) { return x * y - y * x; }

// Integer n^2 x n^2 matrix of U -> UX - XU, row-major coordinates.
inline std::vector<std::int64_t> int_ad_matrix(const IntMat& x) {
  const std::size_t n = x.n(), N = n * n;
  std::vector<std::int64_t> a(N * N, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto& up = a[(i * n + j) * N + i * n + k];
        up = checked::add(up, x(k, j));
        auto& dn = a[(i * n + j) * N + k * n + j];
        dn = checked::sub(dn, x(i, k));
      }
  return a;
}

// Row-style Hermite normal form of the lattice spanned by `rows` (each of length `width`):
// echelon, positive pivots, entries above each pivot reduced into [0, pivot). Zero rows dropped.
inline std::vector<std::vector<std::int64_t>> hermite_normal_form(std::vector<std::vector<std::int64_t>> rows,
                                                                  std::size_t width) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < width && r < rows.size(); ++c) {
    for (;;) {
      // smallest non-zero |entry| in column c among rows r.. goes to row r
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const std::int64_t q = checked::floor_div(rows[i][c], rows[r][c]);
        for (std::size_t j = 0; j < width; ++j) rows[i][j] = checked::sub(rows[i][j], checked::mul(q, rows[r][j]));
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && rows[r][c] != 0) {
      if (rows[r][c] < 0)
        for (auto& x : rows[r]) x = checked::sub(0, x);
      for (std::size_t i = 0; i < r; ++i) {
        const std::int64_t q = checked::floor_div(rows[i][c], rows[r][c]);
        if (q != 0)
          for (std::size_t j = 0; j < width; ++j) rows[i][j] = checked::sub(rows[i][j], checked::mul(q, rows[r][j]));
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

// Basis of the full integer kernel of a rows x cols integer matrix, by unimodular
// column operations tracked in a transform matrix.
inline std::vector<std::vector<std::int64_t>> integer_kernel(std::vector<std::int64_t> a, std::size_t rows,
                                                             std::size_t cols) {
  std::vector<std::vector<std::int64_t>> u(cols, std::vector<std::int64_t>(cols, 0));  // u[col] = column vector
  for (std::size_t j = 0; j < cols; ++j) u[j][j] = 1;
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return a[i * cols + j]; };
  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {  // col_dst -= q col_src
    for (std::size_t i = 0; i < rows; ++i) at(i, dst) = checked::sub(at(i, dst), checked::mul(q, at(i, src)));
    for (std::size_t i = 0; i < cols; ++i) u[dst][i] = checked::sub(u[dst][i], checked::mul(q, u[src][i]));
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, x), at(i, y));
    std::swap(u[x], u[y]);
  };
  std::size_t pc = 0;
  for (std::size_t r = 0; r < rows && pc < cols; ++r) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = pc; j < cols; ++j)
        if (at(r, j) != 0 && (best == cols || std::llabs(at(r, j)) < std::llabs(at(r, best)))) best = j;
      if (best == cols) break;
      col_swap(pc, best);
      bool done = true;
      for (std::size_t j = pc + 1; j < cols; ++j) {
        if (at(r, j) == 0) continue;
        col_axpy(j, pc, checked::floor_div(at(r, j), at(r, pc)));
        if (at(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (at(r, pc) != 0) ++pc;
  }
  return {u.begin() + static_cast<std::ptrdiff_t>(pc), u.end()};
}

// Integer matrices commuting with a fixed X, as a lattice in Z^{n^2} with an HNF basis.
struct CommutantLattice {
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> basis;
  std::size_t rank() const { return basis.size(); }
};

inline CommutantLattice commutant_lattice(const IntMat& x) {
  if (x.norm() > (std::int64_t{1} << 20)) throw std::overflow_error("commutant_lattice: |X| exceeds 2^20");
  const std::size_t N = x.n() * x.n();
  auto ker = integer_kernel(int_ad_matrix(x), N, N);
  return {x.n(), hermite_normal_form(std::move(ker), N)};
}

// Number of lattice points Y with |Y| <= T, by depth-first search over the HNF coordinates.
inline std::uint64_t count_lattice_in_box(const CommutantLattice& lat, std::int64_t T, StepMeter* meter = nullptr) {
  if (T < 0) throw std::invalid_argument("count_lattice_in_box: T must be non-negative");
  const std::size_t K = lat.rank(), N = lat.n * lat.n;
  if (K == 0) return 1;
  std::vector<std::size_t> piv(K + 1, N);
  for (std::size_t i = 0; i < K; ++i) {
    std::size_t c = 0;
    while (lat.basis[i][c] == 0) ++c;
    piv[i] = c;
  }
  std::vector<std::int64_t> y(N, 0);
  std::uint64_t count = 0, steps = 0;
  // Coordinates in [piv[level], piv[level+1]) are final once c_level is chosen.
  auto recurse = [&](auto&& self, std::size_t level) -> void {
    const auto& b = lat.basis[level];
    const std::int64_t d = b[piv[level]], partial = y[piv[level]];
    const std::int64_t lo = checked::ceil_div(-T - partial, d), hi = checked::floor_div(T - partial, d);
    for (std::int64_t c = lo; c <= hi; ++c) {
      ++steps;
      for (std::size_t j = piv[level]; j < N; ++j) y[j] += c * b[j];
      bool ok = true;
      for (std::size_t j = piv[level]; j < piv[level + 1]; ++j)
        if (y[j] > T || y[j] < -T) {
          ok = false;
          break;
        }
      if (ok) {
        if (level + 1 == K)
          ++count;
        else
          self(self, level + 1);
      }
      for (std::size_t j = piv[level]; j < N; ++j) y[j] -= c * b[j];
    }
  };
  recurse(recurse, 0);
  if (meter) meter->add(steps, "count_lattice_in_box");
  return count;
}

inline std::uint64_t box_size(std::size_t n, std::int64_t T) {
  return checked_pow(static_cast<std::uint64_t>(2 * T + 1), static_cast<unsigned>(n * n));
}

// The index-th matrix of the box |X| <= T, entries as base-(2T+1) digits shifted by -T.
inline IntMat box_matrix(std::size_t n, std::int64_t T, std::uint64_t index) {
  IntMat x(n);
  const auto side = static_cast<std::uint64_t>(2 * T + 1);
  for (std::size_t k = 0; k < n * n; ++k) {
    x(k / n, k % n) = static_cast<std::int64_t>(index % side) - T;
    index /= side;
  }
  return x;
}

// N(T) = #{(X, Y) : |X|, |Y| <= T, XY = YX}.
inline std::uint64_t count_N(std::size_t n, std::int64_t T, const Limits& limits = {}) {
  if (n < 1) throw std::invalid_argument("count_N: n must be positive");
  if (T < 0) throw std::invalid_argument("count_N: T must be non-negative");
  const std::uint64_t total = box_size(n, T);
  require_budget(total, limits, "count_N");
  StepMeter meter(limits.budget);
  meter.add(total, "count_N");
  return parallel_reduce<std::uint64_t>(
      total, limits.threads, 0,
      [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t s = 0;
        for (std::uint64_t i = b; i < e; ++i) s += count_lattice_in_box(commutant_lattice(box_matrix(n, T, i)), T, &meter);
        return s;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

// #{x in [-T, T] : x = r mod p} for each residue r.
inline std::vector<std::uint64_t> residue_weights(std::int64_t T, std::uint64_t p) {
  std::vector<std::uint64_t> w(p, 0);
  for (std::int64_t x = -T; x <= T; ++x) ++w[static_cast<std::size_t>(((x % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p))];
  return w;
}

// #{(X, Y) : |X|, |Y| <= T, p | XY - YX}, grouped by the residue V = X mod p:
// sum_V W(V) * sum_{U in C(V)} W(U), where W counts box lifts of a residue matrix.
inline std::uint64_t congruence_count(std::size_t n, std::int64_t T, std::uint64_t p, const Limits& limits = {}) {
  FieldCtx ctx(p);
  if (T < 0) throw std::invalid_argument("congruence_count: T must be non-negative");
  const auto w = residue_weights(T, p);
  std::vector<Residue> support;
  for (std::uint64_t r = 0; r < p; ++r)
    if (w[r]) support.push_back(static_cast<Residue>(r));
  const std::size_t N = n * n;
  const std::uint64_t per_side = checked_pow(support.size(), static_cast<unsigned>(N));
  require_budget(per_side, limits, "congruence_count");
  StepMeter meter(limits.budget);
  auto support_matrix = [&](std::uint64_t idx) {
    MatF m(ctx, n, n);
    for (std::size_t k = 0; k < N; ++k) {
      m(k / n, k % n) = support[idx % support.size()];
      idx /= support.size();
    }
    return m;
  };
  auto weight = [&](const MatF& m) {
    std::uint64_t prod = 1;
    for (auto x : m.entries()) prod *= w[x];
    return prod;
  };
  return parallel_reduce<std::uint64_t>(
      per_side, limits.threads, 0,
      [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t s = 0;
        for (std::uint64_t i = b; i < e; ++i) {
          const MatF v = support_matrix(i);
          const auto ker = kernel_basis(ad_matrix(v));
          const std::uint64_t kernel_size = checked_pow(p, static_cast<unsigned>(ker.size()));
          std::uint64_t inner = 0;
          if (kernel_size <= per_side) {
            meter.add(kernel_size, "congruence_count");
            std::vector<Residue> coeff(ker.size(), 0);
            for (std::uint64_t c = 0; c < kernel_size; ++c) {
              std::uint64_t x = c;
              for (auto& a : coeff) {
                a = static_cast<Residue>(x % p);
                x /= p;
              }
              std::uint64_t prod = 1;
              for (std::size_t k = 0; k < N && prod; ++k) {
                std::uint64_t entry = 0;
                for (std::size_t t = 0; t < ker.size(); ++t) entry += std::uint64_t{coeff[t]} * ker[t][k];
                prod *= w[entry % p];
              }
              inner += prod;
            }
          } else {
            meter.add(per_side, "congruence_count");
            for (std::uint64_t j = 0; j < per_side; ++j) {
              const MatF u = support_matrix(j);
              if (u * v == v * u) inner += weight(u);
            }
          }
          s += weight(v) * inner;
        }
        return s;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

struct ScalingRow {
  std::int64_t T = 0;
  std::uint64_t count = 0;
  std::uint64_t lower_bound = 0;        // (2T+1)^{n^2+1}
  double upper_curve = 0;               // T^{n^2+2-2/(n+1)}
  std::optional<double> slope;          // d log N / d log(2T+1) against the previous row
};

struct ScalingReport {
  std::size_t n = 0;
  std::int64_t upper_num = 0, upper_den = 1;  // n^2 + 2 - 2/(n+1) as a reduced fraction
  std::vector<ScalingRow> rows;
};

inline ScalingReport scaling_report(std::size_t n, const std::vector<std::int64_t>& Ts, const Limits& limits = {}) {
  ScalingReport rep;
  rep.n = n;
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t num = (nn * nn + 2) * (nn + 1) - 2, den = nn + 1;
  const std::int64_t g = std::gcd(num, den);
  rep.upper_num = num / g;
  rep.upper_den = den / g;
  const double upper_exp = static_cast<double>(rep.upper_num) / static_cast<double>(rep.upper_den);
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    ScalingRow row;
    row.T = Ts[i];
    row.count = count_N(n, row.T, limits);
    row.lower_bound = checked_pow(static_cast<std::uint64_t>(2 * row.T + 1), static_cast<unsigned>(n * n + 1));
    row.upper_curve = std::pow(static_cast<double>(row.T), upper_exp);
    if (i > 0 && Ts[i] != Ts[i - 1]) {
      const auto& prev = rep.rows.back();
      row.slope = (std::log(static_cast<double>(row.count)) - std::log(static_cast<double>(prev.count))) /
                  (std::log(2.0 * static_cast<double>(row.T) + 1) - std::log(2.0 * static_cast<double>(prev.T) + 1));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace commutant
