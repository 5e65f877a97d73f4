#pragma once

// Naive reference computations used to cross-check the library. They share no code
// with it beyond plain integer arithmetic and avoid every shortcut the library takes.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Mat = std::vector<std::int64_t>;  // row-major n x n

inline Mat mul(const Mat& x, const Mat& y, std::size_t n, std::int64_t p = 0) {
  Mat z(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < n; ++k) s += x[i * n + k] * y[k * n + j];
      z[i * n + j] = p ? ((s % p) + p) % p : s;
    }
  return z;
}

inline std::int64_t trace(const Mat& x, std::size_t n) {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) t += x[i * n + i];
  return t;
}

// every matrix with entries in [lo, hi], odometer order
inline std::vector<Mat> all_matrices(std::size_t n, std::int64_t lo, std::int64_t hi) {
  std::vector<Mat> out;
  Mat cur(n * n, lo);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.size() && cur[i] == hi) cur[i++] = lo;
    if (i == cur.size()) break;
    ++cur[i];
  }
  return out;
}

inline bool commute(const Mat& x, const Mat& y, std::size_t n, std::int64_t p = 0) {
  // early exit on the first differing entry
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t a = 0, b = 0;
      for (std::size_t k = 0; k < n; ++k) {
        a += x[i * n + k] * y[k * n + j];
        b += y[i * n + k] * x[k * n + j];
      }
      if (p ? (a - b) % p != 0 : a != b) return false;
    }
  return true;
}

inline std::uint64_t count_box_pairs(std::size_t n, std::int64_t T, std::int64_t p = 0) {
  const auto box = all_matrices(n, -T, T);
  std::uint64_t c = 0;
  for (const auto& x : box)
    for (const auto& y : box)
      if (commute(x, y, n, p)) ++c;
  return c;
}

// residue histogram of tr(AU + BV) over commuting (U, V) in M_n(F_p)^2
inline std::vector<std::int64_t> exp_sum_pairs(const Mat& a, const Mat& b, std::size_t n, std::int64_t p) {
  const auto all = all_matrices(n, 0, p - 1);
  std::vector<std::int64_t> h(static_cast<std::size_t>(p), 0);
  for (const auto& u : all)
    for (const auto& v : all)
      if (commute(u, v, n, p)) {
        const std::int64_t t = trace(mul(a, u, n, p), n) + trace(mul(b, v, n, p), n);
        ++h[static_cast<std::size_t>(t % p)];
      }
  return h;
}

inline std::uint64_t fibre(const Mat& m, std::size_t n, std::int64_t p) {
  const auto all = all_matrices(n, 0, p - 1);
  std::uint64_t c = 0;
  for (const auto& u : all)
    for (const auto& v : all) {
      const Mat uv = mul(u, v, n, p), vu = mul(v, u, n, p);
      bool ok = true;
      for (std::size_t i = 0; ok && i < n * n; ++i) ok = (((uv[i] - vu[i]) % p) + p) % p == m[i];
      if (ok) ++c;
    }
  return c;
}

inline std::int64_t det2(const Mat& g, std::int64_t p) { return (((g[0] * g[3] - g[1] * g[2]) % p) + p) % p; }

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  for (std::int64_t x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

inline std::vector<std::pair<Mat, Mat>> gl2(std::int64_t p) {
  std::vector<std::pair<Mat, Mat>> out;
  for (const auto& g : all_matrices(2, 0, p - 1)) {
    const std::int64_t d = det2(g, p);
    if (!d) continue;
    const std::int64_t di = inv_mod(d, p);
    Mat h{g[3] * di % p, (p - g[1]) * di % p, (p - g[2]) * di % p, g[0] * di % p};
    out.emplace_back(g, h);
  }
  return out;
}

// sizes of the conjugation orbits on M_2(F_p), sorted
inline std::multiset<std::uint64_t> orbit_sizes2(std::int64_t p) {
  const auto group = gl2(p);
  std::set<Mat> seen;
  std::multiset<std::uint64_t> sizes;
  for (const auto& m : all_matrices(2, 0, p - 1)) {
    if (seen.count(m)) continue;
    std::set<Mat> orbit;
    for (const auto& [g, h] : group) orbit.insert(mul(mul(h, m, 2, p), g, 2, p));
    seen.insert(orbit.begin(), orbit.end());
    sizes.insert(orbit.size());
  }
  return sizes;
}

// L(V, M) for n = 2 from the definition: centralizers listed element by element
inline std::pair<std::int64_t, std::int64_t> lvm2(const Mat& v, const Mat& m, std::int64_t p) {
  const auto group = gl2(p);
  const auto all = all_matrices(2, 0, p - 1);
  std::int64_t hits = 0;
  for (const auto& [g, h] : group) {
    const Mat w = mul(mul(g, v, 2, p), h, 2, p);
    bool ok = true;
    for (const auto& z : all)
      if (commute(w, z, 2, p) && trace(mul(z, m, 2, p), 2) % p != 0) {
        ok = false;
        break;
      }
    if (ok) ++hits;
  }
  return {hits, static_cast<std::int64_t>(group.size())};
}

}  // namespace oracle
