#pragma once

// Conjugacy classes of M_n(F_p) from rational canonical forms.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "charpoly.hpp"
#include "core.hpp"
#include "ff.hpp"
#include "matfp.hpp"

namespace commutant {

using Partition = std::vector<unsigned>;  // non-increasing, positive parts

// All partitions of m in decreasing lexicographic order.
inline std::vector<Partition> partitions(unsigned m) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, unsigned rest, unsigned max_part) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned part = std::min(rest, max_part); part >= 1; --part) {
      cur.push_back(part);
      self(self, rest - part, part);
      cur.pop_back();
    }
  };
  rec(rec, m, m);
  return out;
}

struct CanonicalForm {
  // (phi, lambda_phi) with phi monic irreducible, ordered by (deg phi, coefficients)
  std::vector<std::pair<Poly, Partition>> parts;

  std::size_t dimension() const {
    std::size_t n = 0;
    for (const auto& [phi, lambda] : parts)
      for (auto l : lambda) n += static_cast<std::size_t>(phi.degree()) * l;
    return n;
  }
  unsigned radical_degree() const {
    unsigned d = 0;
    for (const auto& pl : parts) d += static_cast<unsigned>(pl.first.degree());
    return d;
  }
  // sum_phi deg(phi) * sum_{i,j} min(lambda_i, lambda_j)
  std::size_t centralizer_dim_formula() const {
    std::size_t d = 0;
    for (const auto& [phi, lambda] : parts)
      for (auto a : lambda)
        for (auto b : lambda) d += static_cast<std::size_t>(phi.degree()) * std::min(a, b);
    return d;
  }
  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      os << (i ? "; " : "") << "(" << parts[i].first.to_string() << "):";
      for (std::size_t j = 0; j < parts[i].second.size(); ++j) os << (j ? "," : "") << parts[i].second[j];
    }
    return os.str();
  }
};

// Block diagonal of companion matrices of phi^{lambda_i}.
inline MatF canonical_representative(const FieldCtx& ctx, const CanonicalForm& cf) {
  const std::size_t n = cf.dimension();
  MatF rep(ctx, n, n);
  std::size_t off = 0;
  for (const auto& [phi, lambda] : cf.parts)
    for (auto l : lambda) {
      MatF c = companion(phi.pow(l));
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) rep(off + i, off + j) = c(i, j);
      off += c.rows();
    }
  return rep;
}

struct ClassRecord {
  CanonicalForm cf;
  MatF representative;
  std::size_t dim_centralizer = 0;
  std::uint64_t units = 0;  // #(GL_n ∩ C(V))
  std::uint64_t orbit = 0;
  unsigned rad_deg = 0;
};

// Invertible elements of the centralizer, counted over all p^{dim} kernel combinations.
inline std::uint64_t centralizer_units(const MatF& v, const Limits& limits = {}) {
  const std::size_t n = v.n();
  const auto& ctx = v.ctx();
  const std::uint64_t p = ctx.p();
  if (v.is_scalar()) return gl_order(n, p);
  const auto ker = kernel_basis(ad_matrix(v));
  const std::uint64_t total = checked_pow(p, static_cast<unsigned>(ker.size()));
  require_budget(total, limits, "centralizer_units");
  std::uint64_t units = 0;
  std::vector<Residue> z(n * n);
  for (std::uint64_t c = 0; c < total; ++c) {
    std::fill(z.begin(), z.end(), 0);
    std::uint64_t x = c;
    for (const auto& b : ker) {
      const std::uint64_t coef = x % p;
      x /= p;
      if (!coef) continue;
      for (std::size_t k = 0; k < z.size(); ++k) z[k] = static_cast<Residue>((z[k] + coef * b[k]) % p);
    }
    auto a = z;
    if (rref_inplace(ctx, n, n, a, n).size() == n) ++units;
  }
  return units;
}

inline void check_class_budget(std::size_t n, std::uint64_t p) {
  const bool ok = n == 1 || (n <= 3 && p <= 7) || (n == 4 && p <= 3);
  if (!ok)
    throw BudgetError("enumerate_classes: (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                      ") is outside the supported range (n<=3 with p<=7, n=4 with p<=3)");
}

// Every rational canonical form of size n over F_p, in deterministic order.
inline std::vector<CanonicalForm> enumerate_canonical_forms(const FieldCtx& ctx, std::size_t n) {
  const auto irr = enumerate_irreducibles(ctx, static_cast<unsigned>(n));
  std::vector<CanonicalForm> out;
  CanonicalForm cur;
  auto rec = [&](auto&& self, std::size_t start, std::size_t rest) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < irr.size(); ++i) {
      const auto d = static_cast<std::size_t>(irr[i].degree());
      if (d > rest) break;
      for (std::size_t size = rest / d; size >= 1; --size)
        for (auto& lambda : partitions(static_cast<unsigned>(size))) {
          cur.parts.emplace_back(irr[i], lambda);
          self(self, i + 1, rest - d * size);
          cur.parts.pop_back();
        }
    }
  };
  rec(rec, 0, n);
  return out;
}

inline std::vector<ClassRecord> enumerate_classes(std::size_t n, std::uint64_t p, const Limits& limits = {}) {
  check_class_budget(n, p);
  FieldCtx ctx(p);
  const auto forms = enumerate_canonical_forms(ctx, n);
  const std::uint64_t gl = gl_order(n, p);
  auto records = parallel_reduce<std::vector<ClassRecord>>(
      forms.size(), limits.threads, {},
      [&](std::uint64_t b, std::uint64_t e) {
        std::vector<ClassRecord> out;
        for (std::uint64_t i = b; i < e; ++i) {
          ClassRecord rec{forms[i], canonical_representative(ctx, forms[i]), 0, 0, 0, 0};
          rec.dim_centralizer = n * n - rank(ad_matrix(rec.representative));
          rec.units = centralizer_units(rec.representative, limits);
          if (rec.units == 0 || gl % rec.units != 0)
            throw PropertyViolation("centralizer unit count does not divide |GL_n|");
          rec.orbit = gl / rec.units;
          rec.rad_deg = forms[i].radical_degree();
          out.push_back(std::move(rec));
        }
        return out;
      },
      [](std::vector<ClassRecord> a, std::vector<ClassRecord> b) {
        a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
        return a;
      });
  return records;
}

inline std::uint64_t class_count_by_degree(const std::vector<ClassRecord>& classes, unsigned d) {
  return static_cast<std::uint64_t>(
      std::count_if(classes.begin(), classes.end(), [d](const ClassRecord& r) { return r.rad_deg == d; }));
}

inline std::uint64_t class_count_by_degree(std::size_t n, std::uint64_t p, unsigned d, const Limits& limits = {}) {
  return class_count_by_degree(enumerate_classes(n, p, limits), d);
}

}  // namespace commutant
