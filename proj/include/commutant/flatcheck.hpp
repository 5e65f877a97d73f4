#pragma once

// Fibres of the commutator map over F_p and the averaging estimates that bound them.

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conjugacy.hpp"
#include "core.hpp"
#include "expsum.hpp"
#include "matfp.hpp"

namespace commutant {

using Rational = boost::rational<std::int64_t>;

inline Rational pow_rational(std::uint64_t p, int e) {
  const auto base = static_cast<std::int64_t>(checked_pow(p, static_cast<unsigned>(std::abs(e))));
  return e >= 0 ? Rational(base) : Rational(1, base);
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

struct FibreReport {
  MatF m;
  std::uint64_t count = 0;  // #{(U, V) : UV - VU = M}
  double normalized = 0;    // count / p^{n^2+1}
};

// sum over V of p^{n^2 - rank ad(V)} when M lies in the image of U -> UV - VU.
inline FibreReport fibre_count(const MatF& m, const Limits& limits = {}) {
  m.require_square("fibre_count");
  const std::size_t n = m.n(), N = n * n, w = N + 1;
  const auto& ctx = m.ctx();
  const std::uint64_t p = ctx.p();
  const std::uint64_t total = checked_pow(p, static_cast<unsigned>(N));
  require_budget(total, limits, "fibre_count");
  const auto target = flatten(m);
  const std::uint64_t count = parallel_reduce<std::uint64_t>(
      total, limits.threads, 0,
      [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t s = 0;
        std::vector<Residue> aug(N * w);
        for (std::uint64_t i = b; i < e; ++i) {
          const MatF ad = ad_matrix(MatF::from_index(ctx, n, i));
          for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t c = 0; c < N; ++c) aug[r * w + c] = ad(r, c);
            aug[r * w + N] = target[r];
          }
          const auto piv = rref_inplace(ctx, N, w, aug, w);
          if (!piv.empty() && piv.back() == N) continue;  // inconsistent
          s += checked_pow(p, static_cast<unsigned>(N - piv.size()));
        }
        return s;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  return {m, count, static_cast<double>(count) / std::pow(static_cast<double>(p), static_cast<double>(N + 1))};
}

// All of GL_n(F_p) with inverses.
struct GroupTable {
  std::vector<MatF> elements;
  std::vector<MatF> inverses;
};

inline GroupTable make_gl(const FieldCtx& ctx, std::size_t n, const Limits& limits = {}) {
  GroupTable g;
  g.elements = enumerate_gl(ctx, n, limits);
  g.inverses.reserve(g.elements.size());
  for (const auto& x : g.elements) g.inverses.push_back(inverse(x));
  return g;
}

struct AverageReport {
  std::string lemma;
  std::size_t n = 0, k = 0;
  std::uint64_t p = 0;
  int part = 0;
  std::int64_t numerator = 0, denominator = 1;  // exact average = numerator / denominator
  Rational bound;                               // the asserted right-hand side, when exact
  bool holds = true;
  int decay_exponent = 0;                       // average is compared to p^{-decay_exponent}
  Rational ratio;                               // average * p^{decay_exponent}

  Rational average() const { return Rational(numerator, denominator); }
};

// True iff C(V') ⊆ M^⊥ for the centralizer basis `cent` of V'.
inline bool centralizer_in_perp(const std::vector<VecF>& cent, const MatF& m) {
  for (const auto& z : cent)
    if (trace_pairing_flat(z, m.entries(), m.n()) % m.ctx().p() != 0) return false;
  return true;
}

// Centralizer bases of gVg^{-1} for every g, reused across many M.
class ConjugateCentralizers {
 public:
  ConjugateCentralizers(const MatF& v, const GroupTable& group) {
    bases_.reserve(group.elements.size());
    for (std::size_t i = 0; i < group.elements.size(); ++i)
      bases_.push_back(kernel_basis(ad_matrix(group.elements[i] * v * group.inverses[i])));
  }
  // L(V, M) = E_g 1[C(gVg^{-1}) ⊆ M^⊥], numerator over |GL_n|.
  std::int64_t hits(const MatF& m) const {
    std::int64_t c = 0;
    for (const auto& b : bases_)
      if (centralizer_in_perp(b, m)) ++c;
    return c;
  }
  std::int64_t size() const { return static_cast<std::int64_t>(bases_.size()); }

 private:
  std::vector<std::vector<VecF>> bases_;
};

inline AverageReport lvm(const MatF& v, const MatF& m, const GroupTable& group) {
  m.require_same_shape(v, "lvm");
  ConjugateCentralizers cc(v, group);
  AverageReport r;
  r.lemma = "L(V,M)";
  r.n = m.n();
  r.p = m.ctx().p();
  r.numerator = cc.hits(m);
  r.denominator = cc.size();
  r.bound = Rational(1);
  r.holds = r.numerator <= r.denominator;
  return r;
}

inline AverageReport lvm(const MatF& v, const MatF& m, const Limits& limits = {}) {
  return lvm(v, m, make_gl(m.ctx(), m.n(), limits));
}

struct SigmaReport {
  MatF m;
  std::int64_t direct = 0;       // (1/p) sum_{λ != 0} fibre_count(λM)
  std::int64_t closed_form = 0;  // sum_V p^{dim C(V)} (1 - 1/p) 1[C(V) ⊆ M^⊥]
  Rational orbit_collapsed;      // sum_{V in K_n} O(V) p^{dim C(V)} (1 - 1/p) L(V, M)
  bool agree = false;
  double normalized = 0;         // Σ(M) / p^{n^2+1}
};

// Σ(M) three ways; the three values are asserted equal.
inline SigmaReport sigma(const MatF& m, const std::vector<ClassRecord>& classes, const GroupTable& group,
                         const Limits& limits = {}) {
  m.require_square("sigma");
  if (m.is_zero()) throw std::invalid_argument("sigma: M must be non-zero");
  const std::size_t n = m.n();
  const auto& ctx = m.ctx();
  const std::uint64_t p = ctx.p();
  SigmaReport rep{m, 0, 0, Rational(0), false, 0};

  std::uint64_t fibres = 0;
  for (Residue lambda = 1; lambda < p; ++lambda) fibres += fibre_count(m.scaled(lambda), limits).count;
  if (fibres % p != 0) throw std::logic_error("sigma: sum of fibres not divisible by p");
  rep.direct = static_cast<std::int64_t>(fibres / p);

  const std::uint64_t total = checked_pow(p, static_cast<unsigned>(n * n));
  require_budget(total, limits, "sigma closed form");
  rep.closed_form = parallel_reduce<std::int64_t>(
      total, limits.threads, 0,
      [&](std::uint64_t b, std::uint64_t e) {
        std::int64_t s = 0;
        for (std::uint64_t i = b; i < e; ++i) {
          const auto cent = kernel_basis(ad_matrix(MatF::from_index(ctx, n, i)));
          if (centralizer_in_perp(cent, m))
            s += static_cast<std::int64_t>(checked_pow(p, static_cast<unsigned>(cent.size() - 1)) * (p - 1));
        }
        return s;
      },
      [](std::int64_t a, std::int64_t b) { return a + b; });

  for (const auto& c : classes) {
    const auto l = lvm(c.representative, m, group);
    if (l.numerator == 0) continue;
    rep.orbit_collapsed += Rational(static_cast<std::int64_t>(c.orbit)) *
                           Rational(static_cast<std::int64_t>(checked_pow(p, static_cast<unsigned>(c.dim_centralizer - 1)) * (p - 1))) *
                           l.average();
  }
  rep.agree = rep.orbit_collapsed == Rational(rep.direct) && rep.direct == rep.closed_form;
  rep.normalized = static_cast<double>(rep.direct) / std::pow(static_cast<double>(p), static_cast<double>(n * n + 1));
  return rep;
}

inline SigmaReport sigma(const MatF& m, const Limits& limits = {}) {
  return sigma(m, enumerate_classes(m.n(), m.ctx().p(), limits), make_gl(m.ctx(), m.n(), limits), limits);
}

namespace detail {

// Indicator that the listed blocks of W vanish; blocks given as a bitmask of 11,12,21,22.
enum Blocks : unsigned { b11 = 1, b12 = 2, b21 = 4, b22 = 8 };

inline bool blocks_zero(const MatF& w, const BlockSplit& split, unsigned mask) {
  if ((mask & b11) && !block_is_zero(w, split, 11)) return false;
  if ((mask & b12) && !block_is_zero(w, split, 12)) return false;
  if ((mask & b21) && !block_is_zero(w, split, 21)) return false;
  if ((mask & b22) && !block_is_zero(w, split, 22)) return false;
  return true;
}

}  // namespace detail

// Average over h in 1+E (E = matrices supported on the p12 block) of
//   variant 1: p11(h^{-1}Mh) = 0
//   variant 2: (p11, p22)(h^{-1}Mh) = 0
//   variant 3: (p11, p12, p22)(h^{-1}Mh) = 0
// against the bounds q^{-k} + min_h 1[(p11,p21) = 0], q^{-(n-1)} + min_h 1[(p11,p21,p22) = 0]
// and q^{-(n-1)} respectively.
inline AverageReport e_average(const MatF& m, std::size_t k, int variant) {
  using namespace detail;
  m.require_square("e_average");
  if (m.is_zero()) throw std::invalid_argument("e_average: M must be non-zero");
  if (variant < 1 || variant > 3) throw std::invalid_argument("e_average: variant must be 1, 2 or 3");
  const std::size_t n = m.n();
  const BlockSplit split(n, k);
  const auto& ctx = m.ctx();
  const std::uint64_t p = ctx.p();
  const std::size_t free_entries = k * (n - k);
  const std::uint64_t total = checked_pow(p, static_cast<unsigned>(free_entries));

  const unsigned target = variant == 1 ? b11 : variant == 2 ? (b11 | b22) : (b11 | b12 | b22);
  const unsigned min_mask = variant == 1 ? (b11 | b21) : (b11 | b21 | b22);
  std::int64_t hits = 0;
  bool min_indicator = true;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    MatF h = MatF::identity(ctx, n), h_inv = MatF::identity(ctx, n);
    std::uint64_t x = idx;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const auto t = static_cast<Residue>(x % p);
        x /= p;
        h(i, j) = t;
        h_inv(i, j) = ctx.neg(t);  // (1 + N)^{-1} = 1 - N since N^2 = 0
      }
    const MatF w = h_inv * m * h;
    if (blocks_zero(w, split, target)) ++hits;
    if (!blocks_zero(w, split, min_mask)) min_indicator = false;
  }

  AverageReport r;
  r.lemma = "E-average";
  r.n = n;
  r.k = k;
  r.p = p;
  r.part = variant;
  r.numerator = hits;
  r.denominator = static_cast<std::int64_t>(total);
  const int e = variant == 1 ? static_cast<int>(k) : static_cast<int>(n - 1);
  r.decay_exponent = e;
  r.bound = pow_rational(p, -e) + (variant == 3 ? Rational(0) : Rational(min_indicator ? 1 : 0));
  r.holds = r.average() <= r.bound;
  r.ratio = r.average() * pow_rational(p, e);
  return r;
}

// A k-subset I (zero-based, ascending) with sum_{i in I} x_i != 0; nullopt iff x = 0.
// Follows the two-candidate argument: if x_a != x_b, then one of S+{a}, S+{b} works for
// any (k-1)-set S avoiding a and b; if all coordinates agree, the first k give k*x_1 != 0.
inline std::optional<std::vector<std::size_t>> kcomb_witness(const FieldCtx& ctx, const std::vector<Residue>& x,
                                                             std::size_t k) {
  const std::size_t n = x.size();
  if (k < 1 || k + 1 > n) throw std::invalid_argument("kcomb_witness: need 1 <= k <= n-1");
  if (ctx.p() < n) throw std::invalid_argument("kcomb_witness: requires p >= n");
  auto sum_of = [&](const std::vector<std::size_t>& idx) {
    Residue s = 0;
    for (auto i : idx) s = ctx.add(s, x[i] % static_cast<Residue>(ctx.p()));
    return s;
  };
  if (std::all_of(x.begin(), x.end(), [&](Residue v) { return v % ctx.p() == 0; })) return std::nullopt;

  std::size_t other = n;
  for (std::size_t j = 1; j < n; ++j)
    if (x[j] % ctx.p() != x[0] % ctx.p()) {
      other = j;
      break;
    }
  if (other == n) {
    std::vector<std::size_t> first(k);
    for (std::size_t i = 0; i < k; ++i) first[i] = i;
    if (sum_of(first) != 0) return first;
  } else {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n && rest.size() + 1 < k; ++i)
      if (i != 0 && i != other) rest.push_back(i);
    for (std::size_t cand : {std::size_t{0}, other}) {
      auto idx = rest;
      idx.push_back(cand);
      std::sort(idx.begin(), idx.end());
      if (sum_of(idx) != 0) return idx;
    }
  }
  // exhaustive fallback over k-subsets
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) idx.push_back(i);
    if (sum_of(idx) != 0) return idx;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return std::nullopt;
}

inline int aux_decay_exponent(std::size_t n, std::size_t k, int part) {
  switch (part) {
    case 1:
    case 2: return static_cast<int>(k);
    case 3:
    case 4:
    case 5: return static_cast<int>(n - 1);
    case 6: return static_cast<int>(n - k);
    case 7: return 1;
    default: throw std::invalid_argument("aux_average: part must be in 1..7");
  }
}

// Average over g in GL_n of the part's indicator on g^{-1}Mg:
//   1: (p11,p21) = 0   2: p11 = 0   3: (p11,p12,p22) = 0   4: (p11,p21,p22) = 0
//   5: (p11,p22) = 0   6: p22 = 0   7: tr p11 = 0
inline AverageReport aux_average(const MatF& m, std::size_t k, int part, const GroupTable& group) {
  using namespace detail;
  m.require_square("aux_average");
  if (m.is_zero()) throw std::invalid_argument("aux_average: M must be non-zero");
  const std::size_t n = m.n();
  const BlockSplit split(n, k);
  const int e = aux_decay_exponent(n, k, part);
  const auto& ctx = m.ctx();
  unsigned mask = 0;
  switch (part) {
    case 1: mask = b11 | b21; break;
    case 2: mask = b11; break;
    case 3: mask = b11 | b12 | b22; break;
    case 4: mask = b11 | b21 | b22; break;
    case 5: mask = b11 | b22; break;
    case 6: mask = b22; break;
    default: break;
  }
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < group.elements.size(); ++i) {
    const MatF w = group.inverses[i] * m * group.elements[i];
    if (part == 7) {
      Residue t = 0;
      for (std::size_t d = 0; d < k; ++d) t = ctx.add(t, w(d, d));
      if (t == 0) ++hits;
    } else if (blocks_zero(w, split, mask)) {
      ++hits;
    }
  }
  AverageReport r;
  r.lemma = "GL-average";
  r.n = n;
  r.k = k;
  r.p = ctx.p();
  r.part = part;
  r.numerator = hits;
  r.denominator = static_cast<std::int64_t>(group.elements.size());
  r.decay_exponent = e;
  r.bound = pow_rational(ctx.p(), -e);
  r.ratio = r.average() * pow_rational(ctx.p(), e);
  r.holds = r.numerator <= r.denominator;
  return r;
}

inline AverageReport aux_average(const MatF& m, std::size_t k, int part, const Limits& limits = {}) {
  return aux_average(m, k, part, make_gl(m.ctx(), m.n(), limits));
}

// Traceless non-zero test matrices up to conjugacy: traceless class representatives plus
// the traceless projections M - (tr M / n) I of the others (when n is invertible mod p).
inline std::vector<MatF> traceless_test_set(const std::vector<ClassRecord>& classes) {
  std::vector<MatF> out;
  auto push_unique = [&](MatF m) {
    if (m.is_zero()) return;
    for (const auto& x : out)
      if (x == m) return;
    out.push_back(std::move(m));
  };
  for (const auto& c : classes)
    if (c.representative.trace() == 0) push_unique(c.representative);
  for (const auto& c : classes) {
    const MatF& v = c.representative;
    const auto& ctx = v.ctx();
    const auto n = static_cast<Residue>(v.n() % ctx.p());
    if (n == 0 || v.trace() == 0) continue;
    push_unique(v - MatF::scalar(ctx, v.n(), ctx.mul(v.trace(), ctx.inv(n))));
  }
  return out;
}

struct MainLemRow {
  std::size_t class_index = 0;
  MatF m;
  unsigned rad_deg = 0;
  Rational l;      // L(V, M)
  Rational ratio;  // L(V, M) * p^{deg f_V - 1}
};

struct MainLemReport {
  std::size_t n = 0;
  std::uint64_t p = 0;
  std::vector<MainLemRow> rows;
  Rational sup_ratio;
  std::uint64_t nonzero_trace_violations = 0;  // L(V, M) != 0 with tr M != 0
  std::uint64_t nonzero_trace_checked = 0;
};

inline MainLemReport main_lem_report(std::size_t n, std::uint64_t p, const Limits& limits = {}) {
  FieldCtx ctx(p);
  const auto classes = enumerate_classes(n, p, limits);
  const auto group = make_gl(ctx, n, limits);
  const auto tests = traceless_test_set(classes);
  std::vector<MatF> with_trace;
  for (const auto& c : classes)
    if (c.representative.trace() != 0) with_trace.push_back(c.representative);

  struct Partial {
    std::vector<MainLemRow> rows;
    std::uint64_t bad = 0, checked = 0;
  };
  auto res = parallel_reduce<Partial>(
      classes.size(), limits.threads, Partial{},
      [&](std::uint64_t b, std::uint64_t e) {
        Partial out;
        for (std::uint64_t ci = b; ci < e; ++ci) {
          const auto& c = classes[ci];
          ConjugateCentralizers cc(c.representative, group);
          for (const auto& m : with_trace) {
            ++out.checked;
            if (cc.hits(m) != 0) ++out.bad;
          }
          for (const auto& m : tests) {
            MainLemRow row{ci, m, c.rad_deg, Rational(cc.hits(m), cc.size()), Rational(0)};
            row.ratio = row.l * pow_rational(p, static_cast<int>(c.rad_deg) - 1);
            out.rows.push_back(std::move(row));
          }
        }
        return out;
      },
      [](Partial a, Partial b) {
        a.rows.insert(a.rows.end(), b.rows.begin(), b.rows.end());
        a.bad += b.bad;
        a.checked += b.checked;
        return a;
      });
  MainLemReport rep;
  rep.n = n;
  rep.p = p;
  rep.rows = std::move(res.rows);
  rep.nonzero_trace_violations = res.bad;
  rep.nonzero_trace_checked = res.checked;
  for (const auto& r : rep.rows) rep.sup_ratio = std::max(rep.sup_ratio, r.ratio);
  return rep;
}

}  // namespace commutant
