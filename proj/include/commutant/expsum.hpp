#pragma once

// Exact matrix exponential sums
//   S(A, B; p) = sum_{UV = VU} e_p(tr(AU + BV))
// held as residue-count vectors in Z[zeta_p].

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "conjugacy.hpp"
#include "core.hpp"
#include "matfp.hpp"

namespace commutant {

// Value sum_k counts[k] zeta_p^k. Since 1 + zeta + ... + zeta^{p-1} = 0 the
// representation is unique once counts[0] has been subtracted from every entry.
class ExpSumCounts {
 public:
  explicit ExpSumCounts(std::uint64_t p) : counts_(p, 0) {}
  ExpSumCounts(std::uint64_t p, std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
    if (counts_.size() != p) throw std::invalid_argument("ExpSumCounts: vector length must equal p");
  }

  std::uint64_t p() const { return counts_.size(); }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t& operator[](std::size_t k) { return counts_[k]; }

  ExpSumCounts normalized() const {
    ExpSumCounts r = *this;
    const std::int64_t c0 = counts_[0];
    for (auto& x : r.counts_) x -= c0;
    return r;
  }
  bool is_zero() const { return normalized().counts_ == std::vector<std::int64_t>(p(), 0); }

  // The value as a rational integer, when it is one.
  std::optional<std::int64_t> as_integer() const {
    auto nv = normalized().counts_;
    for (std::size_t k = 2; k < nv.size(); ++k)
      if (nv[k] != nv[1]) return std::nullopt;
    return nv.size() > 1 ? -nv[1] : counts_[0];
  }

  ExpSumCounts& operator+=(const ExpSumCounts& o) {
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += o.counts_[k];
    return *this;
  }
  friend bool operator==(const ExpSumCounts& a, const ExpSumCounts& b) {
    return a.p() == b.p() && a.normalized().counts_ == b.normalized().counts_;
  }

 private:
  std::vector<std::int64_t> counts_;
};

// |sum_k c_k zeta^k| in double precision with compensated summation.
inline double magnitude(const ExpSumCounts& s) {
  const auto nv = s.normalized();
  const std::uint64_t p = s.p();
  double re = 0, im = 0, cre = 0, cim = 0;
  auto kahan = [](double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t k = 0; k < p; ++k) {
    const double c = static_cast<double>(nv.counts()[k]);
    if (c == 0) continue;
    const double angle = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
    kahan(re, cre, c * std::cos(angle));
    kahan(im, cim, c * std::sin(angle));
  }
  return std::hypot(re, im);
}

// Flattened tr(XY) for row-major n x n vectors.
inline std::uint64_t trace_pairing_flat(const std::vector<Residue>& x, const std::vector<Residue>& y, std::size_t n) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += std::uint64_t{x[i * n + j]} * y[j * n + i];
  return s;
}

// Per-V data for all V in M_n(F_p): the centralizer C(V) = ker ad(V) as a basis.
class CommutingTable {
 public:
  CommutingTable(std::size_t n, std::uint64_t p, const Limits& limits = {}) : ctx_(p), n_(n) {
    const std::uint64_t total = checked_pow(p, static_cast<unsigned>(n * n));
    require_budget(total, limits, "CommutingTable");
    auto rows = parallel_reduce<std::vector<Entry>>(
        total, limits.threads, {},
        [&](std::uint64_t b, std::uint64_t e) {
          std::vector<Entry> out;
          for (std::uint64_t i = b; i < e; ++i) {
            MatF v = MatF::from_index(ctx_, n, i);
            Entry en{v.entries(), kernel_basis(ad_matrix(v)), 0};
            en.weight = checked_pow(p, static_cast<unsigned>(en.centralizer.size()));
            out.push_back(std::move(en));
          }
          return out;
        },
        [](std::vector<Entry> a, std::vector<Entry> b) {
          a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
          return a;
        });
    entries_ = std::move(rows);
  }

  struct Entry {
    std::vector<Residue> v;
    std::vector<std::vector<Residue>> centralizer;
    std::uint64_t weight;  // p^{dim C(V)}
  };

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t n() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // True iff tr(A Z) = 0 for every Z in C(V).
  bool annihilates(const std::vector<Residue>& a, const Entry& e) const {
    for (const auto& z : e.centralizer)
      if (trace_pairing_flat(a, z, n_) % ctx_.p() != 0) return false;
    return true;
  }

 private:
  FieldCtx ctx_;
  std::size_t n_;
  std::vector<Entry> entries_;
};

inline void check_pair(const MatF& a, const MatF& b) {
  a.require_square("exp_sum");
  a.require_same_shape(b, "exp_sum");
}

// Production path: for each V the inner sum over U in C(V) of e_p(tr(AU)) is
// p^{dim C(V)} when tr(A .) vanishes on C(V) and 0 otherwise.
inline ExpSumCounts exp_sum(const MatF& a, const MatF& b, const CommutingTable& table) {
  check_pair(a, b);
  if (!(a.ctx() == table.ctx()) || a.n() != table.n()) throw std::invalid_argument("exp_sum: table does not match");
  const std::uint64_t p = a.ctx().p();
  ExpSumCounts s(p);
  for (const auto& e : table.entries())
    if (table.annihilates(a.entries(), e)) s[trace_pairing_flat(b.entries(), e.v, a.n()) % p] += static_cast<std::int64_t>(e.weight);
  return s;
}

inline ExpSumCounts exp_sum(const MatF& a, const MatF& b, const Limits& limits = {}) {
  check_pair(a, b);
  return exp_sum(a, b, CommutingTable(a.n(), a.ctx().p(), limits));
}

// Oracle: (1/p^{n^2}) sum_{U,V,Z} e_p(tr(Z(UV - VU) + AU + BV)). The Z-sum for each
// (U, V) is tabulated once as a histogram of tr(Z(UV - VU)) residues.
class TripleSumOracle {
 public:
  TripleSumOracle(std::size_t n, std::uint64_t p, const Limits& limits = {}) : ctx_(p), n_(n) {
    const std::uint64_t side = checked_pow(p, static_cast<unsigned>(n * n));
    require_budget(checked_pow(side, 3), limits, "exp_sum_triple_oracle");
    side_ = side;
    for (std::uint64_t i = 0; i < side; ++i) mats_.push_back(MatF::from_index(ctx_, n, i).entries());
    hist_.assign(side * side * p, 0);
    for (std::uint64_t u = 0; u < side; ++u)
      for (std::uint64_t v = 0; v < side; ++v) {
        const MatF c = commutator(MatF(ctx_, n, n, mats_[u]), MatF(ctx_, n, n, mats_[v]));
        for (std::uint64_t z = 0; z < side; ++z) ++hist_[(u * side + v) * p + trace_pairing_flat(mats_[z], c.entries(), n) % p];
      }
  }

  ExpSumCounts operator()(const MatF& a, const MatF& b) const {
    check_pair(a, b);
    const std::uint64_t p = ctx_.p();
    std::vector<std::uint64_t> tr_a(side_), tr_b(side_);
    for (std::uint64_t i = 0; i < side_; ++i) {
      tr_a[i] = trace_pairing_flat(a.entries(), mats_[i], n_) % p;
      tr_b[i] = trace_pairing_flat(b.entries(), mats_[i], n_) % p;
    }
    std::vector<std::int64_t> acc(p, 0);
    for (std::uint64_t u = 0; u < side_; ++u)
      for (std::uint64_t v = 0; v < side_; ++v) {
        const auto* h = &hist_[(u * side_ + v) * p];
        const std::uint64_t base = tr_a[u] + tr_b[v];
        for (std::uint64_t r = 0; r < p; ++r)
          if (h[r]) acc[(base + r) % p] += h[r];
      }
    // exact division by p^{n^2} of the normalized vector
    ExpSumCounts total = ExpSumCounts(p, std::move(acc)).normalized();
    std::vector<std::int64_t> out(p);
    const auto scale = static_cast<std::int64_t>(side_);
    for (std::size_t k = 0; k < p; ++k) {
      if (total.counts()[k] % scale != 0) throw std::logic_error("triple-sum accumulator not divisible by p^{n^2}");
      out[k] = total.counts()[k] / scale;
    }
    return ExpSumCounts(p, std::move(out));
  }

 private:
  FieldCtx ctx_;
  std::size_t n_;
  std::uint64_t side_ = 0;
  std::vector<std::vector<Residue>> mats_;
  std::vector<std::int64_t> hist_;
};

inline ExpSumCounts exp_sum_triple_oracle(const MatF& a, const MatF& b, const Limits& limits = {}) {
  check_pair(a, b);
  return TripleSumOracle(a.n(), a.ctx().p(), limits)(a, b);
}

// #{(U, V) : UV = VU} by brute force over all pairs.
inline std::uint64_t commuting_count_brute(std::size_t n, std::uint64_t p, const Limits& limits = {}) {
  FieldCtx ctx(p);
  const std::uint64_t side = checked_pow(p, static_cast<unsigned>(n * n));
  require_budget(checked_pow(side, 2), limits, "commuting_count brute force");
  std::vector<MatF> all;
  for (std::uint64_t i = 0; i < side; ++i) all.push_back(MatF::from_index(ctx, n, i));
  return parallel_reduce<std::uint64_t>(
      side, limits.threads, 0,
      [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t s = 0;
        for (std::uint64_t i = b; i < e; ++i)
          for (const auto& v : all)
            if (all[i] * v == v * all[i]) ++s;
        return s;
      },
      [](std::uint64_t x, std::uint64_t y) { return x + y; });
}

// sum over classes of orbit * p^{dim C(V)}.
inline std::uint64_t commuting_count_classes(const std::vector<ClassRecord>& classes, std::uint64_t p) {
  std::uint64_t s = 0;
  for (const auto& c : classes) s += c.orbit * checked_pow(p, static_cast<unsigned>(c.dim_centralizer));
  return s;
}

// #{(U, V) in M_n(F_p)^2 : UV = VU}. The class formula is the answer; the brute-force
// count is compared against it whenever p^{2n^2} fits in the budget.
inline std::uint64_t commuting_count(std::size_t n, std::uint64_t p, const Limits& limits = {}) {
  const std::uint64_t via_classes = commuting_count_classes(enumerate_classes(n, p, limits), p);
  const std::uint64_t side = checked_pow(p, static_cast<unsigned>(n * n));
  if (side <= limits.budget / side) {
    const std::uint64_t brute = commuting_count_brute(n, p, limits);
    if (brute != via_classes)
      throw PropertyViolation("commuting_count: class formula " + std::to_string(via_classes) +
                              " != brute force " + std::to_string(brute));
  }
  return via_classes;
}

struct LemmaExpRow {
  std::uint64_t a_index = 0, b_index = 0;
  bool p_divides_tr_a = false, p_divides_tr_b = false;
  bool exact_zero = false;
  double abs_s = 0;
  double ratio = 0;  // |S| / p^{n^2+1}
};

struct LemmaExpReport {
  std::size_t n = 0;
  std::uint64_t p = 0;
  bool exhaustive = true;
  std::uint64_t tested = 0;
  std::uint64_t nonzero_sums = 0;
  std::uint64_t violations = 0;            // S != 0 although p does not divide tr A or tr B
  std::uint64_t bound_violations = 0;      // |S(A,B)| > S(A,0)
  double max_ratio = 0;
  std::uint64_t argmax_a = 0, argmax_b = 0;
  std::vector<LemmaExpRow> rows;           // filled when requested
};

enum class Mode { exhaustive, sample };

// Checks over the (A, B) != (0, 0) range: S = 0 unless p | tr A and p | tr B, and
// |S(A, B)| <= S(A, 0). Records the largest |S| / p^{n^2+1}.
inline LemmaExpReport lemma_exp_report(std::size_t n, std::uint64_t p, Mode mode, std::uint64_t seed = 0,
                                       std::uint64_t sample_count = 0, bool keep_rows = false,
                                       const Limits& limits = {}) {
  const CommutingTable table(n, p, limits);
  const FieldCtx& ctx = table.ctx();
  const std::uint64_t side = checked_pow(p, static_cast<unsigned>(n * n));
  const double scale = std::pow(static_cast<double>(p), static_cast<double>(n * n + 1));
  LemmaExpReport rep;
  rep.n = n;
  rep.p = p;
  rep.exhaustive = mode == Mode::exhaustive;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  if (mode == Mode::exhaustive) {
    require_budget(checked_pow(side, 3), limits, "lemma_exp_report");
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, side - 1);
    while (pairs.size() < sample_count) {
      std::uint64_t a = pick(rng), b = pick(rng);
      if (a == 0 && b == 0) continue;
      pairs.emplace_back(a, b);
    }
  }

  std::vector<std::vector<Residue>> mats(side);
  for (std::uint64_t i = 0; i < side; ++i) mats[i] = MatF::from_index(ctx, n, i).entries();
  auto tr = [&](std::uint64_t i) {
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < n; ++k) t += mats[i][k * n + k];
    return t % p;
  };

  // Per A: the V with tr(A .) vanishing on C(V), and S(A, 0) = sum of their weights.
  struct Support {
    std::vector<std::size_t> vs;
    std::int64_t s_a0 = 0;
  };
  auto support_of = [&](std::uint64_t a) {
    Support s;
    for (std::size_t i = 0; i < table.entries().size(); ++i)
      if (table.annihilates(mats[a], table.entries()[i])) {
        s.vs.push_back(i);
        s.s_a0 += static_cast<std::int64_t>(table.entries()[i].weight);
      }
    return s;
  };

  auto evaluate = [&](std::uint64_t a, std::uint64_t b, const Support& sup, LemmaExpReport& out) {
    ExpSumCounts s(p);
    for (auto vi : sup.vs) {
      const auto& e = table.entries()[vi];
      s[trace_pairing_flat(mats[b], e.v, n) % p] += static_cast<std::int64_t>(e.weight);
    }
    LemmaExpRow row;
    row.a_index = a;
    row.b_index = b;
    row.p_divides_tr_a = tr(a) == 0;
    row.p_divides_tr_b = tr(b) == 0;
    row.exact_zero = s.is_zero();
    row.abs_s = row.exact_zero ? 0.0 : magnitude(s);
    row.ratio = row.abs_s / scale;
    ++out.tested;
    if (!row.exact_zero) ++out.nonzero_sums;
    if (!row.exact_zero && !(row.p_divides_tr_a && row.p_divides_tr_b)) ++out.violations;
    if (row.abs_s > static_cast<double>(sup.s_a0) * (1 + 1e-12) + 1e-9) ++out.bound_violations;
    if (row.ratio > out.max_ratio) {
      out.max_ratio = row.ratio;
      out.argmax_a = a;
      out.argmax_b = b;
    }
    if (keep_rows) out.rows.push_back(row);
  };

  auto merge = [](LemmaExpReport x, LemmaExpReport y) {
    x.tested += y.tested;
    x.nonzero_sums += y.nonzero_sums;
    x.violations += y.violations;
    x.bound_violations += y.bound_violations;
    if (y.max_ratio > x.max_ratio) {
      x.max_ratio = y.max_ratio;
      x.argmax_a = y.argmax_a;
      x.argmax_b = y.argmax_b;
    }
    x.rows.insert(x.rows.end(), y.rows.begin(), y.rows.end());
    return x;
  };

  LemmaExpReport partial = mode == Mode::exhaustive
      ? parallel_reduce<LemmaExpReport>(
            side, limits.threads, LemmaExpReport{},
            [&](std::uint64_t b, std::uint64_t e) {
              LemmaExpReport out;
              for (std::uint64_t a = b; a < e; ++a) {
                const Support sup = support_of(a);
                for (std::uint64_t bb = 0; bb < side; ++bb)
                  if (a != 0 || bb != 0) evaluate(a, bb, sup, out);
              }
              return out;
            },
            merge)
      : parallel_reduce<LemmaExpReport>(
            pairs.size(), limits.threads, LemmaExpReport{},
            [&](std::uint64_t b, std::uint64_t e) {
              LemmaExpReport out;
              for (std::uint64_t i = b; i < e; ++i) evaluate(pairs[i].first, pairs[i].second, support_of(pairs[i].first), out);
              return out;
            },
            merge);
  partial.n = rep.n;
  partial.p = rep.p;
  partial.exhaustive = rep.exhaustive;
  return partial;
}

// Histogram of |S(A, B; p)| over (A, B) != (0, 0), binned by floor(2 log_p |S|) / 2.
// Exact zeros are counted under the key "zero".
inline std::map<std::string, std::uint64_t> strata_probe(std::size_t n, std::uint64_t p, const Limits& limits = {}) {
  auto rep = lemma_exp_report(n, p, Mode::exhaustive, 0, 0, true, limits);
  std::map<std::string, std::uint64_t> hist;
  for (const auto& r : rep.rows) {
    if (r.exact_zero) {
      ++hist["zero"];
      continue;
    }
    const double e = std::floor(2 * std::log(r.abs_s) / std::log(static_cast<double>(p)) + 1e-9) / 2;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", e);
    ++hist[buf];
  }
  return hist;
}

}  // namespace commutant
