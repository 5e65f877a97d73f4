#pragma once

// Dense matrices over F_p and the exact linear algebra the verification engines need.
//
// Conventions used throughout the library:
//   * storage and flattening are row-major: flatten(U)[i*n + j] = U(i, j);
//   * the ad-operator is L_V(U) = UV - VU, so the fibre equation UV - VU = M
//     reads L_V(U) = M and ad_matrix(V) * flatten(U) = flatten(UV - VU);
//   * conjugate(g, M) = g^{-1} M g.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ff.hpp"

namespace commutant {

class MatF {
 public:
  MatF(FieldCtx ctx, std::size_t rows, std::size_t cols)
      : ctx_(ctx), rows_(rows), cols_(cols), e_(rows * cols, 0) {}
  MatF(FieldCtx ctx, std::size_t rows, std::size_t cols, std::vector<Residue> entries)
      : ctx_(ctx), rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows * cols) throw std::invalid_argument("MatF: entry count does not match shape");
    for (auto& x : e_) x = static_cast<Residue>(x % ctx_.p());
  }

  static MatF zero(FieldCtx ctx, std::size_t n) { return MatF(ctx, n, n); }
  static MatF identity(FieldCtx ctx, std::size_t n) { return scalar(ctx, n, 1); }
  static MatF scalar(FieldCtx ctx, std::size_t n, Residue c) {
    MatF m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = static_cast<Residue>(c % ctx.p());
    return m;
  }
  // Matrix unit E_ij, zero-based indices.
  static MatF unit(FieldCtx ctx, std::size_t n, std::size_t i, std::size_t j) {
    MatF m(ctx, n, n);
    m(i, j) = 1;
    return m;
  }
  static MatF from_signed(FieldCtx ctx, std::size_t rows, std::size_t cols,
                          const std::vector<std::int64_t>& entries) {
    if (entries.size() != rows * cols) throw std::invalid_argument("MatF: entry count does not match shape");
    std::vector<Residue> e;
    e.reserve(entries.size());
    for (auto x : entries) e.push_back(ctx.reduce(x));
    return MatF(ctx, rows, cols, std::move(e));
  }
  // Square matrix whose row-major entries are the base-p digits of `index`.
  static MatF from_index(FieldCtx ctx, std::size_t n, std::uint64_t index) {
    MatF m(ctx, n, n);
    const auto p = ctx.p();
    for (auto& x : m.e_) {
      x = static_cast<Residue>(index % p);
      index /= p;
    }
    return m;
  }
  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (std::size_t k = e_.size(); k-- > 0;) idx = idx * ctx_.p() + e_[k];
    return idx;
  }

  const FieldCtx& ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t n() const { return rows_; }
  bool square() const { return rows_ == cols_; }
  const std::vector<Residue>& entries() const { return e_; }

  Residue& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  bool is_zero() const {
    for (auto x : e_)
      if (x) return false;
    return true;
  }
  bool is_scalar() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? (*this)(0, 0) : 0)) return false;
    return true;
  }

  Residue trace() const {
    require_square("trace");
    Residue t = 0;
    for (std::size_t i = 0; i < rows_; ++i) t = ctx_.add(t, (*this)(i, i));
    return t;
  }

  MatF transpose() const {
    MatF t(ctx_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend MatF operator+(const MatF& a, const MatF& b) {
    a.require_same_shape(b, "+");
    MatF r = a;
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.ctx_.add(a.e_[k], b.e_[k]);
    return r;
  }
  friend MatF operator-(const MatF& a, const MatF& b) {
    a.require_same_shape(b, "-");
    MatF r = a;
    for (std::size_t k = 0; k < r.e_.size(); ++k) r.e_[k] = a.ctx_.sub(a.e_[k], b.e_[k]);
    return r;
  }
  friend MatF operator*(const MatF& a, const MatF& b) {
    if (!(a.ctx_ == b.ctx_) || a.cols_ != b.rows_) throw std::invalid_argument("MatF *: shape or field mismatch");
    MatF r(a.ctx_, a.rows_, b.cols_);
    const auto p = a.ctx_.p();
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) s = (s + std::uint64_t{a(i, k)} * b(k, j)) % p;
        r(i, j) = static_cast<Residue>(s);
      }
    return r;
  }
  MatF scaled(Residue c) const {
    MatF r = *this;
    for (auto& x : r.e_) x = ctx_.mul(x, c);
    return r;
  }
  friend bool operator==(const MatF& a, const MatF& b) {
    return a.ctx_ == b.ctx_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

  void require_same_shape(const MatF& o, const char* what) const {
    if (!(ctx_ == o.ctx_) || rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("MatF ") + what + ": shape or field mismatch");
  }
  void require_square(const char* what) const {
    if (!square()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }

 private:
  FieldCtx ctx_;
  std::size_t rows_, cols_;
  std::vector<Residue> e_;
};

using VecF = std::vector<Residue>;

inline VecF flatten(const MatF& m) { return m.entries(); }

inline MatF unflatten(const FieldCtx& ctx, std::size_t n, const VecF& v) {
  if (v.size() != n * n) throw std::invalid_argument("unflatten: vector length is not n^2");
  return MatF(ctx, n, n, v);
}

inline MatF commutator(const MatF& x, const MatF& y) {
  x.require_square("commutator");
  x.require_same_shape(y, "commutator");
  return x * y - y * x;
}

// tr(XY), the non-degenerate pairing on M_n.
inline Residue trace_pairing(const MatF& x, const MatF& y) {
  x.require_same_shape(y, "trace_pairing");
  const auto p = x.ctx().p();
  const std::size_t n = x.n();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s = (s + std::uint64_t{x(i, j)} * y(j, i)) % p;
  return static_cast<Residue>(s);
}

// Matrix of U -> UV - VU on row-major coordinates.
inline MatF ad_matrix(const MatF& v) {
  v.require_square("ad_matrix");
  const std::size_t n = v.n();
  const auto& ctx = v.ctx();
  MatF a(ctx, n * n, n * n);
  // (UV - VU)_{ij} = sum_k U_{ik} V_{kj} - sum_k V_{ik} U_{kj}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t k = 0; k < n; ++k) {
        a(row, i * n + k) = ctx.add(a(row, i * n + k), v(k, j));
        a(row, k * n + j) = ctx.sub(a(row, k * n + j), v(i, k));
      }
    }
  return a;
}

// In-place reduced row echelon form of a rows x cols row-major array. Returns pivot columns.
// Only the first `elim_cols` columns are used as pivot candidates.
inline std::vector<std::size_t> rref_inplace(const FieldCtx& ctx, std::size_t rows, std::size_t cols,
                                             std::vector<Residue>& a, std::size_t elim_cols) {
  const std::uint64_t p = ctx.p();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < elim_cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i * cols + c]) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
    const Residue inv = ctx.inv(a[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] = ctx.mul(a[r * cols + j], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const std::uint64_t f = a[i * cols + c];
      if (!f) continue;
      for (std::size_t j = c; j < cols; ++j)
        a[i * cols + j] = static_cast<Residue>((a[i * cols + j] + (p - f) * a[r * cols + j]) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(const MatF& m) {
  auto a = m.entries();
  return rref_inplace(m.ctx(), m.rows(), m.cols(), a, m.cols()).size();
}

// Kernel basis read off the reduced echelon form: one vector per free column,
// with a 1 in that column and zeros in the other free columns.
inline std::vector<VecF> kernel_basis(const MatF& m) {
  auto a = m.entries();
  const std::size_t cols = m.cols();
  auto pivots = rref_inplace(m.ctx(), m.rows(), cols, a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<VecF> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    VecF v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = m.ctx().neg(a[i * cols + f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct LinearSolution {
  VecF particular;
  std::vector<VecF> kernel;
};

// Solution set of A x = b, or nullopt when the system is inconsistent.
inline std::optional<LinearSolution> solve_linear(const MatF& a, const VecF& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: right-hand side has wrong length");
  const std::size_t rows = a.rows(), cols = a.cols(), w = cols + 1;
  std::vector<Residue> aug(rows * w);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i * w + j] = a(i, j);
    aug[i * w + cols] = static_cast<Residue>(b[i] % a.ctx().p());
  }
  auto pivots = rref_inplace(a.ctx(), rows, w, aug, w);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  LinearSolution sol;
  sol.particular.assign(cols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = aug[i * w + cols];
  sol.kernel = kernel_basis(a);
  return sol;
}

inline bool is_invertible(const MatF& g) { return g.square() && rank(g) == g.rows(); }

inline MatF inverse(const MatF& g) {
  g.require_square("inverse");
  const std::size_t n = g.n(), w = 2 * n;
  std::vector<Residue> aug(n * w, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i * w + j] = g(i, j);
    aug[i * w + n + i] = 1;
  }
  auto pivots = rref_inplace(g.ctx(), n, w, aug, n);
  if (pivots.size() != n) throw std::domain_error("inverse: matrix is singular");
  MatF inv(g.ctx(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug[i * w + n + j];
  return inv;
}

// g^{-1} M g.
inline MatF conjugate(const MatF& g, const MatF& m) {
  m.require_same_shape(g, "conjugate");
  return inverse(g) * m * g;
}

// Partition of n x n matrices into blocks with a k x k top-left corner.
class BlockSplit {
 public:
  BlockSplit(std::size_t n, std::size_t k) : n_(n), k_(k) {
    if (k < 1 || k + 1 > n) throw std::invalid_argument("BlockSplit: need 1 <= k <= n-1");
  }
  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t rows(int which) const { return which / 10 == 1 ? k_ : n_ - k_; }
  std::size_t cols(int which) const { return which % 10 == 1 ? k_ : n_ - k_; }
  std::size_t row0(int which) const { return which / 10 == 1 ? 0 : k_; }
  std::size_t col0(int which) const { return which % 10 == 1 ? 0 : k_; }

  static void check_which(int which) {
    if (which != 11 && which != 12 && which != 21 && which != 22)
      throw std::invalid_argument("block selector must be one of 11, 12, 21, 22");
  }

 private:
  std::size_t n_, k_;
};

// p_ij(M) for which = 10*i + j.
inline MatF block(const MatF& m, const BlockSplit& split, int which) {
  BlockSplit::check_which(which);
  if (m.rows() != split.n() || m.cols() != split.n()) throw std::invalid_argument("block: matrix size does not match split");
  MatF b(m.ctx(), split.rows(which), split.cols(which));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) = m(split.row0(which) + i, split.col0(which) + j);
  return b;
}

// True iff p_ij(M) = 0, without materialising the block.
inline bool block_is_zero(const MatF& m, const BlockSplit& split, int which) {
  for (std::size_t i = 0; i < split.rows(which); ++i)
    for (std::size_t j = 0; j < split.cols(which); ++j)
      if (m(split.row0(which) + i, split.col0(which) + j)) return false;
  return true;
}

inline MatF assemble(const BlockSplit& split, const MatF& b11, const MatF& b12, const MatF& b21, const MatF& b22) {
  MatF m(b11.ctx(), split.n(), split.n());
  const MatF* parts[] = {&b11, &b12, &b21, &b22};
  const int which[] = {11, 12, 21, 22};
  for (int t = 0; t < 4; ++t) {
    const MatF& b = *parts[t];
    if (b.rows() != split.rows(which[t]) || b.cols() != split.cols(which[t]))
      throw std::invalid_argument("assemble: block shape mismatch");
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(split.row0(which[t]) + i, split.col0(which[t]) + j) = b(i, j);
  }
  return m;
}

// |GL_n(F_p)| = prod_{i<n} (p^n - p^i).
inline std::uint64_t gl_order(std::size_t n, std::uint64_t p) {
  const std::uint64_t pn = checked_pow(p, static_cast<unsigned>(n));
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= pn - checked_pow(p, static_cast<unsigned>(i));
  return r;
}

// Every element of GL_n(F_p), in increasing index order.
inline std::vector<MatF> enumerate_gl(const FieldCtx& ctx, std::size_t n, const Limits& limits = {}) {
  const std::uint64_t total = checked_pow(ctx.p(), static_cast<unsigned>(n * n));
  require_budget(total, limits, "enumerate_gl");
  std::vector<MatF> group;
  group.reserve(gl_order(n, ctx.p()));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    MatF g = MatF::from_index(ctx, n, idx);
    if (is_invertible(g)) group.push_back(std::move(g));
  }
  return group;
}

}  // namespace commutant
