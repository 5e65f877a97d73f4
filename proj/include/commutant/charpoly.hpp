#pragma once

#include "ff.hpp"
#include "matfp.hpp"

namespace commutant {

// det(tI - V) by Berkowitz's division-free recurrence, so no step divides in F_p.
inline Poly char_poly(const MatF& v) {
  v.require_square("char_poly");
  const std::size_t n = v.n();
  const auto& ctx = v.ctx();
  if (n == 0) return Poly::one(ctx);
  // c holds coefficients from the leading term down: c[0] t^m + c[1] t^{m-1} + ...
  std::vector<Residue> c = {1, ctx.neg(v(n - 1, n - 1))};
  for (std::size_t k = n - 1; k-- > 0;) {
    const std::size_t m = n - 1 - k;  // size of the trailing block
    // column of the Toeplitz factor: 1, -a, -R S, -R M S, ..., -R M^{m-1} S
    std::vector<Residue> col(m + 2);
    col[0] = 1;
    col[1] = ctx.neg(v(k, k));
    std::vector<Residue> s(m);  // M^j S
    for (std::size_t i = 0; i < m; ++i) s[i] = v(k + 1 + i, k);
    for (std::size_t j = 0; j < m; ++j) {
      Residue rs = 0;
      for (std::size_t i = 0; i < m; ++i) rs = ctx.add(rs, ctx.mul(v(k, k + 1 + i), s[i]));
      col[j + 2] = ctx.neg(rs);
      std::vector<Residue> next(m, 0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < m; ++l) next[i] = ctx.add(next[i], ctx.mul(v(k + 1 + i, k + 1 + l), s[l]));
      s = std::move(next);
    }
    std::vector<Residue> out(m + 2, 0);
    for (std::size_t i = 0; i < m + 2; ++i)
      for (std::size_t j = 0; j <= i && j < c.size(); ++j) out[i] = ctx.add(out[i], ctx.mul(col[i - j], c[j]));
    c = std::move(out);
  }
  return Poly(ctx, std::vector<Residue>(c.rbegin(), c.rend()));
}

// Companion matrix of a monic f: ones on the subdiagonal, -f_0..-f_{m-1} in the last column.
inline MatF companion(const Poly& f) {
  if (!f.is_monic() || f.degree() < 1) throw std::invalid_argument("companion: need monic polynomial of degree >= 1");
  const auto m = static_cast<std::size_t>(f.degree());
  MatF c(f.ctx(), m, m);
  for (std::size_t i = 1; i < m; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < m; ++i) c(i, m - 1) = f.ctx().neg(f.coeff(i));
  return c;
}

}  // namespace commutant
