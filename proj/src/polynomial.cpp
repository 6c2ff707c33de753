#include "bkk/polynomial.hpp"

#include <stdexcept>

namespace bkk {

namespace {

void monomials_rec(int n, int i, int left, Monomial& cur, std::vector<Monomial>& out) {
  if (i == n - 1) {
    cur[i] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[i] = e;
    monomials_rec(n, i + 1, left - e, cur, out);
  }
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

using RowMat = std::vector<std::vector<Rational>>;

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref_rational(RowMat& m, int cols) {
  std::vector<int> pivots;
  size_t row = 0;
  for (int col = 0; col < cols && row < m.size(); ++col) {
    size_t piv = row;
    while (piv < m.size() && m[piv][col].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    Rational inv = Rational(1) / m[row][col];
    for (int j = col; j < cols; ++j) m[row][j] *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (int j = col; j < cols; ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int n, int d) {
  std::vector<Monomial> out;
  if (n == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Monomial cur(n, 0);
  monomials_rec(n, 0, d, cur, out);
  return out;
}

int degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

Poly poly_monomial(const Monomial& m, Rational c) {
  Poly p;
  if (!c.is_zero()) p[m] = c;
  return p;
}

Poly poly_variable(int n, int i) {
  Monomial m(n, 0);
  m[i] = 1;
  return poly_monomial(m);
}

Poly poly_add(const Poly& a, const Poly& b, Rational scale) {
  Poly r = a;
  for (const auto& [m, c] : b) {
    Rational v = r[m] + scale * c;
    if (v.is_zero()) {
      r.erase(m);
    } else {
      r[m] = v;
    }
  }
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) r = poly_add(r, poly_monomial(mono_mul(ma, mb), ca * cb));
  }
  return r;
}

Poly poly_substitute(const Poly& p, const IntMat& a) {
  const int n = a.n;
  std::vector<Poly> image(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (a(k, j) != 0) image[j] = poly_add(image[j], poly_variable(n, k), Rational(a(k, j)));
    }
  }
  Poly r;
  for (const auto& [m, c] : p) {
    Poly term = poly_monomial(Monomial(n, 0), c);
    for (int j = 0; j < n; ++j) {
      for (int e = 0; e < m[j]; ++e) term = poly_mul(term, image[j]);
    }
    r = poly_add(r, term);
  }
  return r;
}

Poly reynolds(const Poly& p, const std::vector<IntMat>& group) {
  Poly r;
  for (const auto& g : group) r = poly_add(r, poly_substitute(p, g));
  Poly out;
  for (const auto& [m, c] : r) out[m] = c / Rational(static_cast<int64_t>(group.size()));
  return out;
}

GradedQuotient::GradedQuotient(int n, std::vector<Poly> gens, int max_degree) : n_(n), gens_(std::move(gens)) {
  for (const auto& g : gens_) {
    if (g.empty()) throw std::invalid_argument("bkk: zero ideal generator");
    int d0 = degree(g.begin()->first);
    for (const auto& [m, c] : g) {
      if (degree(m) != d0) throw std::invalid_argument("bkk: ideal generators must be homogeneous");
    }
  }
  for (int d = 0;; ++d) {
    if (d > max_degree) throw std::invalid_argument("bkk: quotient is not finite-dimensional within the degree bound");
    Piece piece;
    piece.monomials = monomials_of_degree(n_, d);
    const int cols = static_cast<int>(piece.monomials.size());
    for (int c = 0; c < cols; ++c) piece.column[piece.monomials[c]] = c;
    RowMat rows;
    for (const auto& g : gens_) {
      int e = degree(g.begin()->first);
      if (e > d) continue;
      for (const auto& m : monomials_of_degree(n_, d - e)) {
        std::vector<Rational> row(cols);
        for (const auto& [gm, gc] : g) row[piece.column.at(mono_mul(gm, m))] += gc;
        rows.push_back(std::move(row));
      }
    }
    std::vector<int> pivots = rref_rational(rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;
    piece.standard_index.assign(cols, -1);
    int standard = 0;
    for (int c = 0; c < cols; ++c) {
      if (is_pivot[c]) continue;
      piece.standard_index[c] = static_cast<int>(basis_.size());
      basis_.push_back(piece.monomials[c]);
      ++standard;
    }
    for (size_t r = 0; r < pivots.size(); ++r) {
      std::vector<std::pair<int, Rational>> nf;
      for (int c = 0; c < cols; ++c) {
        if (!is_pivot[c] && !rows[r][c].is_zero()) nf.emplace_back(piece.standard_index[c], -rows[r][c]);
      }
      piece.rewrite[pivots[r]] = std::move(nf);
    }
    pieces_.push_back(std::move(piece));
    if (standard == 0) break;
  }
}

std::vector<Rational> GradedQuotient::reduce(const Poly& p) const {
  std::vector<Rational> out(basis_.size());
  for (const auto& [m, c] : p) {
    int d = degree(m);
    if (d >= static_cast<int>(pieces_.size())) continue;
    const Piece& piece = pieces_[d];
    int col = piece.column.at(m);
    if (piece.standard_index[col] >= 0) {
      out[piece.standard_index[col]] += c;
    } else {
      for (const auto& [idx, coef] : piece.rewrite.at(col)) out[idx] += c * coef;
    }
  }
  return out;
}

std::vector<std::vector<Rational>> GradedQuotient::multiplication(int i) const {
  std::vector<std::vector<Rational>> m(basis_.size(), std::vector<Rational>(basis_.size()));
  for (size_t j = 0; j < basis_.size(); ++j) {
    Monomial b = basis_[j];
    b[i] += 1;
    auto col = reduce(poly_monomial(b));
    for (size_t r = 0; r < basis_.size(); ++r) m[r][j] = col[r];
  }
  return m;
}

std::vector<std::vector<Rational>> GradedQuotient::substitution(const IntMat& a) const {
  std::vector<std::vector<Rational>> m(basis_.size(), std::vector<Rational>(basis_.size()));
  for (size_t j = 0; j < basis_.size(); ++j) {
    auto col = reduce(poly_substitute(poly_monomial(basis_[j]), a));
    for (size_t r = 0; r < basis_.size(); ++r) m[r][j] = col[r];
  }
  return m;
}

std::vector<std::vector<std::vector<Rational>>> GradedQuotient::multiplication_table() const {
  std::vector<std::vector<std::vector<Rational>>> t(basis_.size());
  for (size_t i = 0; i < basis_.size(); ++i) {
    for (size_t j = 0; j < basis_.size(); ++j) t[i].push_back(reduce(poly_monomial(mono_mul(basis_[i], basis_[j]))));
  }
  return t;
}

std::vector<Poly> positive_invariants(const std::vector<IntMat>& group, int n) {
  std::vector<Poly> out;
  const int top = static_cast<int>(group.size());
  for (int d = 1; d <= top; ++d) {
    for (const auto& m : monomials_of_degree(n, d)) {
      Poly r = reynolds(poly_monomial(m), group);
      if (!r.empty()) out.push_back(std::move(r));
    }
  }
  return out;
}

GradedQuotient coinvariant_algebra(const std::vector<IntMat>& group, int n) {
  if (n > 3) throw std::invalid_argument("bkk: coinvariant algebra supports rank at most 3");
  return GradedQuotient(n, positive_invariants(group, n));
}

}  // namespace bkk
