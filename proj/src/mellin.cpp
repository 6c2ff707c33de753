#include "bkk/mellin.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <stdexcept>

#include "bkk/errors.hpp"
#include "bkk/scalar.hpp"

namespace bkk {

namespace {

Cyclotomic one(const FieldPtr& f) { return Cyclotomic(f, Rational(1)); }

Cyclotomic zeta(const FieldPtr& f, int q, int64_t k) { return Cyclotomic::root_of_unity(f, q - 1, mod_floor(k, q - 1)); }

void set_block(Matrix& m, int r0, int c0, const Matrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
}

Matrix vstack(const Matrix& a, const Matrix& b) { return a.transpose().hstack(b.transpose()).transpose(); }

std::vector<int> simple_reflection_indices(const std::vector<WeylElement>& W) {
  std::vector<int> out;
  for (size_t k = 0; k < W.size(); ++k) {
    if (W[k].word.size() == 1) out.push_back(static_cast<int>(k));
  }
  return out;
}

// Rational solution t of sum_j t_j v_j = target, if any.
std::optional<std::vector<Rational>> solve_rational(const std::vector<IntVec>& vs, const std::vector<Rational>& target) {
  const int n = static_cast<int>(target.size());
  const int r = static_cast<int>(vs.size());
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(r + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) a[i][j] = Rational(vs[j][i]);
    a[i][r] = target[i];
  }
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < r && row < n; ++col) {
    int piv = row;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (int k = 0; k < n; ++k) {
      if (k == row || a[k][col].is_zero()) continue;
      Rational f = a[k][col];
      for (int j = 0; j <= r; ++j) a[k][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  for (int k = row; k < n; ++k) {
    if (!a[k][r].is_zero()) return std::nullopt;
  }
  std::vector<Rational> t(r);
  for (size_t k = 0; k < pivots.size(); ++k) t[pivots[k]] = a[k][r];
  return t;
}

std::vector<Rational> apply_int(const IntMat& a, const std::vector<Rational>& v) {
  std::vector<Rational> r(v.size());
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r[i] += Rational(a(i, j)) * v[j];
  return r;
}

int64_t int_det(const IntMat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  const size_t k = rows.size();
  if (k == 0) return 1;
  if (k == 1) return a(rows[0], cols[0]);
  int64_t d = 0;
  for (size_t j = 0; j < k; ++j) {
    std::vector<int> r(rows.begin() + 1, rows.end());
    std::vector<int> c;
    for (size_t l = 0; l < k; ++l) {
      if (l != j) c.push_back(cols[l]);
    }
    int64_t minor = int_det(a, r, c);
    d += (j % 2 ? -1 : 1) * a(rows[0], cols[j]) * minor;
  }
  return d;
}

std::vector<int> bits_of(unsigned s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1) {
    if (s & 1u) out.push_back(i);
  }
  return out;
}

std::vector<unsigned> subsets_of_size(int n, int p) {
  std::vector<unsigned> out;
  for (unsigned s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) == p) out.push_back(s);
  }
  return out;
}

Matrix eval_poly(const Poly& p, const std::vector<Matrix>& N, FieldPtr field, int dim) {
  Matrix r(field, dim, dim);
  for (const auto& [m, c] : p) {
    Matrix term = Matrix::identity(field, dim);
    for (size_t i = 0; i < m.size(); ++i) term = term * N[i].pow(m[i]);
    r = r + term * Cyclotomic(field, c);
  }
  return r;
}

Matrix monomial_matrix(const Monomial& m, const std::vector<Matrix>& N, FieldPtr field, int dim) {
  Matrix term = Matrix::identity(field, dim);
  for (size_t i = 0; i < m.size(); ++i) term = term * N[i].pow(m[i]);
  return term;
}

}  // namespace

FieldPtr mellin_field(int q) {
  if (q < 3) throw std::invalid_argument("bkk: Mellin modules need q >= 3");
  return CyclotomicField::get(q - 1);
}

Matrix to_matrix(FieldPtr field, const std::vector<std::vector<Rational>>& m) {
  const int r = static_cast<int>(m.size());
  const int c = r ? static_cast<int>(m[0].size()) : 0;
  Matrix out(field, r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      if (!m[i][j].is_zero()) out(i, j) = Cyclotomic(field, m[i][j]);
    }
  return out;
}

Matrix MellinModule::omega_eff(int w) const { return sign_twisted ? omega[w] : omega[w] * Cyclotomic(field, Rational(W[w].sign)); }

Matrix MellinModule::omega_untwisted(int w) const {
  return sign_twisted ? omega[w] * Cyclotomic(field, Rational(W[w].sign)) : omega[w];
}

Matrix MellinModule::X_lambda(const IntVec& lambda) const {
  Matrix r = Matrix::identity(field, dim);
  for (size_t i = 0; i < lambda.size(); ++i) {
    const Matrix& g = lambda[i] >= 0 ? X[i] : X_inv[i];
    r = r * g.pow(static_cast<int>(lambda[i] >= 0 ? lambda[i] : -lambda[i]));
  }
  return r;
}

void MellinModule::finalize() {
  X_inv.clear();
  for (const auto& x : X) {
    auto inv = inverse(x);
    if (!inv) throw StructuralError("lattice generator is not invertible");
    X_inv.push_back(*inv);
  }
}

RelationReport check_relations(const MellinModule& m) {
  RelationReport rep;
  const int n = m.rd.rank;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (m.X[i] * m.X[j] != m.X[j] * m.X[i]) rep.commuting = false;
    }
  const Matrix id = Matrix::identity(m.field, m.dim);
  if (m.omega[0] != id) rep.homomorphism = false;
  for (size_t a = 0; a < m.W.size(); ++a) {
    for (size_t b = 0; b < m.W.size(); ++b) {
      int ab = weyl_multiply(m.W, static_cast<int>(a), static_cast<int>(b));
      if (m.omega[a] * m.omega[b] != m.omega[ab]) rep.homomorphism = false;
    }
    for (int i = 0; i < n; ++i) {
      IntVec e(n, 0);
      e[i] = 1;
      if (m.omega[a] * m.X[i] != m.X_lambda(m.W[a].act_cochar(e)) * m.omega[a]) rep.equivariant = false;
    }
  }
  return rep;
}

SupportPoint make_support_point(const RootDatum& rd, const std::vector<WeylElement>& W, const TorusCharacter& chi) {
  SupportPoint sp;
  sp.chi = chi;
  const int n = rd.rank;
  for (int i = 0; i < n; ++i) sp.lambda.push_back(Rational(chi.m[i], chi.q - 1));
  std::vector<IntVec> simple_roots;
  for (int s : rd.simple) simple_roots.push_back(rd.roots[s]);
  std::map<int, IntVec> trans;
  for (size_t w = 0; w < W.size(); ++w) {
    int winv = weyl_inverse(W, static_cast<int>(w));
    auto img = apply_int(W[winv].character, sp.lambda);
    std::vector<Rational> diff(n);
    bool integral = true;
    IntVec iv(n);
    for (int i = 0; i < n; ++i) {
      diff[i] = img[i] - sp.lambda[i];
      if (!diff[i].is_integer()) integral = false;
      iv[i] = diff[i].num();
    }
    if (!integral) continue;
    sp.stab_extended.push_back(static_cast<int>(w));
    sp.translation.push_back(iv);
    trans[static_cast<int>(w)] = iv;
    bool in_root_lattice = false;
    if (simple_roots.empty()) {
      in_root_lattice = std::all_of(iv.begin(), iv.end(), [](int64_t x) { return x == 0; });
    } else if (auto t = solve_rational(simple_roots, diff)) {
      in_root_lattice = std::all_of(t->begin(), t->end(), [](const Rational& x) { return x.is_integer(); });
    }
    if (in_root_lattice) sp.stab_affine.push_back(static_cast<int>(w));
  }
  auto st = stabilizers(rd, W, chi);
  bool ok = st.full == sp.stab_extended && st.reflection == sp.stab_affine;
  for (int a : sp.stab_extended) {
    // (w, mu) acts by v -> w(v + mu); it must fix lambda.
    std::vector<Rational> shifted(n);
    for (int i = 0; i < n; ++i) shifted[i] = sp.lambda[i] + Rational(trans[a][i]);
    if (apply_int(W[a].character, shifted) != sp.lambda) ok = false;
    for (int b : sp.stab_extended) {
      int ab = weyl_multiply(W, a, b);
      auto it = trans.find(ab);
      if (it == trans.end()) {
        ok = false;
        continue;
      }
      // (a, mu_a)(b, mu_b) = (ab, mu_b + b^{-1} mu_a)
      int binv = weyl_inverse(W, b);
      IntVec expect = W[binv].character.apply(trans[a]);
      for (int i = 0; i < n; ++i) expect[i] += trans[b][i];
      if (expect != it->second) ok = false;
    }
  }
  sp.iso_ok = ok;
  return sp;
}

Matrix generalized_eigenspace(const MellinModule& m, const TorusCharacter& chi) {
  Matrix basis = Matrix::identity(m.field, m.dim);
  for (int i = 0; i < m.rd.rank && basis.cols() > 0; ++i) {
    Matrix r = restrict_to(m.X[i], basis);
    Matrix shifted = r - Matrix::scalar(m.field, r.rows(), zeta(m.field, m.q, chi.m[i]));
    basis = basis * kernel(shifted.pow(r.rows()));
  }
  return basis;
}

std::vector<SupportPoint> support(const MellinModule& m) {
  if (!check_relations(m).commuting) throw StructuralError("lattice generators do not commute");
  struct Partial {
    Matrix basis;
    IntVec c;
  };
  std::vector<Partial> cur{{Matrix::identity(m.field, m.dim), {}}};
  for (int i = 0; i < m.rd.rank; ++i) {
    std::vector<Partial> next;
    for (const auto& part : cur) {
      if (part.basis.cols() == 0) continue;
      Matrix r = restrict_to(m.X[i], part.basis);
      for (int k = 0; k < m.q - 1; ++k) {
        Matrix shifted = r - Matrix::scalar(m.field, r.rows(), zeta(m.field, m.q, k));
        Matrix ker = kernel(shifted.pow(r.rows()));
        if (ker.cols() == 0) continue;
        IntVec c = part.c;
        c.push_back(k);
        next.push_back({part.basis * ker, c});
      }
    }
    cur = std::move(next);
  }
  std::vector<SupportPoint> out;
  for (const auto& part : cur) {
    if (part.basis.cols() == 0) continue;
    SupportPoint sp = make_support_point(m.rd, m.W, TorusCharacter(m.q, part.c));
    sp.multiplicity = part.basis.cols();
    out.push_back(sp);
  }
  std::sort(out.begin(), out.end(), [](const SupportPoint& a, const SupportPoint& b) { return a.chi.m < b.chi.m; });
  return out;
}

Matrix exterior_power(FieldPtr field, const IntMat& a, int p) {
  auto subs = subsets_of_size(a.n, p);
  Matrix out(field, static_cast<int>(subs.size()), static_cast<int>(subs.size()));
  for (size_t r = 0; r < subs.size(); ++r)
    for (size_t c = 0; c < subs.size(); ++c) {
      int64_t d = int_det(a, bits_of(subs[r]), bits_of(subs[c]));
      if (d != 0) out(static_cast<int>(r), static_cast<int>(c)) = Cyclotomic(field, Rational(d));
    }
  return out;
}

std::vector<int> KoszulComplex::dims() const {
  std::vector<int> out;
  for (const auto& h : H) out.push_back(h.dim());
  return out;
}

Matrix KoszulComplex::lift(int p, const Matrix& op, const IntMat& a) const { return op.kron(exterior_power(field, a, p)); }

Matrix KoszulComplex::lift_plain(int p, const Matrix& op) const {
  return op.kron(Matrix::identity(field, static_cast<int>(subsets[p].size())));
}

KoszulComplex koszul_complex(FieldPtr field, int dim, const std::vector<Matrix>& N) {
  KoszulComplex k;
  k.n = static_cast<int>(N.size());
  k.dim = dim;
  k.field = field;
  for (int p = 0; p <= k.n; ++p) k.subsets.push_back(subsets_of_size(k.n, p));
  auto size = [&](int p) { return dim * static_cast<int>(k.subsets[p].size()); };
  k.d.push_back(Matrix(field, 0, size(0)));
  for (int p = 1; p <= k.n; ++p) {
    Matrix d(field, size(p - 1), size(p));
    const auto& lower = k.subsets[p - 1];
    const int cl = static_cast<int>(lower.size());
    const int cp = static_cast<int>(k.subsets[p].size());
    for (int s = 0; s < cp; ++s) {
      auto elems = bits_of(k.subsets[p][s]);
      for (size_t j = 0; j < elems.size(); ++j) {
        int i = elems[j];
        unsigned rest = k.subsets[p][s] & ~(1u << i);
        int t = static_cast<int>(std::find(lower.begin(), lower.end(), rest) - lower.begin());
        Cyclotomic sign(field, Rational(j % 2 ? -1 : 1));
        for (int a2 = 0; a2 < dim; ++a2)
          for (int a = 0; a < dim; ++a) {
            if (!N[i](a2, a).is_zero()) d(a2 * cl + t, a * cp + s) += sign * N[i](a2, a);
          }
      }
    }
    k.d.push_back(std::move(d));
  }
  for (int p = 0; p <= k.n; ++p) {
    Matrix ker = kernel(k.d[p]);
    Matrix img = p < k.n ? k.d[p + 1] : Matrix(field, size(p), 0);
    k.H.push_back(subquotient(ker, img, field, size(p)));
  }
  return k;
}

Matrix KoszulFibers::local_omega(const MellinModule& m, int w) const { return restrict_to(m.omega_eff(w), basis); }

Matrix KoszulFibers::action(const MellinModule& m, int p, int w) const {
  return complex.H[p].induce(complex.lift(p, local_omega(m, w), m.W[w].cochar));
}

KoszulFibers koszul_fibers(const MellinModule& m, const TorusCharacter& point) {
  KoszulFibers kf;
  kf.point = make_support_point(m.rd, m.W, point);
  kf.basis = generalized_eigenspace(m, point);
  const int d = kf.basis.cols();
  kf.point.multiplicity = d;
  for (int i = 0; i < m.rd.rank; ++i) {
    if (d == 0) {
      kf.N.push_back(Matrix(m.field, 0, 0));
      continue;
    }
    Matrix r = restrict_to(m.X[i], kf.basis) * zeta(m.field, m.q, -point.m[i]);
    kf.N.push_back(unipotent_log(r));
  }
  kf.complex = koszul_complex(m.field, d, kf.N);
  kf.dims = kf.complex.dims();
  return kf;
}

std::string to_string(CentralityMode m) { return m == CentralityMode::Central ? "central" : "strongly-central"; }

CentralityReport check_centrality(const MellinModule& m, CentralityMode mode) {
  CentralityReport rep;
  rep.mode = mode;
  for (const auto& sp : support(m)) {
    ++rep.points;
    KoszulFibers kf = koszul_fibers(m, sp.chi);
    const auto& group = mode == CentralityMode::Central ? kf.point.stab_affine : kf.point.stab_extended;
    for (int w : group) {
      if (w == 0) continue;
      for (int p = 0; p <= m.rd.rank; ++p) {
        if (kf.dims[p] == 0) continue;
        Matrix act = kf.complex.lift(p, kf.local_omega(m, w), m.W[w].cochar);
        if (kf.complex.H[p].acts_trivially(act)) continue;
        if (p <= 1) {
          rep.violations.push_back({sp.chi, p, w});
        } else {
          ++rep.higher_degree_violations;
        }
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

DescentReport check_descent(const MellinModule& m) {
  DescentReport rep;
  std::mt19937_64 rng(0x5eed);
  for (const auto& sp : support(m)) {
    KoszulFibers kf = koszul_fibers(m, sp.chi);
    DescentPoint dp;
    dp.point = sp.chi;
    const int d = kf.basis.cols();
    dp.local_dim = d;
    const auto& gamma = kf.point.stab_affine;
    Matrix eq(m.field, 0, d);
    std::vector<IntMat> mats;
    for (int g : gamma) {
      mats.push_back(m.W[g].cochar);
      eq = vstack(eq, kf.local_omega(m, g) - Matrix::identity(m.field, d));
    }
    Matrix inv = kernel(eq);
    dp.invariant_dim = inv.cols();
    GradedQuotient coinv = coinvariant_algebra(mats, m.rd.rank);
    dp.coinvariant_dim = coinv.dim();
    Matrix gen_map(m.field, d, 0);
    for (const auto& b : coinv.basis()) gen_map = gen_map.hstack(monomial_matrix(b, kf.N, m.field, d) * inv);
    int r = rank(gen_map);
    dp.surjective = r == d;
    dp.injective = r == gen_map.cols();
    dp.invariants_annihilate = true;
    for (const auto& g : coinv.generators()) {
      if (!eval_poly(g, kf.N, m.field, d).is_zero()) dp.invariants_annihilate = false;
    }
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int attempt = 0; attempt < d + 8 && !dp.cyclic; ++attempt) {
      Matrix v(m.field, d, 1);
      if (attempt < d) {
        v(attempt, 0) = one(m.field);
      } else {
        for (int i = 0; i < d; ++i) v(i, 0) = Cyclotomic(m.field, Rational(coef(rng)));
      }
      Matrix span(m.field, d, 0);
      for (const auto& b : coinv.basis()) span = span.hstack(monomial_matrix(b, kf.N, m.field, d) * v);
      dp.cyclic = rank(span) == d;
    }
    if (!dp.pass()) rep.pass = false;
    rep.points.push_back(dp);
  }
  return rep;
}

MellinModule induce_module(const RootDatum& rd, int q, const std::vector<int>& H, const std::vector<Matrix>& local_X,
                           const std::vector<Matrix>& local_omega, bool sign_twisted) {
  MellinModule m;
  m.rd = rd;
  m.W = weyl_elements(rd);
  m.q = q;
  m.field = mellin_field(q);
  m.sign_twisted = sign_twisted;
  const int n = rd.rank;
  const int d = local_X.empty() ? 0 : local_X[0].rows();
  std::vector<Matrix> local_inv;
  for (const auto& x : local_X) {
    auto inv = inverse(x);
    if (!inv) throw StructuralError("local lattice generator is not invertible");
    local_inv.push_back(*inv);
  }
  const int nw = static_cast<int>(m.W.size());
  std::vector<int> reps;
  std::vector<std::pair<int, int>> coset_of(nw, {-1, -1});
  for (int w = 0; w < nw; ++w) {
    if (coset_of[w].first >= 0) continue;
    int j = static_cast<int>(reps.size());
    reps.push_back(w);
    for (size_t h = 0; h < H.size(); ++h) coset_of[weyl_multiply(m.W, w, H[h])] = {j, static_cast<int>(h)};
  }
  const int k = static_cast<int>(reps.size());
  m.dim = k * d;
  for (int i = 0; i < n; ++i) {
    Matrix x(m.field, m.dim, m.dim);
    for (int j = 0; j < k; ++j) {
      IntVec e(n, 0);
      e[i] = 1;
      IntVec mu = m.W[weyl_inverse(m.W, reps[j])].act_cochar(e);
      Matrix loc = Matrix::identity(m.field, d);
      for (int l = 0; l < n; ++l) {
        const Matrix& g = mu[l] >= 0 ? local_X[l] : local_inv[l];
        loc = loc * g.pow(static_cast<int>(mu[l] >= 0 ? mu[l] : -mu[l]));
      }
      set_block(x, j * d, j * d, loc);
    }
    m.X.push_back(std::move(x));
  }
  for (int g = 0; g < nw; ++g) {
    Matrix om(m.field, m.dim, m.dim);
    for (int j = 0; j < k; ++j) {
      auto [j2, h] = coset_of[weyl_multiply(m.W, g, reps[j])];
      set_block(om, j2 * d, j * d, local_omega[h]);
    }
    m.omega.push_back(std::move(om));
  }
  m.finalize();
  return m;
}

MellinModule quotient_module(const RootDatum& rd, int q, const TorusCharacter& c, const std::vector<int>& H,
                             const GradedQuotient& a, bool sign_character, bool sign_twisted) {
  auto field = mellin_field(q);
  auto W = weyl_elements(rd);
  std::vector<Matrix> local_X;
  for (int i = 0; i < rd.rank; ++i) {
    Matrix n = to_matrix(field, a.multiplication(i));
    local_X.push_back(nilpotent_exp(n) * zeta(field, q, c.m[i]));
  }
  std::vector<Matrix> local_omega;
  for (int h : H) {
    Matrix s = to_matrix(field, a.substitution(W[h].cochar));
    if (sign_character) s = s * Cyclotomic(field, Rational(W[h].sign));
    local_omega.push_back(std::move(s));
  }
  return induce_module(rd, q, H, local_X, local_omega, sign_twisted);
}

MellinModule build_E_theta(const RootDatum& rd, const TorusCharacter& chi) {
  auto W = weyl_elements(rd);
  auto st = stabilizers(rd, W, chi);
  std::vector<IntMat> gamma;
  for (int g : st.reflection) gamma.push_back(W[g].cochar);
  GradedQuotient a = coinvariant_algebra(gamma, rd.rank);
  return quotient_module(rd, chi.q, chi.inverse(), st.full, a, false, true);
}

MellinModule tensor_product(const MellinModule& a, const MellinModule& b) {
  if (a.q != b.q || a.rd.preset != b.rd.preset) throw std::invalid_argument("bkk: tensor of modules over different tori");
  MellinModule m;
  m.rd = a.rd;
  m.W = a.W;
  m.q = a.q;
  m.field = a.field;
  m.dim = a.dim * b.dim;
  for (int i = 0; i < a.rd.rank; ++i) m.X.push_back(a.X[i].kron(b.X[i]));
  for (size_t w = 0; w < a.W.size(); ++w) {
    m.omega.push_back(a.omega_untwisted(static_cast<int>(w)).kron(b.omega_untwisted(static_cast<int>(w))));
  }
  m.sign_twisted = false;
  m.finalize();
  return m;
}

MellinModule direct_sum(const MellinModule& a, const MellinModule& b) {
  if (a.q != b.q || a.rd.preset != b.rd.preset) throw std::invalid_argument("bkk: sum of modules over different tori");
  MellinModule m = a;
  m.dim = a.dim + b.dim;
  for (int i = 0; i < a.rd.rank; ++i) m.X[i] = a.X[i].direct_sum(b.X[i]);
  for (size_t w = 0; w < a.W.size(); ++w) {
    const Matrix bw = a.sign_twisted == b.sign_twisted ? b.omega[w] : (a.sign_twisted ? b.omega_eff(static_cast<int>(w)) : b.omega_untwisted(static_cast<int>(w)));
    m.omega[w] = a.omega[w].direct_sum(bw);
  }
  m.finalize();
  return m;
}

MellinModule change_basis(const MellinModule& m, const Matrix& p) {
  auto pinv = inverse(p);
  if (!pinv) throw std::invalid_argument("bkk: change of basis must be invertible");
  MellinModule r = m;
  for (auto& x : r.X) x = *pinv * x * p;
  for (auto& w : r.omega) w = *pinv * w * p;
  r.finalize();
  return r;
}

IntertwinerSearch find_intertwiner(const std::vector<Matrix>& src_ops, const std::vector<Matrix>& tgt_ops, uint64_t seed) {
  IntertwinerSearch out;
  if (src_ops.size() != tgt_ops.size()) throw std::invalid_argument("bkk: operator lists differ in length");
  if (src_ops.empty()) throw std::invalid_argument("bkk: intertwiner search needs operators");
  FieldPtr field = src_ops[0].field();
  const int s = src_ops[0].rows();
  const int t = tgt_ops[0].rows();
  if (s == 0 && t == 0) {
    out.iso = Matrix(field, 0, 0);
    return out;
  }
  const int unknowns = s * t;
  Matrix eq(field, static_cast<int>(src_ops.size()) * unknowns, unknowns);
  for (size_t k = 0; k < src_ops.size(); ++k) {
    const Matrix& a = src_ops[k];
    const Matrix& b = tgt_ops[k];
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < s; ++j) {
        int row = static_cast<int>(k) * unknowns + i + t * j;
        // (T A - B T)(i, j)
        for (int l = 0; l < s; ++l) {
          if (!a(l, j).is_zero()) eq(row, i + t * l) += a(l, j);
        }
        for (int l = 0; l < t; ++l) {
          if (!b(i, l).is_zero()) eq(row, l + t * j) -= b(i, l);
        }
      }
  }
  Matrix ker = kernel(eq);
  out.hom_dim = ker.cols();
  if (s != t || ker.cols() == 0) return out;
  auto as_matrix = [&](const Matrix& vec) {
    Matrix m(field, t, s);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < s; ++j) m(i, j) = vec(i + t * j, 0);
    return m;
  };
  std::vector<Matrix> basis;
  for (int c = 0; c < ker.cols(); ++c) basis.push_back(as_matrix(ker.column(c)));
  for (const auto& b : basis) {
    if (inverse(b)) {
      out.iso = b;
      return out;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix combo(field, t, s);
    for (const auto& b : basis) combo = combo + b * Cyclotomic(field, Rational(coef(rng)));
    if (inverse(combo)) {
      out.iso = combo;
      return out;
    }
  }
  return out;
}

IntertwinerSearch module_isomorphism(const MellinModule& a, const MellinModule& b, bool use_twisted) {
  std::vector<Matrix> src, tgt;
  for (int i = 0; i < a.rd.rank; ++i) {
    src.push_back(a.X[i]);
    tgt.push_back(b.X[i]);
  }
  for (int w : simple_reflection_indices(a.W)) {
    src.push_back(use_twisted ? a.omega_eff(w) : a.omega_untwisted(w));
    tgt.push_back(use_twisted ? b.omega_eff(w) : b.omega_untwisted(w));
  }
  return find_intertwiner(src, tgt);
}

CollapseReport tensor_and_collapse(const MellinModule& f, const TorusCharacter& chi) {
  CollapseReport rep;
  rep.chi = chi;
  if (chi.q != f.q) throw std::invalid_argument("bkk: character and module live at different q");
  auto strong = check_centrality(f, CentralityMode::StronglyCentral);
  if (!strong.pass) {
    rep.precondition_message = "module is not strongly central (" + std::to_string(strong.violations.size()) + " violations)";
    return rep;
  }
  rep.precondition_ok = true;
  const int n = f.rd.rank;
  const FieldPtr field = f.field;
  MellinModule s = build_E_theta(f.rd, chi);
  KoszulFibers v = koszul_fibers(f, chi.inverse());
  rep.v_dims = v.dims;

  Matrix u(field, f.dim * s.dim, 0);
  for (const auto& c : orbit(f.W, chi.inverse())) {
    Matrix bf = generalized_eigenspace(f, c);
    Matrix bs = generalized_eigenspace(s, c);
    if (bf.cols() && bs.cols()) u = u.hstack(bf.kron(bs));
  }
  const int du = u.cols();
  std::vector<Matrix> dlog, xsrc;
  const Matrix is = Matrix::identity(field, s.dim);
  for (int i = 0; i < n; ++i) {
    if (du == 0) {
      dlog.push_back(Matrix(field, 0, 0));
      xsrc.push_back(Matrix(field, 0, 0));
      continue;
    }
    dlog.push_back(unipotent_log(restrict_to(f.X[i].kron(s.X_inv[i]), u)));
    xsrc.push_back(restrict_to(f.X[i].kron(is), u));
  }
  std::vector<Matrix> wsrc;
  for (size_t w = 0; w < f.W.size(); ++w) {
    wsrc.push_back(du ? restrict_to(f.omega_untwisted(static_cast<int>(w)).kron(s.omega[w]), u) : Matrix(field, 0, 0));
  }
  KoszulComplex kc = koszul_complex(field, du, dlog);
  const auto simple = simple_reflection_indices(f.W);

  rep.pass = true;
  for (int p = 0; p <= n; ++p) {
    CollapseDegree cd;
    cd.p = p;
    const auto& h = kc.H[p];
    cd.source_dim = h.dim();
    const int vp = v.dims[p];
    cd.target_dim = vp * s.dim;
    const Matrix iv = Matrix::identity(field, vp);
    std::vector<Matrix> src_x, tgt_x, src_w, tgt_w;
    for (int i = 0; i < n; ++i) {
      src_x.push_back(h.induce(kc.lift_plain(p, xsrc[i])));
      tgt_x.push_back(iv.kron(s.X[i]));
    }
    for (size_t w = 0; w < f.W.size(); ++w) {
      src_w.push_back(h.induce(kc.lift(p, wsrc[w], f.W[w].cochar)));
      tgt_w.push_back(iv.kron(s.omega_untwisted(static_cast<int>(w))));
    }
    if (cd.source_dim == cd.target_dim) {
      std::vector<Matrix> src_ops = src_x, tgt_ops = tgt_x;
      for (int w : simple) {
        src_ops.push_back(src_w[w]);
        tgt_ops.push_back(tgt_w[w]);
      }
      if (src_ops.empty()) {
        src_ops.push_back(Matrix::identity(field, cd.source_dim));
        tgt_ops.push_back(Matrix::identity(field, cd.target_dim));
      }
      if (!src_x.empty()) cd.lattice_hom_dim = find_intertwiner(src_x, tgt_x).hom_dim;
      auto search = find_intertwiner(src_ops, tgt_ops, 0x1234 + static_cast<uint64_t>(p));
      cd.hom_dim = search.hom_dim;
      cd.iso_found = search.iso.has_value();
      if (cd.iso_found) {
        const Matrix& t = *search.iso;
        cd.square_ok = true;
        for (size_t w = 0; w < f.W.size(); ++w) {
          if (t * src_w[w] != tgt_w[w] * t) cd.square_ok = false;
        }
        for (int i = 0; i < n; ++i) {
          if (t * src_x[i] != tgt_x[i] * t) cd.square_ok = false;
        }
      }
    }
    if (!(cd.iso_found && cd.square_ok)) rep.pass = false;
    rep.degrees.push_back(cd);
  }
  return rep;
}

}  // namespace bkk
