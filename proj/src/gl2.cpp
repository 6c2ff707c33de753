#include "bkk/gl2.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bkk {

Mat2 mat_mul(const FiniteField& f, const Mat2& x, const Mat2& y) {
  return {f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)), f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
          f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)), f.add(f.mul(x.c, y.b), f.mul(x.d, y.d))};
}

FiniteField::Elem mat_det(const FiniteField& f, const Mat2& x) { return f.sub(f.mul(x.a, x.d), f.mul(x.b, x.c)); }

FiniteField::Elem mat_trace(const FiniteField& f, const Mat2& x) { return f.add(x.a, x.d); }

Mat2 mat_inv(const FiniteField& f, const Mat2& x) {
  auto di = f.inv(mat_det(f, x));
  return {f.mul(x.d, di), f.mul(f.neg(x.b), di), f.mul(f.neg(x.c), di), f.mul(x.a, di)};
}

std::vector<Mat2> gl2_elements(const FiniteField& f) {
  std::vector<Mat2> out;
  const int n = f.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Mat2 m{a, b, c, d};
          if (mat_det(f, m) != 0) out.push_back(m);
        }
  return out;
}

std::string family_name(ClassFamily f) {
  switch (f) {
    case ClassFamily::Central: return "central";
    case ClassFamily::NonSemisimple: return "nonsemisimple";
    case ClassFamily::Split: return "split-regular";
    case ClassFamily::Anisotropic: return "anisotropic";
  }
  return "?";
}

std::string rep_family_name(RepFamily f) {
  switch (f) {
    case RepFamily::OneDim: return "one-dim";
    case RepFamily::SteinbergTwist: return "steinberg-twist";
    case RepFamily::PrincipalSeries: return "principal-series";
    case RepFamily::Cuspidal: return "cuspidal";
  }
  return "?";
}

std::string DlDatum::to_string() const {
  std::ostringstream os;
  if (split) {
    os << "split(" << a << "," << b << ")";
  } else {
    os << "nonsplit(" << k << ")";
  }
  return os.str();
}

std::string Convention::to_string() const {
  return std::to_string(sign) + "," + std::to_string(invert) + "," + std::to_string(qexp);
}

bool Convention::operator<(const Convention& o) const {
  return std::tie(sign, invert, qexp) < std::tie(o.sign, o.invert, o.qexp);
}

int64_t log_q(const Gl2Classes& cl, FiniteField::Elem a) { return cl.fq->log(a); }

int64_t log_q2_of_prime(const Gl2Classes& cl, FiniteField::Elem a) { return cl.fq2->log(cl.fq2->make(a, 0)); }

namespace {

// Canonical representative of the Frobenius orbit {k, kq} of an exponent in F_{q^2}^x.
int64_t canonical_elliptic(int64_t k, int q) {
  const int64_t m = static_cast<int64_t>(q) * q - 1;
  k = mod_floor(k, m);
  return std::min(k, k * q % m);
}

}  // namespace

Gl2Classes gl2_classes(int q) {
  if (q < 3 || q > 13) throw std::invalid_argument("q must be a prime in [3, 13] for GL2 tables");
  Gl2Classes cl;
  cl.q = q;
  cl.fq = FiniteField::get(q, 1);
  cl.fq2 = FiniteField::get(q, 2);
  const auto& f = *cl.fq;
  const int64_t Q = q;
  cl.group_order = (Q * Q - 1) * (Q * Q - Q);
  cl.by_trace_det.assign(static_cast<size_t>(q) * q, -1);
  cl.central_by_log.assign(q - 1, -1);

  for (int i = 0; i < q - 1; ++i) {
    auto a = f.exp(i);
    cl.central_by_log[i] = cl.size();
    cl.classes.push_back({Mat2{a, 0, 0, a}, 1, ClassFamily::Central, i, 0});
  }
  auto register_td = [&](const Mat2& rep) { cl.by_trace_det[mat_trace(f, rep) * q + mat_det(f, rep)] = cl.size(); };
  for (int i = 0; i < q - 1; ++i) {
    auto a = f.exp(i);
    Mat2 rep{a, 1, 0, a};
    register_td(rep);
    cl.classes.push_back({rep, Q * Q - 1, ClassFamily::NonSemisimple, i, 0});
  }
  for (int i = 0; i < q - 1; ++i) {
    for (int j = i + 1; j < q - 1; ++j) {
      Mat2 rep{f.exp(i), 0, 0, f.exp(j)};
      register_td(rep);
      cl.classes.push_back({rep, Q * (Q + 1), ClassFamily::Split, i, j});
    }
  }
  const auto& f2 = *cl.fq2;
  const int64_t m2 = Q * Q - 1;
  for (int64_t k = 1; k < m2; ++k) {
    if (k % (Q + 1) == 0 || canonical_elliptic(k, q) != k) continue;
    auto z = f2.exp(k);
    auto tr = static_cast<FiniteField::Elem>(f2.trace_to_prime(z));
    auto nm = f2.norm_to_prime(z);
    Mat2 rep{0, f.neg(nm), 1, tr};
    register_td(rep);
    cl.classes.push_back({rep, Q * (Q - 1), ClassFamily::Anisotropic, k, 0});
  }
  return cl;
}

int Gl2Classes::class_of(const Mat2& g) const {
  const auto& f = *fq;
  if (g.b == 0 && g.c == 0 && g.a == g.d) return central_by_log[f.log(g.a)];
  int idx = by_trace_det[mat_trace(f, g) * q + mat_det(f, g)];
  if (idx < 0) throw std::logic_error("bkk: element has no conjugacy class");
  return idx;
}

CharacterTable gl2_character_table(const Gl2Classes& cl) {
  const int q = cl.q;
  const int64_t Q = q;
  const int64_t M = Q * Q - 1;
  CharacterTable t;
  t.q = q;
  t.order = M;
  const auto& f = *cl.fq;
  const auto& f2 = *cl.fq2;

  // Exponent (mod M) of alpha(x) for x in F_q^x, alpha = eta^al.
  auto alpha_q = [&](int64_t al, int64_t log_x) { return mod_floor(al * log_x, Q - 1) * (Q + 1); };
  auto norm_log = [&](int64_t k) { return f.log(f2.norm_to_prime(f2.exp(k))); };

  auto fill = [&](CharacterRow& row, auto value_of) {
    for (const auto& c : cl.classes) {
      RootSum r;
      value_of(c, r);
      row.values.push_back(r);
    }
    t.rows.push_back(row);
  };

  for (int64_t al = 0; al < Q - 1; ++al) {
    CharacterRow row{"U(" + std::to_string(al) + ")", {0, al, 0}, 1, RepFamily::OneDim, DlDatum{true, al, al, 0}, {}};
    fill(row, [&](const ConjugacyClass& c, RootSum& r) {
      switch (c.family) {
        case ClassFamily::Central: r.add(1, alpha_q(al, 2 * c.i)); break;
        case ClassFamily::NonSemisimple: r.add(1, alpha_q(al, 2 * c.i)); break;
        case ClassFamily::Split: r.add(1, alpha_q(al, c.i + c.j)); break;
        case ClassFamily::Anisotropic: r.add(1, alpha_q(al, norm_log(c.i))); break;
      }
    });
  }
  for (int64_t al = 0; al < Q - 1; ++al) {
    CharacterRow row{"V(" + std::to_string(al) + ")", {1, al, 0}, Q, RepFamily::SteinbergTwist, DlDatum{true, al, al, 0}, {}};
    fill(row, [&](const ConjugacyClass& c, RootSum& r) {
      switch (c.family) {
        case ClassFamily::Central: r.add(Q, alpha_q(al, 2 * c.i)); break;
        case ClassFamily::NonSemisimple: break;
        case ClassFamily::Split: r.add(1, alpha_q(al, c.i + c.j)); break;
        case ClassFamily::Anisotropic: r.add(-1, alpha_q(al, norm_log(c.i))); break;
      }
    });
  }
  for (int64_t al = 0; al < Q - 1; ++al) {
    for (int64_t be = al + 1; be < Q - 1; ++be) {
      CharacterRow row{"W(" + std::to_string(al) + "," + std::to_string(be) + ")", {2, al, be}, Q + 1, RepFamily::PrincipalSeries,
                       DlDatum{true, al, be, 0}, {}};
      fill(row, [&](const ConjugacyClass& c, RootSum& r) {
        switch (c.family) {
          case ClassFamily::Central: r.add(Q + 1, alpha_q(al + be, c.i)); break;
          case ClassFamily::NonSemisimple: r.add(1, alpha_q(al + be, c.i)); break;
          case ClassFamily::Split:
            r.add(1, mod_floor(alpha_q(al, c.i) + alpha_q(be, c.j), M));
            r.add(1, mod_floor(alpha_q(al, c.j) + alpha_q(be, c.i), M));
            break;
          case ClassFamily::Anisotropic: break;
        }
      });
    }
  }
  for (int64_t k = 1; k < M; ++k) {
    if (k % (Q + 1) == 0 || canonical_elliptic(k, q) != k) continue;
    CharacterRow row{"X(" + std::to_string(k) + ")", {3, k, 0}, Q - 1, RepFamily::Cuspidal, DlDatum{false, 0, 0, k}, {}};
    fill(row, [&](const ConjugacyClass& c, RootSum& r) {
      switch (c.family) {
        case ClassFamily::Central: r.add(Q - 1, mod_floor(k * log_q2_of_prime(cl, c.rep.a), M)); break;
        case ClassFamily::NonSemisimple: r.add(-1, mod_floor(k * log_q2_of_prime(cl, c.rep.a), M)); break;
        case ClassFamily::Split: break;
        case ClassFamily::Anisotropic:
          r.add(-1, mod_floor(k * c.i, M));
          r.add(-1, mod_floor(k * c.i * Q, M));
          break;
      }
    });
  }
  return t;
}

std::vector<size_t> canonical_row_order(const CharacterTable& table) {
  std::vector<size_t> idx(table.rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return table.rows[x].key < table.rows[y].key; });
  return idx;
}

StructureConstants structure_constants(const Gl2Classes& cl) {
  const auto& f = *cl.fq;
  const int C = cl.size();
  StructureConstants sc;
  sc.classes = C;
  sc.a.assign(static_cast<size_t>(C) * C * C, 0);
  const auto elements = gl2_elements(f);
  std::vector<int> cls;
  cls.reserve(elements.size());
  for (const auto& h : elements) cls.push_back(cl.class_of(h));
  for (int k = 0; k < C; ++k) {
    const Mat2& g = cl.classes[k].rep;
    for (size_t e = 0; e < elements.size(); ++e) {
      int j = cl.class_of(mat_mul(f, mat_inv(f, elements[e]), g));
      sc.a[(static_cast<size_t>(cls[e]) * C + j) * C + k] += 1;
    }
  }
  return sc;
}

}  // namespace bkk
