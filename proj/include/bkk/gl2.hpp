#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bkk/errors.hpp"
#include "bkk/field.hpp"
#include "bkk/torus_bessel.hpp"

namespace bkk {

/// 2x2 matrix over a finite field, entries as element codes.
struct Mat2 {
  FiniteField::Elem a = 1, b = 0, c = 0, d = 1;
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 mat_mul(const FiniteField& f, const Mat2& x, const Mat2& y);
Mat2 mat_inv(const FiniteField& f, const Mat2& x);
FiniteField::Elem mat_det(const FiniteField& f, const Mat2& x);
FiniteField::Elem mat_trace(const FiniteField& f, const Mat2& x);
/// Every element of GL_2 over f, in lexicographic code order (a, b, c, d).
std::vector<Mat2> gl2_elements(const FiniteField& f);

enum class ClassFamily { Central, NonSemisimple, Split, Anisotropic };
std::string family_name(ClassFamily f);

struct ConjugacyClass {
  Mat2 rep;
  int64_t size = 0;
  ClassFamily family = ClassFamily::Central;
  // Central / NonSemisimple: i = log a. Split: i < j logs of the eigenvalues.
  // Anisotropic: i = canonical exponent of an eigenvalue in F_{q^2}^x.
  int64_t i = 0, j = 0;
};

/// Conjugacy classes of GL_2(F_q), q prime in [3, 13].
struct Gl2Classes {
  int q = 0;
  int64_t group_order = 0;
  std::shared_ptr<const FiniteField> fq, fq2;
  std::vector<ConjugacyClass> classes;

  int size() const { return static_cast<int>(classes.size()); }
  int class_of(const Mat2& g) const;

  // Lookup for non-scalar elements by (trace, det).
  std::vector<int> by_trace_det;
  std::vector<int> central_by_log;
};

Gl2Classes gl2_classes(int q);

/// Log of an element of F_q^x relative to the generator of F_q.
int64_t log_q(const Gl2Classes& cl, FiniteField::Elem a);
/// Log in F_{q^2}^x of an element of F_q^x, embedded as a constant polynomial.
int64_t log_q2_of_prime(const Gl2Classes& cl, FiniteField::Elem a);

/// Sum of integer multiples of (q^2-1)-th roots of unity.
struct RootSum {
  std::vector<std::pair<int64_t, int64_t>> terms;  // (coefficient, exponent)
  void add(int64_t coef, int64_t k) { terms.emplace_back(coef, k); }
};

enum class RepFamily { OneDim, SteinbergTwist, PrincipalSeries, Cuspidal };
std::string rep_family_name(RepFamily f);

/// Deligne-Lusztig datum: a split pair (a, b) of exponents mod q-1, or a nonsplit exponent k mod q^2-1.
struct DlDatum {
  bool split = true;
  int64_t a = 0, b = 0;
  int64_t k = 0;
  std::string to_string() const;
  bool operator==(const DlDatum& o) const { return split == o.split && a == o.a && b == o.b && k == o.k; }
};

struct CharacterRow {
  std::string label;  // e.g. "U(0)", "W(1,2)", "X(5)"
  std::array<int64_t, 3> key{};  // (family, first parameter, second parameter); canonical order
  int64_t dim = 0;
  RepFamily family = RepFamily::OneDim;
  DlDatum datum;
  std::vector<RootSum> values;  // per class, over zeta_{q^2-1}
};

struct CharacterTable {
  int q = 0;
  int64_t order = 0;  // q^2 - 1, the root order of the entries
  std::vector<CharacterRow> rows;
};

CharacterTable gl2_character_table(const Gl2Classes& cl);

template <class S>
typename S::value_type eval_root_sum(const S& s, const RootSum& r, int64_t order) {
  auto acc = s.accumulator();
  for (auto [c, k] : r.terms) acc.add_root(order, k, c);
  return acc.value();
}

/// Normalization triple: gamma = sign * q^qexp * gamma_0(theta or theta^{-1}).
struct Convention {
  int sign = 1;
  int invert = 1;
  int qexp = 1;
  std::string to_string() const;
  bool operator==(const Convention& o) const { return sign == o.sign && invert == o.invert && qexp == o.qexp; }
  bool operator<(const Convention& o) const;
};

/// Negative-control hook: when set, gamma_table flips the sign of gamma on the last row in
/// canonical order. Used by tests and the calibration self-check only.
struct GammaCorruption {
  bool flip_one_packet = false;
};

/// Row indices of the table sorted by label, so sums run in an order independent of row order.
std::vector<size_t> canonical_row_order(const CharacterTable& table);

/// Gauss sums over F_q and F_{q^2} for one additive character, shared by all gamma evaluations.
template <class S>
struct GammaContext {
  int q;
  int root_index;
  GaussTable<S> gq, gq2;
  int64_t v;  // generator of F_q equals G^{(q+1) v} for the generator G of F_{q^2}

  GammaContext(const S& s, int q_, int root)
      : q(q_), root_index(root), gq(s, q_, 1, root), gq2(s, q_, 2, root) {
    auto f1 = FiniteField::get(q, 1);
    auto f2 = FiniteField::get(q, 2);
    v = f2->log(f1->generator()) / (q + 1);
  }
};

/// gamma_0 before the convention: product over Frobenius orbits of weights of (-Gauss sum).
template <class S>
typename S::value_type gamma0_of_datum(const S& s, const GammaContext<S>& ctx, const DlDatum& datum, const std::vector<IntVec>& weights) {
  auto out = s.one();
  const int64_t q = ctx.q;
  if (datum.split) {
    for (const auto& lam : weights) out = out * -ctx.gq(datum.a * lam[0] + datum.b * lam[1]);
    return out;
  }
  std::vector<bool> used(weights.size(), false);
  for (size_t i = 0; i < weights.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto& lam = weights[i];
    if (lam[0] == lam[1]) {
      out = out * -ctx.gq(datum.k * ctx.v * lam[0]);
      continue;
    }
    size_t partner = weights.size();
    for (size_t j = i + 1; j < weights.size(); ++j) {
      if (!used[j] && weights[j][0] == lam[1] && weights[j][1] == lam[0]) {
        partner = j;
        break;
      }
    }
    if (partner == weights.size()) {
      throw StructuralError("weight (" + std::to_string(lam[0]) + "," + std::to_string(lam[1]) +
                            ") has no swap partner; the nonsplit orbit structure is undefined");
    }
    used[partner] = true;
    out = out * -ctx.gq2(datum.k * (lam[0] + lam[1] * q));
  }
  return out;
}

inline DlDatum invert_datum(const DlDatum& d, int q) {
  DlDatum r = d;
  r.a = mod_floor(-d.a, q - 1);
  r.b = mod_floor(-d.b, q - 1);
  r.k = mod_floor(-d.k, static_cast<int64_t>(q) * q - 1);
  return r;
}

template <class S>
typename S::value_type gamma_of_datum(const S& s, const GammaContext<S>& ctx, const DlDatum& datum, const std::vector<IntVec>& weights,
                                      const Convention& conv) {
  DlDatum d = conv.invert ? invert_datum(datum, ctx.q) : datum;
  auto g = gamma0_of_datum(s, ctx, d, weights);
  Rational scale(conv.sign);
  for (int i = 0; i < std::abs(conv.qexp); ++i) scale = conv.qexp > 0 ? scale * Rational(ctx.q) : scale / Rational(ctx.q);
  return g * s.from_rational(scale);
}

/// gamma per character-table row, in row order.
template <class S>
std::vector<typename S::value_type> gamma_table(const S& s, const CharacterTable& table, const std::vector<IntVec>& weights, int root_index,
                                                const Convention& conv, const GammaCorruption& corrupt = {}) {
  GammaContext<S> ctx(s, table.q, root_index);
  std::vector<typename S::value_type> out;
  for (const auto& row : table.rows) out.push_back(gamma_of_datum(s, ctx, row.datum, weights, conv));
  if (corrupt.flip_one_packet) {
    size_t last = canonical_row_order(table).back();
    out[last] = -out[last];
  }
  return out;
}

template <class S>
using ClassFunction = std::vector<typename S::value_type>;

/// phi_G = |G|^{-1} sum_pi gamma(pi) dim(pi) chi_pi.
template <class S>
ClassFunction<S> kernel_on_group(const S& s, const CharacterTable& table, const Gl2Classes& cl, const std::vector<typename S::value_type>& gamma) {
  ClassFunction<S> out;
  const auto order = canonical_row_order(table);
  const auto inv_g = s.from_rational(Rational(1, cl.group_order));
  for (int c = 0; c < cl.size(); ++c) {
    auto acc = s.accumulator();
    for (size_t r : order) {
      for (auto [coef, k] : table.rows[r].values[c].terms) acc.add(gamma[r], table.order, k, coef * table.rows[r].dim);
    }
    out.push_back(acc.value() * inv_g);
  }
  return out;
}

template <class S>
ClassFunction<S> character_values(const S& s, const CharacterTable& table, size_t row) {
  ClassFunction<S> out;
  for (const auto& v : table.rows[row].values) out.push_back(eval_root_sum(s, v, table.order));
  return out;
}

/// a[(i * C + j) * C + k] = #{h in C_i : h^{-1} g_k in C_j}.
struct StructureConstants {
  int classes = 0;
  std::vector<int64_t> a;
  int64_t operator()(int i, int j, int k) const { return a[(static_cast<size_t>(i) * classes + j) * classes + k]; }
};

StructureConstants structure_constants(const Gl2Classes& cl);

/// (f1 * f2)(g) = sum_h f1(h) f2(h^{-1} g), through the class algebra.
template <class S>
ClassFunction<S> convolve_structure(const S& s, const StructureConstants& sc, const ClassFunction<S>& f1, const ClassFunction<S>& f2) {
  const int C = sc.classes;
  std::vector<typename S::value_type> prod;
  prod.reserve(static_cast<size_t>(C) * C);
  for (int i = 0; i < C; ++i)
    for (int j = 0; j < C; ++j) prod.push_back(f1[i] * f2[j]);
  ClassFunction<S> out;
  for (int k = 0; k < C; ++k) {
    auto acc = s.accumulator();
    for (int i = 0; i < C; ++i)
      for (int j = 0; j < C; ++j) {
        if (int64_t m = sc(i, j, k)) acc.add(prod[static_cast<size_t>(i) * C + j], 1, 0, m);
      }
    out.push_back(acc.value());
  }
  return out;
}

/// The same convolution through the character expansion.
template <class S>
ClassFunction<S> convolve_characters(const S& s, const CharacterTable& table, const Gl2Classes& cl, const ClassFunction<S>& f1,
                                     const ClassFunction<S>& f2) {
  const int C = cl.size();
  std::vector<typename S::value_type> out(C, s.zero());
  for (size_t r : canonical_row_order(table)) {
    const auto& row = table.rows[r];
    auto coeff = [&](const ClassFunction<S>& f) {
      auto acc = s.accumulator();
      for (int c = 0; c < C; ++c) {
        for (auto [coef, k] : row.values[c].terms) acc.add(f[c], table.order, -k, coef * cl.classes[c].size);
      }
      return acc.value();
    };
    auto weight = coeff(f1) * coeff(f2) * s.from_rational(Rational(1, cl.group_order * row.dim));
    for (int c = 0; c < C; ++c) {
      auto acc = s.accumulator();
      acc.add(out[c]);
      for (auto [coef, k] : row.values[c].terms) acc.add(weight, table.order, k, coef);
      out[c] = acc.value();
    }
  }
  return out;
}

/// <f1, f2> = |G|^{-1} sum_g f1(g) conj f2(g).
template <class S>
typename S::value_type class_inner_product(const S& s, const Gl2Classes& cl, const ClassFunction<S>& f1, const ClassFunction<S>& f2) {
  auto acc = s.accumulator();
  for (int c = 0; c < cl.size(); ++c) acc.add(f1[c] * s.conj(f2[c]), 1, 0, cl.classes[c].size);
  return acc.value() * s.from_rational(Rational(1, cl.group_order));
}

}  // namespace bkk
