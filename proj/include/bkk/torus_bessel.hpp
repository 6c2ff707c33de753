#pragma once

#include <cstdint>
#include <vector>

#include "bkk/errors.hpp"
#include "bkk/field.hpp"
#include "bkk/rootdata.hpp"

namespace bkk {

/// The multiset of cocharacters lambda_1..lambda_r defining pr: (F_q^x)^r -> T(F_q).
struct WeightSet {
  RootDatum rd;
  std::vector<IntVec> weights;

  WeightSet(RootDatum rd_, std::vector<IntVec> w);
  int r() const { return static_cast<int>(weights.size()); }
  int n() const { return rd.rank; }
};

/// Points of T(F_q) are exponent vectors e (t_j = g^{e_j}), flattened with the first coordinate
/// most significant.
struct TorusGrid {
  int q = 0;
  int n = 0;
  int64_t size() const;
  IntVec point(int64_t index) const;
  int64_t index(const IntVec& e) const;
};

/// Trace function of pr_! tr^* L_psi [r], stored as the count of preimages x with
/// psi-exponent Tr(x_1 + ... + x_r) = j for every point t and j in [0, p).
struct TorusBessel {
  TorusGrid grid;
  int root_index = 1;
  int r = 0;
  std::vector<int64_t> counts;  // grid.size() * q entries

  int64_t count(int64_t point, int j) const { return counts[static_cast<size_t>(point) * grid.q + j]; }
  int sign() const { return r % 2 ? -1 : 1; }
};

constexpr int64_t kTorusBudget = 10'000'000;

TorusBessel bessel_on_torus(const WeightSet& w, int root_index, int q, int64_t budget = kTorusBudget);

template <class S>
std::vector<typename S::value_type> bessel_values(const S& s, const TorusBessel& tb) {
  const int q = tb.grid.q;
  std::vector<typename S::value_type> out;
  out.reserve(tb.grid.size());
  for (int64_t t = 0; t < tb.grid.size(); ++t) {
    auto acc = s.accumulator();
    for (int j = 0; j < q; ++j) {
      if (int64_t c = tb.count(t, j)) acc.add_root(q, static_cast<int64_t>(tb.root_index) * j, c * tb.sign());
    }
    out.push_back(acc.value());
  }
  return out;
}

inline int64_t character_exponent(const TorusCharacter& chi, const IntVec& e) {
  int64_t k = 0;
  for (size_t i = 0; i < e.size(); ++i) k += chi.m[i] * e[i];
  return mod_floor(k, chi.q - 1);
}

/// sum over t of f(t) chi(t).
template <class S>
typename S::value_type finite_mellin(const S& s, const TorusGrid& grid, const std::vector<typename S::value_type>& f,
                                     const TorusCharacter& chi) {
  auto acc = s.accumulator();
  for (int64_t t = 0; t < grid.size(); ++t) acc.add(f[t], grid.q - 1, character_exponent(chi, grid.point(t)));
  return acc.value();
}

/// Mellin transform of the Bessel function read directly from its count table.
template <class S>
typename S::value_type bessel_mellin(const S& s, const TorusBessel& tb, const TorusCharacter& chi) {
  const int64_t q = tb.grid.q;
  const int64_t order = q * (q - 1);
  auto acc = s.accumulator();
  for (int64_t t = 0; t < tb.grid.size(); ++t) {
    const int64_t ce = character_exponent(chi, tb.grid.point(t));
    for (int j = 0; j < q; ++j) {
      if (int64_t c = tb.count(t, j)) acc.add_root(order, (tb.root_index * j % q) * (q - 1) + ce * q, c * tb.sign());
    }
  }
  return acc.value();
}

/// (f*g)(t) = sum over s of f(s) g(s^{-1} t).
template <class S>
std::vector<typename S::value_type> torus_convolve(const S& s, const TorusGrid& grid, const std::vector<typename S::value_type>& f,
                                                   const std::vector<typename S::value_type>& g) {
  std::vector<typename S::value_type> out(grid.size(), s.zero());
  for (int64_t a = 0; a < grid.size(); ++a) {
    IntVec ea = grid.point(a);
    for (int64_t t = 0; t < grid.size(); ++t) {
      IntVec et = grid.point(t);
      for (int i = 0; i < grid.n; ++i) et[i] = mod_floor(et[i] - ea[i], grid.q - 1);
      out[t] += f[a] * g[grid.index(et)];
    }
  }
  return out;
}

/// Recovers f from its Mellin values (indexed like all_characters) by the inverse transform.
template <class S>
std::vector<typename S::value_type> inverse_mellin(const S& s, const TorusGrid& grid, const std::vector<typename S::value_type>& mellin) {
  auto chars = all_characters(grid.n, grid.q);
  std::vector<typename S::value_type> out;
  auto scale = s.from_rational(Rational(1, static_cast<int64_t>(grid.size())));
  for (int64_t t = 0; t < grid.size(); ++t) {
    auto acc = s.accumulator();
    IntVec e = grid.point(t);
    for (size_t c = 0; c < chars.size(); ++c) acc.add(mellin[c], grid.q - 1, -character_exponent(chars[c], e));
    out.push_back(acc.value() * scale);
  }
  return out;
}

/// Gauss sums g(eta^e, psi) over F_{q^k} for every exponent e, computed once.
template <class S>
struct GaussTable {
  std::vector<typename S::value_type> values;

  GaussTable(const S& s, int q, int k, int root_index) {
    auto f = FiniteField::get(q, k);
    AdditiveCharacter psi(f, root_index);
    for (int e = 0; e < f->unit_order(); ++e) values.push_back(gauss_sum(s, MultiplicativeCharacter(f, e), psi));
  }
  const typename S::value_type& operator()(int64_t e) const { return values[mod_floor(e, static_cast<int64_t>(values.size()))]; }
};

struct GaussProductReport {
  int64_t characters = 0;
  double max_discrepancy = 0.0;
  bool exact_equal = true;  // meaningful in exact mode only
};

/// Compares the Mellin transform of the Bessel function with (-1)^r prod_i g(chi o lambda_i) for every chi.
template <class S>
GaussProductReport gauss_product_check(const S& s, const WeightSet& w, int root_index, int q) {
  TorusBessel tb = bessel_on_torus(w, root_index, q);
  GaussTable<S> gauss(s, q, 1, root_index);
  GaussProductReport rep;
  for (const auto& chi : all_characters(w.n(), q)) {
    auto rhs = s.from_int(tb.sign());
    for (const auto& lam : w.weights) rhs = rhs * gauss(character_exponent(chi, lam));
    auto lhs = bessel_mellin(s, tb, chi);
    ++rep.characters;
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(as_complex(lhs) - as_complex(rhs)));
    if constexpr (S::mode == ScalarMode::Exact) rep.exact_equal = rep.exact_equal && lhs == rhs;
  }
  return rep;
}

}  // namespace bkk
