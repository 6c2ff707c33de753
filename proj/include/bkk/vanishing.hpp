#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "bkk/errors.hpp"
#include "bkk/gl2.hpp"

namespace bkk {

/// Representative of a coset gU in GL_2/U with U upper unitriangular. The first column (a, c) is
/// arbitrary nonzero; the second is (y, 0) when c != 0 and (0, y) when c = 0 (then gU lies in B/U).
struct CosetRep {
  Mat2 g;
  bool in_borel = false;
};

std::vector<CosetRep> coset_representatives(const FiniteField& f);
/// Index into coset_representatives(f) of the coset containing g.
size_t coset_index(const FiniteField& f, const Mat2& g);

struct VanishingReport {
  int q = 0;           // characteristic
  int m = 1;           // extension degree
  int64_t cosets = 0;
  std::vector<std::complex<double>> sums;  // per coset, in representative order
  double max_off_borel = 0.0;
  double max_on_borel = 0.0;
  double max_phi = 0.0;
  double tolerance = 0.0;
  bool exact_zero = true;  // exact mode: every off-Borel sum is exactly 0
  bool pass = false;       // max_off_borel <= tolerance (and exact_zero in exact mode)
  bool nontrivial = false; // some on-Borel sum exceeds 1e-3 * max_phi
};

constexpr int64_t kGroupBudget = 1'000'000;
constexpr double kVanishingRelTol = 1e-8;
constexpr double kOnBorelControl = 1e-3;

/// s(gU) = sum over u in U of phi(g u), for every coset. phi maps a matrix to a scalar.
template <class S, class Phi>
VanishingReport coset_sums(const S& s, const FiniteField& f, Phi phi, double max_phi, double rel_tol = kVanishingRelTol) {
  const int64_t n = f.size();
  const int64_t order = (n * n - 1) * (n * n - n);
  if (order > kGroupBudget) throw BudgetExceeded("group of order " + std::to_string(order) + " exceeds enumeration budget");
  VanishingReport rep;
  rep.q = f.characteristic();
  rep.m = f.degree();
  rep.max_phi = max_phi;
  rep.tolerance = rel_tol * max_phi;
  for (const auto& c : coset_representatives(f)) {
    auto acc = s.accumulator();
    for (FiniteField::Elem x = 0; x < f.size(); ++x) {
      Mat2 gu = mat_mul(f, c.g, Mat2{1, x, 0, 1});
      acc.add(phi(gu));
    }
    auto v = acc.value();
    auto z = as_complex(v);
    rep.sums.push_back(z);
    if (c.in_borel) {
      rep.max_on_borel = std::max(rep.max_on_borel, std::abs(z));
    } else {
      rep.max_off_borel = std::max(rep.max_off_borel, std::abs(z));
      if constexpr (S::mode == ScalarMode::Exact) rep.exact_zero = rep.exact_zero && v.is_zero();
    }
  }
  rep.cosets = static_cast<int64_t>(rep.sums.size());
  rep.pass = rep.max_off_borel <= rep.tolerance && rep.exact_zero;
  rep.nontrivial = rep.max_on_borel > kOnBorelControl * max_phi;
  return rep;
}

/// Cell sums of a class function on GL_2(F_q).
template <class S>
VanishingReport class_function_coset_sums(const S& s, const Gl2Classes& cl, const ClassFunction<S>& phi) {
  double max_phi = 0.0;
  for (const auto& v : phi) max_phi = std::max(max_phi, std::abs(as_complex(v)));
  return coset_sums(s, *cl.fq, [&](const Mat2& g) { return phi[cl.class_of(g)]; }, max_phi);
}

/// Cell sums over GL_2(F_{q^m}) of g -> psi(Tr(tr g)), the std kernel recomputed over the extension.
template <class S>
VanishingReport extension_scalars_sums(const S& s, int q, int m, int root_index) {
  if (m != 1 && m != 2) throw std::invalid_argument("extension degree must be 1 or 2");
  auto f = FiniteField::get(q, m);
  AdditiveCharacter psi(f, root_index);
  return coset_sums(s, *f, [&](const Mat2& g) { return psi_eval(s, psi, mat_trace(*f, g)); }, 1.0);
}

}  // namespace bkk
