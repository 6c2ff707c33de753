#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bkk/scalar.hpp"

namespace bkk {

/// F_{p^k} for a prime p <= 97 and k in {1, 2}. For k = 2 the model is F_p[t]/(t^2 - n) with n the
/// smallest quadratic nonresidue. Elements are integer codes a0 + a1*p.
class FiniteField {
 public:
  using Elem = int32_t;

  static std::shared_ptr<const FiniteField> get(int p, int k);
  FiniteField(int p, int k);

  int characteristic() const { return p_; }
  int degree() const { return k_; }
  int size() const { return size_; }
  int unit_order() const { return size_ - 1; }
  /// The nonresidue n of the quadratic model (k = 2), or 0.
  int nonresidue() const { return nonresidue_; }
  Elem generator() const { return generator_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(int64_t a) const { return static_cast<Elem>(mod_floor(a, p_)); }
  Elem make(int a0, int a1) const { return static_cast<Elem>(mod_floor(a0, p_) + mod_floor(a1, p_) * p_); }
  int coord(Elem x, int i) const { return i == 0 ? x % p_ : x / p_; }
  bool in_prime_field(Elem x) const { return x < p_; }

  Elem add(Elem x, Elem y) const;
  Elem sub(Elem x, Elem y) const;
  Elem neg(Elem x) const;
  Elem mul(Elem x, Elem y) const;
  Elem inv(Elem x) const;
  Elem pow(Elem x, int64_t e) const;
  /// Discrete logarithm to the fixed generator; x must be nonzero.
  int log(Elem x) const;
  Elem exp(int64_t e) const { return exp_[mod_floor(e, size_ - 1)]; }
  Elem frobenius(Elem x) const;

  /// Absolute trace to F_p, returned as an integer in [0, p).
  int trace_to_prime(Elem x) const;
  /// Norm to F_p (x^(1 + p + ...)), as an element of the prime field.
  Elem norm_to_prime(Elem x) const;

  /// Exhaustive check of the field axioms; returns an empty string on success.
  std::string self_test() const;

 private:
  Elem mul_slow(Elem x, Elem y) const;

  int p_;
  int k_;
  int size_;
  int nonresidue_ = 0;
  Elem generator_ = 1;
  std::vector<int32_t> log_;
  std::vector<Elem> exp_;
};

/// psi(x) = zeta_p^(root_index * Tr(x)).
struct AdditiveCharacter {
  std::shared_ptr<const FiniteField> field;
  int root_index = 1;

  AdditiveCharacter(std::shared_ptr<const FiniteField> f, int root);
  /// Exponent e with psi(x) = zeta_p^e.
  int exponent(FiniteField::Elem x) const;
  AdditiveCharacter inverse() const;
};

/// eta(generator^j) = zeta_modulus^(exponent * j), modulus = unit order of the field.
struct MultiplicativeCharacter {
  std::shared_ptr<const FiniteField> field;
  int64_t exponent = 0;

  MultiplicativeCharacter(std::shared_ptr<const FiniteField> f, int64_t e);
  int64_t modulus() const { return field->unit_order(); }
  bool is_trivial() const { return exponent == 0; }
  /// Exponent of eta(x) as a power of zeta_modulus; x must be nonzero.
  int64_t value_exponent(FiniteField::Elem x) const;
  MultiplicativeCharacter inverse() const;
  MultiplicativeCharacter operator*(const MultiplicativeCharacter& o) const;
};

/// Smallest conductor that holds every Gauss sum and character value over F_q and F_{q^2}.
inline int exact_conductor(int q) { return q * (q * q - 1); }

template <class S>
typename S::value_type psi_eval(const S& s, const AdditiveCharacter& psi, FiniteField::Elem x) {
  return s.root_of_unity(psi.field->characteristic(), psi.exponent(x));
}

template <class S>
typename S::value_type eta_eval(const S& s, const MultiplicativeCharacter& eta, FiniteField::Elem x) {
  if (x == 0) return s.zero();
  return s.root_of_unity(eta.modulus(), eta.value_exponent(x));
}

/// g(eta, psi) = sum over nonzero x of eta(x) psi(x).
template <class S>
typename S::value_type gauss_sum(const S& s, const MultiplicativeCharacter& eta, const AdditiveCharacter& psi) {
  const FiniteField& f = *eta.field;
  if (psi.field.get() != eta.field.get()) throw std::invalid_argument("bkk: gauss_sum over mismatched fields");
  const int64_t p = f.characteristic();
  const int64_t m = f.unit_order();
  const int64_t order = p * m;
  auto acc = s.accumulator();
  for (int j = 0; j < m; ++j) {
    FiniteField::Elem x = f.exp(j);
    acc.add_root(order, mod_floor(eta.exponent * j, m) * p + psi.exponent(x) * m);
  }
  return acc.value();
}

}  // namespace bkk
