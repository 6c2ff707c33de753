#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bkk/rational.hpp"

namespace bkk {

/// The cyclotomic field Q(zeta_N), presented by the power basis 1, zeta, ..., zeta^(phi(N)-1)
/// modulo the N-th cyclotomic polynomial. Instances are interned per conductor and immutable.
class CyclotomicField {
 public:
  static std::shared_ptr<const CyclotomicField> get(int conductor);

  int conductor() const { return conductor_; }
  int degree() const { return degree_; }
  /// Coefficients of Phi_N, lowest degree first; monic of length degree()+1.
  const std::vector<int64_t>& modulus() const { return modulus_; }
  /// Reduced coordinates of zeta^e for 0 <= e < N.
  std::span<const int64_t> power(int64_t e) const;

  explicit CyclotomicField(int conductor);

 private:
  int conductor_;
  int degree_;
  std::vector<int64_t> modulus_;
  std::vector<int64_t> powers_;  // conductor_ rows of degree_ entries
};

/// Integer cyclotomic polynomial Phi_n.
std::vector<int64_t> cyclotomic_polynomial(int n);

/// Exact element of Q(zeta_N): integer power-basis coordinates over a common positive denominator,
/// kept in lowest terms so that equality is coordinate equality.
class Cyclotomic {
 public:
  Cyclotomic() = default;
  explicit Cyclotomic(std::shared_ptr<const CyclotomicField> field);
  Cyclotomic(std::shared_ptr<const CyclotomicField> field, const Rational& r);

  static Cyclotomic root_of_unity(std::shared_ptr<const CyclotomicField> field, int64_t order, int64_t k);

  const std::shared_ptr<const CyclotomicField>& field() const { return field_; }
  int conductor() const { return field_ ? field_->conductor() : 0; }
  const std::vector<int64_t>& coefficients() const { return coeffs_; }
  int64_t denominator() const { return den_; }

  bool is_zero() const;
  bool is_rational() const;
  Rational rational_part() const;  // coefficient of 1; equals the value when is_rational()

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Rational& r);
  Cyclotomic& operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Rational& r) { return a *= r; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  /// Multiplication by zeta_order^k.
  Cyclotomic times_root(int64_t order, int64_t k) const;
  /// Galois automorphism zeta -> zeta^k, gcd(k, N) = 1.
  Cyclotomic galois(int64_t k) const;
  Cyclotomic conj() const { return galois(-1); }
  /// Multiplicative inverse via the product of the non-trivial Galois conjugates.
  Cyclotomic inverse() const;

  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  friend class CyclotomicAccumulator;
  void check_same_field(const Cyclotomic& o) const;
  void normalize();

  std::shared_ptr<const CyclotomicField> field_;
  std::vector<int64_t> coeffs_;
  int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) { return os << c.to_string(); }

/// Dense accumulator over Z[x]/(x^N - 1) for long sums of scaled roots of unity; converted to
/// reduced form once at the end.
class CyclotomicAccumulator {
 public:
  explicit CyclotomicAccumulator(std::shared_ptr<const CyclotomicField> field);

  void add_root(int64_t order, int64_t k, int64_t multiplicity = 1);
  /// Adds multiplicity * v * zeta_order^k.
  void add(const Cyclotomic& v, int64_t order = 1, int64_t k = 0, int64_t multiplicity = 1);
  Cyclotomic value() const;

 private:
  std::shared_ptr<const CyclotomicField> field_;
  std::vector<__int128> slots_;
  int64_t den_ = 1;
};

}  // namespace bkk
