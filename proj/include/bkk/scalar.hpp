#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>

#include "bkk/cyclotomic.hpp"
#include "bkk/rational.hpp"

namespace bkk {

enum class ScalarMode { Float, Exact };

std::string to_string(ScalarMode m);
ScalarMode parse_scalar_mode(const std::string& s);

inline int64_t mod_floor(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Double-precision complex scalars.
struct FloatScalars {
  using value_type = std::complex<double>;
  static constexpr ScalarMode mode = ScalarMode::Float;

  value_type zero() const { return 0.0; }
  value_type one() const { return 1.0; }
  value_type from_int(int64_t n) const { return static_cast<double>(n); }
  value_type from_rational(const Rational& r) const { return r.to_double(); }
  value_type root_of_unity(int64_t order, int64_t k) const {
    k = mod_floor(k, order);
    if (k == 0) return 1.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order));
  }
  value_type conj(const value_type& v) const { return std::conj(v); }
  std::complex<double> to_complex(const value_type& v) const { return v; }
  value_type inverse(const value_type& v) const { return 1.0 / v; }

  class Accumulator {
   public:
    explicit Accumulator(const FloatScalars& s) : s_(&s) {}
    void add_root(int64_t order, int64_t k, int64_t multiplicity = 1) {
      sum_ += static_cast<double>(multiplicity) * s_->root_of_unity(order, k);
    }
    void add(const value_type& v, int64_t order = 1, int64_t k = 0, int64_t multiplicity = 1) {
      sum_ += static_cast<double>(multiplicity) * v * s_->root_of_unity(order, k);
    }
    value_type value() const { return sum_; }

   private:
    const FloatScalars* s_;
    value_type sum_ = 0.0;
  };
  Accumulator accumulator() const { return Accumulator(*this); }
};

/// Exact scalars in a fixed cyclotomic field.
struct ExactScalars {
  using value_type = Cyclotomic;
  static constexpr ScalarMode mode = ScalarMode::Exact;

  explicit ExactScalars(int conductor) : field(CyclotomicField::get(conductor)) {}

  std::shared_ptr<const CyclotomicField> field;

  value_type zero() const { return Cyclotomic(field); }
  value_type one() const { return Cyclotomic(field, Rational(1)); }
  value_type from_int(int64_t n) const { return Cyclotomic(field, Rational(n)); }
  value_type from_rational(const Rational& r) const { return Cyclotomic(field, r); }
  value_type root_of_unity(int64_t order, int64_t k) const { return Cyclotomic::root_of_unity(field, order, k); }
  value_type conj(const value_type& v) const { return v.conj(); }
  std::complex<double> to_complex(const value_type& v) const { return v.to_complex(); }
  value_type inverse(const value_type& v) const { return v.inverse(); }

  class Accumulator {
   public:
    explicit Accumulator(const ExactScalars& s) : acc_(s.field) {}
    void add_root(int64_t order, int64_t k, int64_t multiplicity = 1) { acc_.add_root(order, k, multiplicity); }
    void add(const value_type& v, int64_t order = 1, int64_t k = 0, int64_t multiplicity = 1) { acc_.add(v, order, k, multiplicity); }
    value_type value() const { return acc_.value(); }

   private:
    CyclotomicAccumulator acc_;
  };
  Accumulator accumulator() const { return Accumulator(*this); }
};

inline std::complex<double> as_complex(const std::complex<double>& v) { return v; }
inline std::complex<double> as_complex(const Cyclotomic& v) { return v.to_complex(); }

}  // namespace bkk
