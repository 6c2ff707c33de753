#include "bkk/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bkk {

namespace {

int64_t mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Exact division of integer polynomials (lowest degree first) by a monic divisor.
std::vector<int64_t> divide_exact(std::vector<int64_t> num, const std::vector<int64_t>& den) {
  const size_t dd = den.size() - 1;
  std::vector<int64_t> quo(num.size() - dd, 0);
  for (size_t i = num.size(); i-- > dd;) {
    int64_t c = num[i];
    quo[i - dd] = c;
    if (c == 0) continue;
    for (size_t j = 0; j <= dd; ++j) {
      num[i - dd + j] = narrow_checked(static_cast<__int128>(num[i - dd + j]) - static_cast<__int128>(c) * den[j]);
    }
  }
  for (size_t i = 0; i < dd; ++i) {
    if (num[i] != 0) throw std::logic_error("bkk: inexact cyclotomic division");
  }
  return quo;
}

// Reduces a wide dense polynomial modulo the monic Phi_N in place; result in the first `deg` slots.
void reduce_wide(std::vector<__int128>& a, const std::vector<int64_t>& phi) {
  const size_t deg = phi.size() - 1;
  for (size_t i = a.size(); i-- > deg;) {
    __int128 c = a[i];
    if (c == 0) continue;
    a[i] = 0;
    for (size_t j = 0; j < deg; ++j) {
      if (phi[j] != 0) a[i - deg + j] -= c * phi[j];
    }
  }
  a.resize(deg);
}

}  // namespace

std::vector<int64_t> cyclotomic_polynomial(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<int64_t>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  if (n < 1) throw std::invalid_argument("bkk: cyclotomic polynomial index must be positive");
  std::vector<int64_t> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) poly = divide_exact(poly, cyclotomic_polynomial(d));
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, poly);
  return poly;
}

CyclotomicField::CyclotomicField(int conductor) : conductor_(conductor) {
  if (conductor < 1) throw std::invalid_argument("bkk: conductor must be positive");
  modulus_ = cyclotomic_polynomial(conductor);
  degree_ = static_cast<int>(modulus_.size()) - 1;
  powers_.assign(static_cast<size_t>(conductor_) * degree_, 0);
  std::vector<__int128> cur(degree_ + 1, 0);
  cur[0] = 1;
  for (int e = 0; e < conductor_; ++e) {
    cur.resize(degree_ + 1, 0);
    reduce_wide(cur, modulus_);
    for (int j = 0; j < degree_; ++j) powers_[static_cast<size_t>(e) * degree_ + j] = narrow_checked(cur[j]);
    cur.insert(cur.begin(), 0);  // multiply by x
  }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::get(int conductor) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CyclotomicField>> fields;
  std::lock_guard<std::mutex> lock(mu);
  auto it = fields.find(conductor);
  if (it != fields.end()) return it->second;
  auto f = std::make_shared<const CyclotomicField>(conductor);
  fields.emplace(conductor, f);
  return f;
}

std::span<const int64_t> CyclotomicField::power(int64_t e) const {
  e = mod(e, conductor_);
  return {powers_.data() + static_cast<size_t>(e) * degree_, static_cast<size_t>(degree_)};
}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicField> field)
    : field_(std::move(field)), coeffs_(field_->degree(), 0) {}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicField> field, const Rational& r)
    : field_(std::move(field)), coeffs_(field_->degree(), 0), den_(r.den()) {
  coeffs_[0] = r.num();
}

Cyclotomic Cyclotomic::root_of_unity(std::shared_ptr<const CyclotomicField> field, int64_t order, int64_t k) {
  if (order <= 0 || field->conductor() % order != 0) {
    throw std::invalid_argument("bkk: root of unity order does not divide the conductor");
  }
  Cyclotomic out(field);
  auto row = field->power(mod(k, order) * (field->conductor() / order));
  std::copy(row.begin(), row.end(), out.coeffs_.begin());
  return out;
}

void Cyclotomic::check_same_field(const Cyclotomic& o) const {
  if (!field_ || !o.field_ || field_->conductor() != o.field_->conductor()) {
    throw std::invalid_argument("bkk: cyclotomic operands live in different fields");
  }
}

void Cyclotomic::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : coeffs_) c = -c;
  }
  int64_t g = den_;
  for (auto c : coeffs_) {
    if (g == 1) break;
    g = gcd64(g, c);
  }
  if (g > 1) {
    den_ /= g;
    for (auto& c : coeffs_) c /= g;
  }
  if (std::all_of(coeffs_.begin(), coeffs_.end(), [](int64_t c) { return c == 0; })) den_ = 1;
}

bool Cyclotomic::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](int64_t c) { return c == 0; });
}

bool Cyclotomic::is_rational() const {
  return std::all_of(coeffs_.begin() + (coeffs_.empty() ? 0 : 1), coeffs_.end(), [](int64_t c) { return c == 0; });
}

Rational Cyclotomic::rational_part() const { return coeffs_.empty() ? Rational(0) : Rational(coeffs_[0], den_); }

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out = *this;
  for (auto& c : out.coeffs_) c = narrow_checked(-static_cast<__int128>(c));
  return out;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  check_same_field(o);
  int64_t g = gcd64(den_, o.den_);
  int64_t fa = o.den_ / g;
  int64_t fb = den_ / g;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] = narrow_checked(static_cast<__int128>(coeffs_[i]) * fa + static_cast<__int128>(o.coeffs_[i]) * fb);
  }
  den_ = narrow_checked(static_cast<__int128>(den_) * fa);
  normalize();
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this += -o; }

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  check_same_field(o);
  const size_t deg = coeffs_.size();
  std::vector<__int128> wide(2 * deg - 1, 0);
  for (size_t i = 0; i < deg; ++i) {
    if (coeffs_[i] == 0) continue;
    for (size_t j = 0; j < deg; ++j) {
      if (o.coeffs_[j] != 0) wide[i + j] += static_cast<__int128>(coeffs_[i]) * o.coeffs_[j];
    }
  }
  reduce_wide(wide, field_->modulus());
  for (size_t i = 0; i < deg; ++i) coeffs_[i] = narrow_checked(wide[i]);
  den_ = narrow_checked(static_cast<__int128>(den_) * o.den_);
  normalize();
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c = narrow_checked(static_cast<__int128>(c) * r.num());
  den_ = narrow_checked(static_cast<__int128>(den_) * r.den());
  normalize();
  return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  a.check_same_field(b);
  return a.den_ == b.den_ && a.coeffs_ == b.coeffs_;
}

Cyclotomic Cyclotomic::times_root(int64_t order, int64_t k) const {
  CyclotomicAccumulator acc(field_);
  acc.add(*this, order, k);
  return acc.value();
}

Cyclotomic Cyclotomic::galois(int64_t k) const {
  const int64_t n = field_->conductor();
  if (std::gcd(mod(k, n), n) != 1 && n > 1) throw std::invalid_argument("bkk: galois exponent not a unit");
  std::vector<__int128> acc(coeffs_.size(), 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    auto row = field_->power(mod(static_cast<int64_t>(i) * k, n));
    for (size_t j = 0; j < row.size(); ++j) acc[j] += static_cast<__int128>(coeffs_[i]) * row[j];
  }
  Cyclotomic out(field_);
  for (size_t j = 0; j < acc.size(); ++j) out.coeffs_[j] = narrow_checked(acc[j]);
  out.den_ = den_;
  out.normalize();
  return out;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("bkk: inverse of zero cyclotomic");
  const int64_t n = field_->conductor();
  Cyclotomic prod(field_, Rational(1));
  for (int64_t k = 2; k < n; ++k) {
    if (std::gcd(k, n) == 1) prod *= galois(k);
  }
  Cyclotomic norm = prod * *this;
  if (!norm.is_rational()) throw std::logic_error("bkk: cyclotomic norm is not rational");
  return prod * (Rational(1) / norm.rational_part());
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> z = 0;
  const double n = field_->conductor();
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) {
      z += static_cast<double>(coeffs_[i]) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / n);
    }
  }
  return z / static_cast<double>(den_);
}

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[i];
    if (i > 0) os << "*z^" << i;
  }
  if (first) os << "0";
  if (den_ != 1) os << " (/" << den_ << ")";
  return os.str();
}

CyclotomicAccumulator::CyclotomicAccumulator(std::shared_ptr<const CyclotomicField> field)
    : field_(std::move(field)), slots_(field_->conductor(), 0) {}

void CyclotomicAccumulator::add_root(int64_t order, int64_t k, int64_t multiplicity) {
  const int64_t n = field_->conductor();
  if (n % order != 0) throw std::invalid_argument("bkk: root order does not divide the conductor");
  slots_[mod(k, order) * (n / order)] += static_cast<__int128>(multiplicity) * den_;
}

void CyclotomicAccumulator::add(const Cyclotomic& v, int64_t order, int64_t k, int64_t multiplicity) {
  const int64_t n = field_->conductor();
  if (v.conductor() != n || n % order != 0) throw std::invalid_argument("bkk: accumulator field mismatch");
  if (multiplicity == 0) return;
  if (v.den_ != den_) {
    int64_t g = gcd64(den_, v.den_);
    int64_t scale = v.den_ / g;
    if (scale != 1) {
      for (auto& s : slots_) s *= scale;
      den_ = narrow_checked(static_cast<__int128>(den_) * scale);
    }
  }
  const __int128 vscale = static_cast<__int128>(den_ / v.den_) * multiplicity;
  const int64_t shift = mod(k, order) * (n / order);
  for (size_t i = 0; i < v.coeffs_.size(); ++i) {
    if (v.coeffs_[i] != 0) slots_[(static_cast<int64_t>(i) + shift) % n] += v.coeffs_[i] * vscale;
  }
}

Cyclotomic CyclotomicAccumulator::value() const {
  const int deg = field_->degree();
  std::vector<__int128> acc(deg, 0);
  for (int64_t e = 0; e < static_cast<int64_t>(slots_.size()); ++e) {
    if (slots_[e] == 0) continue;
    auto row = field_->power(e);
    for (int j = 0; j < deg; ++j) {
      if (row[j] != 0) acc[j] += slots_[e] * row[j];
    }
  }
  Cyclotomic out(field_);
  for (int j = 0; j < deg; ++j) out.coeffs_[j] = narrow_checked(acc[j]);
  out.den_ = den_;
  out.normalize();
  return out;
}

}  // namespace bkk
