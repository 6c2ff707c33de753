#include "bkk/field.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bkk {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::string to_string(ScalarMode m) { return m == ScalarMode::Float ? "float" : "exact"; }

ScalarMode parse_scalar_mode(const std::string& s) {
  if (s == "float") return ScalarMode::Float;
  if (s == "exact") return ScalarMode::Exact;
  throw std::invalid_argument("unknown scalar mode '" + s + "'");
}

FiniteField::FiniteField(int p, int k) : p_(p), k_(k) {
  if (!is_prime(p) || p > 97) throw std::invalid_argument("bkk: field characteristic must be a prime <= 97");
  if (k != 1 && k != 2) throw std::invalid_argument("bkk: extension degree must be 1 or 2");
  size_ = k == 1 ? p : p * p;
  if (k == 2) {
    if (p == 2) throw std::invalid_argument("bkk: quadratic model needs odd characteristic");
    for (int n = 2; n < p; ++n) {
      int e = 1;
      for (int i = 0; i < (p - 1) / 2; ++i) e = e * n % p;
      if (e == p - 1) {
        nonresidue_ = n;
        break;
      }
    }
  }
  const int m = size_ - 1;
  const auto factors = prime_factors(m);
  auto slow_pow = [&](Elem x, int64_t e) {
    Elem r = 1;
    while (e > 0) {
      if (e & 1) r = mul_slow(r, x);
      x = mul_slow(x, x);
      e >>= 1;
    }
    return r;
  };
  generator_ = 0;
  for (Elem c = 1; c < size_ && generator_ == 0; ++c) {
    bool ok = true;
    for (int r : factors) {
      if (slow_pow(c, m / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) generator_ = c;
  }
  if (generator_ == 0) throw std::logic_error("bkk: no multiplicative generator found");
  exp_.assign(m, 0);
  log_.assign(size_, -1);
  Elem cur = 1;
  for (int j = 0; j < m; ++j) {
    exp_[j] = cur;
    if (log_[cur] != -1) throw std::logic_error("bkk: generator order check failed");
    log_[cur] = j;
    cur = mul_slow(cur, generator_);
  }
  if (cur != 1) throw std::logic_error("bkk: generator order check failed");
}

std::shared_ptr<const FiniteField> FiniteField::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const FiniteField>(p, k);
  cache.emplace(key, f);
  return f;
}

FiniteField::Elem FiniteField::mul_slow(Elem x, Elem y) const {
  if (k_ == 1) return static_cast<Elem>(static_cast<int64_t>(x) * y % p_);
  int64_t a0 = x % p_, a1 = x / p_, b0 = y % p_, b1 = y / p_;
  int64_t c0 = (a0 * b0 + a1 * b1 % p_ * nonresidue_) % p_;
  int64_t c1 = (a0 * b1 + a1 * b0) % p_;
  return static_cast<Elem>(c0 + c1 * p_);
}

FiniteField::Elem FiniteField::add(Elem x, Elem y) const {
  if (k_ == 1) return (x + y) % p_;
  return make(x % p_ + y % p_, x / p_ + y / p_);
}

FiniteField::Elem FiniteField::neg(Elem x) const {
  if (k_ == 1) return x == 0 ? 0 : p_ - x;
  return make(-(x % p_), -(x / p_));
}

FiniteField::Elem FiniteField::sub(Elem x, Elem y) const { return add(x, neg(y)); }

FiniteField::Elem FiniteField::mul(Elem x, Elem y) const {
  if (x == 0 || y == 0) return 0;
  return exp_[(log_[x] + log_[y]) % (size_ - 1)];
}

FiniteField::Elem FiniteField::inv(Elem x) const {
  if (x == 0) throw std::domain_error("bkk: inverse of zero field element");
  return exp_[(size_ - 1 - log_[x]) % (size_ - 1)];
}

FiniteField::Elem FiniteField::pow(Elem x, int64_t e) const {
  if (x == 0) {
    if (e == 0) return 1;
    if (e < 0) throw std::domain_error("bkk: negative power of zero");
    return 0;
  }
  return exp(static_cast<int64_t>(log_[x]) * mod_floor(e, size_ - 1));
}

int FiniteField::log(Elem x) const {
  if (x == 0) throw std::domain_error("bkk: log of zero");
  return log_[x];
}

FiniteField::Elem FiniteField::frobenius(Elem x) const {
  if (k_ == 1) return x;
  // (a0 + a1 t)^p = a0 + a1 t^p and t^p = n^((p-1)/2) t = -t.
  return make(x % p_, -(x / p_));
}

int FiniteField::trace_to_prime(Elem x) const {
  if (k_ == 1) return x;
  return static_cast<int>(add(x, frobenius(x)));
}

FiniteField::Elem FiniteField::norm_to_prime(Elem x) const {
  if (k_ == 1) return x;
  return mul(x, frobenius(x));
}

std::string FiniteField::self_test() const {
  std::ostringstream err;
  for (Elem x = 0; x < size_; ++x) {
    if (add(x, 0) != x || mul(x, 1) != x) err << "identity fails at " << x << "; ";
    if (add(x, neg(x)) != 0) err << "additive inverse fails at " << x << "; ";
    if (x != 0 && mul(x, inv(x)) != 1) err << "multiplicative inverse fails at " << x << "; ";
    for (Elem y = 0; y < size_; ++y) {
      if (add(x, y) != add(y, x) || mul(x, y) != mul(y, x)) err << "commutativity fails; ";
      if (mul(x, y) != mul_slow(x, y)) err << "table multiplication disagrees at " << x << "," << y << "; ";
      if (size_ <= 13 * 13) {
        for (Elem z = 0; z < size_; ++z) {
          if (add(add(x, y), z) != add(x, add(y, z))) err << "add associativity; ";
          if (mul(mul(x, y), z) != mul(x, mul(y, z))) err << "mul associativity; ";
          if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z))) err << "distributivity; ";
        }
      }
      if (!err.str().empty()) return err.str();
    }
  }
  if (pow(generator_, size_ - 1) != 1) err << "generator order; ";
  for (int j = 1; j < size_ - 1; ++j) {
    if (exp(j) == 1) {
      err << "generator has small order; ";
      break;
    }
  }
  return err.str();
}

AdditiveCharacter::AdditiveCharacter(std::shared_ptr<const FiniteField> f, int root)
    : field(std::move(f)), root_index(root) {
  if (root % field->characteristic() == 0) throw std::invalid_argument("bkk: additive character must be nontrivial");
  root_index = static_cast<int>(mod_floor(root, field->characteristic()));
}

int AdditiveCharacter::exponent(FiniteField::Elem x) const {
  return static_cast<int>(static_cast<int64_t>(root_index) * field->trace_to_prime(x) % field->characteristic());
}

AdditiveCharacter AdditiveCharacter::inverse() const { return AdditiveCharacter(field, field->characteristic() - root_index); }

MultiplicativeCharacter::MultiplicativeCharacter(std::shared_ptr<const FiniteField> f, int64_t e)
    : field(std::move(f)), exponent(mod_floor(e, field->unit_order())) {}

int64_t MultiplicativeCharacter::value_exponent(FiniteField::Elem x) const {
  return static_cast<int64_t>(field->log(x)) * exponent % modulus();
}

MultiplicativeCharacter MultiplicativeCharacter::inverse() const { return MultiplicativeCharacter(field, -exponent); }

MultiplicativeCharacter MultiplicativeCharacter::operator*(const MultiplicativeCharacter& o) const {
  return MultiplicativeCharacter(field, exponent + o.exponent);
}

}  // namespace bkk
