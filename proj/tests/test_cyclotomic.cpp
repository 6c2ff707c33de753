#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bkk/cyclotomic.hpp"
#include "bkk/scalar.hpp"

using namespace bkk;

namespace {

std::complex<double> zeta(int n, int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

Cyclotomic random_element(const std::shared_ptr<const CyclotomicField>& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> exp(0, f->conductor() - 1);
  CyclotomicAccumulator acc(f);
  for (int i = 0; i < 4; ++i) acc.add_root(f->conductor(), exp(rng), coef(rng));
  return acc.value() * Rational(1, 1 + static_cast<int>(rng() % 3));
}

}  // namespace

TEST(CyclotomicPolynomial, SmallCases) {
  EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<int64_t>{-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(5), (std::vector<int64_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<int64_t>{1, 0, -1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<int64_t>{1, -1, 1}));
}

TEST(CyclotomicPolynomial, DegreeIsTotient) {
  for (int n : {24, 120, 336, 1320}) {
    int phi = 0;
    for (int k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
    EXPECT_EQ(CyclotomicField::get(n)->degree(), phi) << n;
  }
}

TEST(Cyclotomic, PowersMatchComplexRoots) {
  auto f = CyclotomicField::get(120);
  for (int e = 0; e < 120; ++e) {
    auto z = Cyclotomic::root_of_unity(f, 120, e);
    EXPECT_LT(std::abs(z.to_complex() - zeta(120, e)), 1e-12) << e;
  }
}

TEST(Cyclotomic, SumOfAllRootsVanishes) {
  auto f = CyclotomicField::get(24);
  CyclotomicAccumulator acc(f);
  for (int e = 0; e < 24; ++e) acc.add_root(24, e);
  EXPECT_TRUE(acc.value().is_zero());
  CyclotomicAccumulator acc5(f);
  for (int e = 0; e < 3; ++e) acc5.add_root(3, e);
  EXPECT_TRUE(acc5.value().is_zero());
}

TEST(Cyclotomic, RingAxiomsOnRandomElements) {
  auto f = CyclotomicField::get(120);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_LT(std::abs((a * b).to_complex() - a.to_complex() * b.to_complex()), 1e-9);
  }
}

TEST(Cyclotomic, InverseAndGalois) {
  auto f = CyclotomicField::get(12);
  std::mt19937_64 rng(11);
  Cyclotomic one(f, Rational(1));
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_element(f, rng);
    if (a.is_zero()) continue;
    EXPECT_EQ(a * a.inverse(), one);
    EXPECT_LT(std::abs(a.conj().to_complex() - std::conj(a.to_complex())), 1e-12);
  }
  auto z = Cyclotomic::root_of_unity(f, 12, 1);
  EXPECT_EQ(z.galois(5), Cyclotomic::root_of_unity(f, 12, 5));
}

TEST(Cyclotomic, AccumulatorMatchesDirectSum) {
  auto f = CyclotomicField::get(40);
  std::mt19937_64 rng(3);
  Cyclotomic direct(f);
  CyclotomicAccumulator acc(f);
  for (int i = 0; i < 20; ++i) {
    auto v = random_element(f, rng);
    int k = static_cast<int>(rng() % 8);
    direct += v * Cyclotomic::root_of_unity(f, 8, k);
    acc.add(v, 8, k);
  }
  EXPECT_EQ(direct, acc.value());
}

TEST(Cyclotomic, RejectsMismatchedFields) {
  Cyclotomic a(CyclotomicField::get(5), Rational(1));
  Cyclotomic b(CyclotomicField::get(7), Rational(1));
  EXPECT_THROW(a + b, std::invalid_argument);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(-3, -6), Rational(1, 2));
  EXPECT_EQ((Rational(2, 3) / Rational(4, 9)).to_string(), "3/2");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(narrow_checked(static_cast<__int128>(INT64_MAX) + 1), std::overflow_error);
}
