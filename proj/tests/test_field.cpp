#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "bkk/field.hpp"

using namespace bkk;

namespace {

// Oracle: polynomial arithmetic in F_p[t]/(t^2 - n) written out independently of the table model.
struct Quad {
  int p, n;
  std::pair<int, int> mul(std::pair<int, int> x, std::pair<int, int> y) const {
    return {(x.first * y.first + x.second * y.second % p * n) % p, (x.first * y.second + x.second * y.first) % p};
  }
  std::pair<int, int> pow(std::pair<int, int> x, int e) const {
    std::pair<int, int> r{1, 0};
    for (int i = 0; i < e; ++i) r = mul(r, x);
    return r;
  }
};

std::complex<double> zeta(int n, long k) { return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k % n) / n); }

}  // namespace

TEST(FiniteField, SelfTestSmallFields) {
  for (int p : {3, 5, 7, 11, 13}) {
    EXPECT_EQ(FiniteField::get(p, 1)->self_test(), "") << p;
    EXPECT_EQ(FiniteField::get(p, 2)->self_test(), "") << p;
  }
  EXPECT_EQ(FiniteField::get(97, 1)->self_test(), "");
}

TEST(FiniteField, GeneratorChoices) {
  EXPECT_EQ(FiniteField::get(5, 1)->generator(), 2);
  EXPECT_EQ(FiniteField::get(7, 1)->generator(), 3);
  EXPECT_EQ(FiniteField::get(3, 2)->nonresidue(), 2);  // t^2 + 1 over F_3
  EXPECT_EQ(FiniteField::get(5, 2)->nonresidue(), 2);
  EXPECT_THROW(FiniteField(9, 1), std::invalid_argument);
  EXPECT_THROW(FiniteField(5, 3), std::invalid_argument);
}

TEST(FiniteField, TraceToPrime) {
  auto f9 = FiniteField::get(3, 2);
  EXPECT_EQ(f9->trace_to_prime(0), 0);
  EXPECT_EQ(FiniteField::get(5, 1)->trace_to_prime(2), 2);
  // Brute-force Frobenius powers: Tr(x) = x + x^p computed in the independent model.
  for (int p : {3, 5, 7, 11}) {
    auto f = FiniteField::get(p, 2);
    Quad oracle{p, f->nonresidue()};
    for (int a0 = 0; a0 < p; ++a0) {
      for (int a1 = 0; a1 < p; ++a1) {
        auto xp = oracle.pow({a0, a1}, p);
        EXPECT_EQ(xp.second, (p - a1) % p);
        int tr = (a0 + xp.first) % p;
        EXPECT_EQ(f->trace_to_prime(f->make(a0, a1)), tr);
      }
    }
  }
  // F_9, x = t: t^3 = -t so the trace is 0.
  EXPECT_EQ(f9->trace_to_prime(f9->make(0, 1)), 0);
}

TEST(FiniteField, ExtensionMultiplicationMatchesOracle) {
  auto f = FiniteField::get(7, 2);
  Quad oracle{7, f->nonresidue()};
  for (int x = 0; x < 49; ++x) {
    for (int y = 0; y < 49; ++y) {
      auto r = oracle.mul({x % 7, x / 7}, {y % 7, y / 7});
      EXPECT_EQ(f->mul(x, y), f->make(r.first, r.second));
    }
  }
}

TEST(AdditiveCharacter, BasicValues) {
  FloatScalars s;
  auto f = FiniteField::get(5, 1);
  AdditiveCharacter psi(f, 1);
  EXPECT_EQ(psi_eval(s, psi, 0), std::complex<double>(1.0));
  EXPECT_LT(std::abs(psi_eval(s, psi, 1) - std::polar(1.0, 2 * std::numbers::pi / 5)), 1e-15);
  std::complex<double> total = 0;
  for (int x = 0; x < 5; ++x) total += psi_eval(s, psi, x);
  EXPECT_LT(std::abs(total), 1e-12);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      EXPECT_LT(std::abs(psi_eval(s, psi, f->add(x, y)) - psi_eval(s, psi, x) * psi_eval(s, psi, y)), 1e-12);
  EXPECT_THROW(AdditiveCharacter(f, 5), std::invalid_argument);
}

TEST(MultiplicativeCharacter, Orthogonality) {
  FloatScalars s;
  for (int q : {3, 5, 7, 11, 13}) {
    auto f = FiniteField::get(q, 1);
    for (int a = 0; a < q - 1; ++a) {
      for (int b = 0; b < q - 1; ++b) {
        MultiplicativeCharacter e1(f, a), e2(f, b);
        std::complex<double> sum = 0;
        for (int t = 1; t < q; ++t) sum += eta_eval(s, e1, t) * std::conj(eta_eval(s, e2, t));
        EXPECT_LT(std::abs(sum - std::complex<double>(a == b ? q - 1 : 0)), 1e-9);
      }
    }
  }
}

TEST(GaussSum, TrivialCharacterIsMinusOne) {
  for (int q : {3, 5, 7}) {
    for (int k : {1, 2}) {
      auto f = FiniteField::get(q, k);
      ExactScalars ex(exact_conductor(q));
      auto g = gauss_sum(ex, MultiplicativeCharacter(f, 0), AdditiveCharacter(f, 1));
      EXPECT_EQ(g, ex.from_int(-1));
    }
  }
}

TEST(GaussSum, MatchesDirectSummation) {
  // Oracle: evaluate eta and psi from brute-force powers of the generator, no tables.
  for (int q : {3, 5, 7, 11, 13}) {
    auto f = FiniteField::get(q, 1);
    FloatScalars s;
    for (int root = 1; root < q; root += 2) {
      for (int e = 0; e < q - 1; ++e) {
        std::complex<double> direct = 0;
        long x = 1;
        for (int j = 0; j < q - 1; ++j) {
          direct += zeta(q - 1, static_cast<long>(e) * j) * zeta(q, root * x);
          x = x * f->generator() % q;
        }
        auto g = gauss_sum(s, MultiplicativeCharacter(f, e), AdditiveCharacter(f, root));
        EXPECT_LT(std::abs(g - direct), 1e-9);
      }
    }
  }
}

TEST(GaussSum, QuadraticAtFiveFourTerms) {
  auto f = FiniteField::get(5, 1);
  FloatScalars s;
  // Quadratic character: +1 on {1,4}, -1 on {2,3}.
  std::complex<double> direct = zeta(5, 1) - zeta(5, 2) - zeta(5, 3) + zeta(5, 4);
  EXPECT_LT(std::abs(gauss_sum(s, MultiplicativeCharacter(f, 2), AdditiveCharacter(f, 1)) - direct), 1e-12);
  EXPECT_LT(std::abs(std::abs(direct) - std::sqrt(5.0)), 1e-12);
}

TEST(GaussSum, NormIdentityExactAndFloat) {
  for (int q : {3, 5, 7, 11, 13}) {
    ExactScalars ex(exact_conductor(q));
    FloatScalars fl;
    for (int k : {1, 2}) {
      if (k == 2 && q > 7) continue;
      auto f = FiniteField::get(q, k);
      AdditiveCharacter psi(f, 1);
      const int Q = f->size();
      for (int e = 1; e < Q - 1; ++e) {
        MultiplicativeCharacter eta(f, e);
        auto g = gauss_sum(ex, eta, psi);
        auto gbar = gauss_sum(ex, eta.inverse(), psi.inverse());
        EXPECT_EQ(g * gbar, ex.from_int(Q));
        auto gf = gauss_sum(fl, eta, psi);
        EXPECT_LT(std::abs(gf * gauss_sum(fl, eta.inverse(), psi.inverse()) - std::complex<double>(Q)), 1e-9);
        EXPECT_LT(std::abs(g.to_complex() - gf), 1e-10);
        EXPECT_LT(std::abs(std::abs(gf) - std::sqrt(static_cast<double>(Q))), 1e-9);
      }
    }
  }
}
