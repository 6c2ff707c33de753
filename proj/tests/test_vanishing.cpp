#include <gtest/gtest.h>

#include <cmath>

#include "bkk/vanishing.hpp"

using namespace bkk;

namespace {

const std::vector<std::vector<IntVec>> kListed{{{1, 0}, {0, 1}},
                                               {{1, 0}, {0, 1}, {1, 0}, {0, 1}},
                                               {{2, 1}, {1, 2}},
                                               {{3, 2}, {2, 3}},
                                               {{2, 0}, {1, 1}, {0, 2}}};

template <class S>
ClassFunction<S> kernel(const S& s, const Gl2Classes& cl, const std::vector<IntVec>& w, int root = 1) {
  auto t = gl2_character_table(cl);
  return kernel_on_group(s, t, cl, gamma_table(s, t, w, root, Convention{1, 1, 1}));
}

}  // namespace

TEST(Cosets, RepresentativesPartitionTheGroup) {
  for (int q : {3, 5}) {
    auto f = FiniteField::get(q, 1);
    auto reps = coset_representatives(*f);
    const int64_t order = static_cast<int64_t>(q * q - 1) * (q * q - q);
    EXPECT_EQ(static_cast<int64_t>(reps.size()), order / q);
    int on = 0;
    for (size_t i = 0; i < reps.size(); ++i) {
      on += reps[i].in_borel;
      EXPECT_NE(mat_det(*f, reps[i].g), 0);
      for (int x = 0; x < q; ++x) EXPECT_EQ(coset_index(*f, mat_mul(*f, reps[i].g, Mat2{1, x, 0, 1})), i);
    }
    EXPECT_EQ(on, (q - 1) * (q - 1));
  }
}

TEST(Vanishing, StdLineSumsAnalytic) {
  FloatScalars s;
  const int q = 5;
  auto f = FiniteField::get(q, 1);
  AdditiveCharacter psi(f, 1);
  auto phi = [&](const Mat2& g) { return psi_eval(s, psi, mat_trace(*f, g)); };
  // Antidiagonal(1,1) is off the Borel; the identity coset gives q psi(2).
  std::complex<double> anti = 0, ident = 0;
  for (int x = 0; x < q; ++x) {
    anti += phi(mat_mul(*f, Mat2{0, 1, 1, 0}, Mat2{1, x, 0, 1}));
    ident += phi(mat_mul(*f, Mat2{1, 0, 0, 1}, Mat2{1, x, 0, 1}));
  }
  EXPECT_LT(std::abs(anti), 1e-12);
  EXPECT_LT(std::abs(ident - 5.0 * psi_eval(s, psi, 2)), 1e-12);
}

TEST(Vanishing, ListedWeightSetsFloat) {
  FloatScalars s;
  for (int q : {3, 5, 7}) {
    auto cl = gl2_classes(q);
    for (const auto& w : kListed) {
      auto rep = class_function_coset_sums(s, cl, kernel(s, cl, w));
      EXPECT_TRUE(rep.pass) << q << " off=" << rep.max_off_borel;
      EXPECT_TRUE(rep.nontrivial) << q;
    }
  }
}

TEST(Vanishing, ExactModeSumsAreExactlyZero) {
  for (int q : {3, 5}) {
    ExactScalars s(exact_conductor(q));
    auto cl = gl2_classes(q);
    for (const auto& w : kListed) {
      auto rep = class_function_coset_sums(s, cl, kernel(s, cl, w));
      EXPECT_TRUE(rep.exact_zero);
      EXPECT_TRUE(rep.pass);
    }
  }
}

TEST(Vanishing, BreaksForANonKernelFunction) {
  // A random class function is not supported on B/U after averaging: the harness must notice.
  FloatScalars s;
  auto cl = gl2_classes(5);
  ClassFunction<FloatScalars> phi(cl.size());
  for (int c = 0; c < cl.size(); ++c) phi[c] = std::cos(1.7 * c + 0.3);
  EXPECT_FALSE(class_function_coset_sums(s, cl, phi).pass);
}

TEST(Vanishing, ExtensionOfScalars) {
  FloatScalars s;
  auto rep = extension_scalars_sums(s, 3, 2, 1);
  EXPECT_EQ(rep.cosets, (81 - 1) * (81 - 9) / 9);
  EXPECT_TRUE(rep.pass) << rep.max_off_borel;
  EXPECT_TRUE(rep.nontrivial);
  // m = 1 reproduces the class-function harness for the std kernel.
  auto cl = gl2_classes(3);
  auto direct = class_function_coset_sums(s, cl, kernel(s, cl, kListed[0]));
  auto m1 = extension_scalars_sums(s, 3, 1, 1);
  ASSERT_EQ(direct.sums.size(), m1.sums.size());
  for (size_t i = 0; i < m1.sums.size(); ++i) EXPECT_LT(std::abs(direct.sums[i] - m1.sums[i]), 1e-12);
}

TEST(Vanishing, BorelTranslationInvariantPattern) {
  FloatScalars s;
  const int q = 3;
  auto cl = gl2_classes(q);
  const auto& f = *cl.fq;
  for (const auto& w : kListed) {
    auto rep = class_function_coset_sums(s, cl, kernel(s, cl, w));
    auto reps = coset_representatives(f);
    for (const auto& b : gl2_elements(f)) {
      if (b.c != 0) continue;
      for (size_t i = 0; i < reps.size(); ++i) {
        size_t j = coset_index(f, mat_mul(f, b, reps[i].g));
        EXPECT_EQ(reps[i].in_borel, reps[j].in_borel);
        if (!reps[i].in_borel) EXPECT_LE(std::abs(rep.sums[j]), rep.tolerance);
      }
    }
  }
}

TEST(Vanishing, StdOnBorelRestrictionIsWeylSymmetric) {
  FloatScalars s;
  for (int q : {3, 5, 7}) {
    auto cl = gl2_classes(q);
    const auto& f = *cl.fq;
    auto rep = class_function_coset_sums(s, cl, kernel(s, cl, kListed[0]));
    for (int a = 1; a < q; ++a)
      for (int y = 1; y < q; ++y) {
        auto i = coset_index(f, Mat2{a, 0, 0, y});
        auto j = coset_index(f, Mat2{y, 0, 0, a});
        EXPECT_LT(std::abs(rep.sums[i] - rep.sums[j]), 1e-9);
      }
  }
}
