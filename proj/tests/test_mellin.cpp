#include <gtest/gtest.h>

#include "bkk/corpus.hpp"
#include "bkk/mellin.hpp"

using namespace bkk;

namespace {

std::vector<IntMat> group_matrices(const std::vector<WeylElement>& W, const std::vector<int>& idx) {
  std::vector<IntMat> out;
  for (int i : idx) out.push_back(W[i].cochar);
  return out;
}

std::vector<int> all_indices(const std::vector<WeylElement>& W) {
  std::vector<int> v(W.size());
  for (size_t i = 0; i < W.size(); ++i) v[i] = static_cast<int>(i);
  return v;
}

const std::vector<int> kPrimes = {3, 5, 7, 11, 13};

int simple_index(const std::vector<WeylElement>& W) {
  for (size_t k = 0; k < W.size(); ++k) {
    if (W[k].word.size() == 1) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

TEST(ExactMatrix, InverseKernelSolve) {
  auto f = CyclotomicField::get(4);
  Matrix a(f, 2, 2);
  a(0, 0) = Cyclotomic::root_of_unity(f, 4, 1);
  a(0, 1) = Cyclotomic(f, Rational(2));
  a(1, 1) = Cyclotomic(f, Rational(3));
  auto inv = inverse(a);
  ASSERT_TRUE(inv);
  EXPECT_EQ(a * *inv, Matrix::identity(f, 2));
  Matrix s(f, 2, 2);
  s(0, 0) = Cyclotomic(f, Rational(1));
  s(0, 1) = Cyclotomic(f, Rational(1));
  Matrix k = kernel(s);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_TRUE((s * k).is_zero());
  EXPECT_FALSE(inverse(s));
}

TEST(ExactMatrix, ExpLogRoundTrip) {
  auto f = CyclotomicField::get(1);
  Matrix n(f, 3, 3);
  n(0, 1) = Cyclotomic(f, Rational(2));
  n(1, 2) = Cyclotomic(f, Rational(-1, 3));
  n(0, 2) = Cyclotomic(f, Rational(5));
  EXPECT_EQ(unipotent_log(nilpotent_exp(n)), n);
}

TEST(ExteriorPower, TopPowerIsDeterminant) {
  IntMat a{2, {2, 1, 1, 1}};
  auto f = CyclotomicField::get(1);
  Matrix top = exterior_power(f, a, 2);
  ASSERT_EQ(top.rows(), 1);
  EXPECT_EQ(top(0, 0), Cyclotomic(f, Rational(1)));
  EXPECT_EQ(exterior_power(f, a, 0)(0, 0), Cyclotomic(f, Rational(1)));
}

TEST(Coinvariant, TrivialGroupIsScalars) {
  auto a = coinvariant_algebra({IntMat::identity(2)}, 2);
  EXPECT_EQ(a.dim(), 1);
}

TEST(Coinvariant, SL2IsDualNumbers) {
  auto rd = RootDatum::make(Preset::SL2);
  auto W = weyl_elements(rd);
  auto a = coinvariant_algebra(group_matrices(W, all_indices(W)), 1);
  ASSERT_EQ(a.dim(), 2);
  EXPECT_EQ(a.basis()[0], Monomial({0}));
  EXPECT_EQ(a.basis()[1], Monomial({1}));
}

TEST(Coinvariant, GL2SwapHasDimensionTwo) {
  auto rd = RootDatum::make(Preset::GL2);
  auto W = weyl_elements(rd);
  auto a = coinvariant_algebra(group_matrices(W, all_indices(W)), 2);
  ASSERT_EQ(a.dim(), 2);
  // x1 + x2 is an invariant, so x1 = -x2 in the quotient and x1 - x2 spans degree one.
  auto coords = a.reduce(poly_add(poly_variable(2, 0), poly_variable(2, 1), Rational(-1)));
  EXPECT_FALSE(coords[1].is_zero());
  auto sum = a.reduce(poly_add(poly_variable(2, 0), poly_variable(2, 1)));
  for (const auto& c : sum) EXPECT_TRUE(c.is_zero());
}

TEST(Coinvariant, ChevalleyDimensionAndNilpotency) {
  for (Preset p : {Preset::GL1, Preset::SL2, Preset::GL2, Preset::GL3}) {
    auto rd = RootDatum::make(p);
    auto W = weyl_elements(rd);
    auto a = coinvariant_algebra(group_matrices(W, all_indices(W)), rd.rank);
    EXPECT_EQ(a.dim(), static_cast<int>(W.size())) << preset_name(p);
    auto f = CyclotomicField::get(1);
    for (int i = 0; i < rd.rank; ++i) {
      Matrix m = to_matrix(f, a.multiplication(i));
      EXPECT_TRUE(m.pow(a.dim()).is_zero());
    }
    auto table = a.multiplication_table();
    EXPECT_EQ(table.size(), static_cast<size_t>(a.dim()));
  }
}

TEST(ETheta, SL2TrivialIsJordanBlock) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {0}));
  ASSERT_EQ(e.dim, 2);
  Matrix id = Matrix::identity(e.field, 2);
  EXPECT_NE(e.X[0], id);
  EXPECT_TRUE((e.X[0] - id).pow(2).is_zero());
  auto sp = support(e);
  ASSERT_EQ(sp.size(), 1u);
  EXPECT_EQ(sp[0].chi.m, IntVec({0}));
  EXPECT_EQ(sp[0].multiplicity, 2);
}

TEST(ETheta, SL2QuadraticIsALine) {
  auto rd = RootDatum::make(Preset::SL2);
  auto W = weyl_elements(rd);
  TorusCharacter chi(5, {2});
  auto st = stabilizers(rd, W, chi);
  EXPECT_EQ(st.reflection.size(), 1u);
  EXPECT_EQ(st.full.size(), 2u);
  auto e = build_E_theta(rd, chi);
  ASSERT_EQ(e.dim, 1);
  EXPECT_EQ(e.X[0](0, 0), Cyclotomic::root_of_unity(e.field, 4, 2));
}

TEST(ETheta, GL2RegularSpectrum) {
  auto rd = RootDatum::make(Preset::GL2);
  TorusCharacter chi(7, {1, 4});
  auto e = build_E_theta(rd, chi);
  ASSERT_EQ(e.dim, 2);
  auto sp = support(e);
  ASSERT_EQ(sp.size(), 2u);
  std::vector<IntVec> pts{sp[0].chi.m, sp[1].chi.m};
  std::vector<IntVec> expect{chi.inverse().m, TorusCharacter(7, {-4, -1}).m};
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(pts, expect);
  EXPECT_EQ(sp[0].multiplicity, 1);
  EXPECT_EQ(sp[1].multiplicity, 1);
}

TEST(ETheta, SuiteOverPresetsAndLevels) {
  for (Preset p : {Preset::SL2, Preset::GL2}) {
    auto rd = RootDatum::make(p);
    auto W = weyl_elements(rd);
    for (int q : kPrimes) {
      for (const auto& chi : orbit_representatives(rd, q)) {
        SCOPED_TRACE(preset_name(p) + " q=" + std::to_string(q) + " chi=" + chi.to_string());
        auto st = stabilizers(rd, W, chi);
        auto e = build_E_theta(rd, chi);
        EXPECT_TRUE(check_relations(e).ok());
        EXPECT_EQ(e.dim, static_cast<int>(W.size() / st.full.size() * st.reflection.size()));
        auto sp = support(e);
        auto orb = orbit(W, chi.inverse());
        ASSERT_EQ(sp.size(), orb.size());
        for (const auto& pt : sp) {
          EXPECT_NE(std::find(orb.begin(), orb.end(), pt.chi), orb.end());
          EXPECT_EQ(pt.multiplicity, static_cast<int>(st.reflection.size()));
          EXPECT_TRUE(pt.iso_ok);
        }
        EXPECT_TRUE(check_centrality(e, CentralityMode::Central).pass);
        auto d = check_descent(e);
        EXPECT_TRUE(d.pass);
        for (const auto& dp : d.points) EXPECT_TRUE(dp.annihilator_is_invariant_ideal());
      }
    }
  }
}

TEST(ETheta, ConjugationEquivariance) {
  for (Preset p : {Preset::SL2, Preset::GL2}) {
    auto rd = RootDatum::make(p);
    auto W = weyl_elements(rd);
    for (int q : {5, 7}) {
      for (const auto& chi : all_characters(rd.rank, q)) {
        auto e = build_E_theta(rd, chi);
        for (const auto& w : W) {
          auto e2 = build_E_theta(rd, act(w, chi));
          auto iso = module_isomorphism(e, e2);
          ASSERT_TRUE(iso.iso.has_value()) << chi.to_string();
          for (size_t k = 0; k < W.size(); ++k) EXPECT_EQ(*iso.iso * e.omega[k], e2.omega[k] * *iso.iso);
        }
      }
    }
  }
}

TEST(SupportPoint, StabilizerIsomorphismForAllCharacters) {
  for (Preset p : {Preset::GL1, Preset::SL2, Preset::GL2, Preset::GL3}) {
    auto rd = RootDatum::make(p);
    auto W = weyl_elements(rd);
    for (int q : {3, 5, 7}) {
      for (const auto& chi : all_characters(rd.rank, q)) EXPECT_TRUE(make_support_point(rd, W, chi).iso_ok) << chi.to_string();
    }
  }
}

TEST(Support, TensorSupportIsPairwiseProducts) {
  auto rd = RootDatum::make(Preset::GL2);
  for (const auto& a : {TorusCharacter(5, {1, 2}), TorusCharacter(5, {0, 0})}) {
    for (const auto& b : {TorusCharacter(5, {3, 1}), TorusCharacter(5, {2, 2})}) {
      auto ea = build_E_theta(rd, a);
      auto eb = build_E_theta(rd, b);
      auto t = tensor_product(ea, eb);
      EXPECT_TRUE(check_relations(t).ok());
      std::map<IntVec, int> expect;
      for (const auto& pa : support(ea))
        for (const auto& pb : support(eb)) expect[(pa.chi * pb.chi).m] += pa.multiplicity * pb.multiplicity;
      std::map<IntVec, int> got;
      for (const auto& pt : support(t)) got[pt.chi.m] += pt.multiplicity;
      EXPECT_EQ(got, expect);
    }
  }
}

TEST(Koszul, OutsideSupportVanishes) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {0}));
  auto kf = koszul_fibers(e, TorusCharacter(5, {1}));
  for (int d : kf.dims) EXPECT_EQ(d, 0);
}

TEST(Koszul, SL2TrivialFiber) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {0}));
  auto kf = koszul_fibers(e, TorusCharacter(5, {0}));
  EXPECT_EQ(kf.dims, std::vector<int>({1, 1}));
}

TEST(Koszul, EulerCharacteristicVanishes) {
  for (const auto& entry : generate_corpus()) {
    for (const auto& sp : support(entry.module)) {
      auto kf = koszul_fibers(entry.module, sp.chi);
      int chi = 0;
      for (size_t p = 0; p < kf.dims.size(); ++p) chi += (p % 2 ? -1 : 1) * kf.dims[p];
      EXPECT_EQ(chi, 0) << entry.name;
    }
  }
}

TEST(Centrality, SL2QuadraticCentralNotStronglyCentral) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {2}));
  EXPECT_TRUE(check_centrality(e, CentralityMode::Central).pass);
  EXPECT_FALSE(check_centrality(e, CentralityMode::StronglyCentral).pass);
  // The quadratic line where s acts by +1 on the module itself.
  MellinModule line = e;
  line.sign_twisted = false;
  line.omega[1] = Matrix::identity(line.field, 1);
  EXPECT_TRUE(check_relations(line).ok());
  EXPECT_TRUE(check_centrality(line, CentralityMode::Central).pass);
  EXPECT_FALSE(check_centrality(line, CentralityMode::StronglyCentral).pass);
}

TEST(Centrality, TrivialLineAtFixedPointFailsForSL2) {
  auto rd = RootDatum::make(Preset::SL2);
  auto W = weyl_elements(rd);
  auto a = GradedQuotient(1, {poly_variable(1, 0)});
  for (bool twisted : {false, true}) {
    auto m = quotient_module(rd, 5, TorusCharacter(5, {0}), all_indices(W), a, false, twisted);
    ASSERT_EQ(m.dim, 1);
    EXPECT_FALSE(check_centrality(m, CentralityMode::Central).pass);
  }
}

TEST(Descent, RegularSkyscraperHolds) {
  auto rd = RootDatum::make(Preset::GL2);
  auto a = GradedQuotient(2, {poly_variable(2, 0), poly_variable(2, 1)});
  auto m = quotient_module(rd, 5, TorusCharacter(5, {1, 2}), {0}, a, false, true);
  EXPECT_TRUE(check_relations(m).ok());
  EXPECT_TRUE(check_descent(m).pass);
  EXPECT_TRUE(check_centrality(m, CentralityMode::Central).pass);
}

TEST(Descent, WrongTwistJordanBlockFailsBoth) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {0}));
  MellinModule wrong = e;
  wrong.sign_twisted = false;
  auto d = check_descent(wrong);
  auto c = check_centrality(wrong, CentralityMode::Central);
  EXPECT_FALSE(d.pass);
  EXPECT_FALSE(c.pass);
  ASSERT_EQ(d.points.size(), 1u);
  EXPECT_FALSE(d.points[0].pass());
  ASSERT_FALSE(c.violations.empty());
  EXPECT_EQ(c.violations[0].point, d.points[0].point);
}

TEST(Corpus, CentralityMatchesDescent) {
  auto corpus = generate_corpus();
  ASSERT_GE(corpus.size(), 100u);
  int central = 0;
  for (const auto& entry : corpus) {
    EXPECT_LE(entry.module.dim, 6) << entry.name;
    EXPECT_LE(entry.module.rd.rank, 2) << entry.name;
    EXPECT_TRUE(check_relations(entry.module).ok()) << entry.name;
    bool c = check_centrality(entry.module, CentralityMode::Central).pass;
    bool d = check_descent(entry.module).pass;
    EXPECT_EQ(c, d) << entry.name;
    central += c;
  }
  // Both outcomes occur, so the agreement is not vacuous.
  EXPECT_GT(central, 0);
  EXPECT_LT(central, static_cast<int>(corpus.size()));
}

TEST(Collapse, RegularSkyscraperPair) {
  auto rd = RootDatum::make(Preset::GL2);
  TorusCharacter chi(5, {1, 2});
  auto a = GradedQuotient(2, {poly_variable(2, 0), poly_variable(2, 1)});
  auto f = quotient_module(rd, 5, chi.inverse(), {0}, a, false, false);
  auto rep = tensor_and_collapse(f, chi);
  ASSERT_TRUE(rep.precondition_ok);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.v_dims[0], 1);
  EXPECT_EQ(rep.degrees[0].lattice_hom_dim, 2);
  EXPECT_EQ(rep.degrees[0].hom_dim, 1);
}

TEST(Collapse, WrongThetaGivesZero) {
  auto rd = RootDatum::make(Preset::GL2);
  auto a = GradedQuotient(2, {poly_variable(2, 0), poly_variable(2, 1)});
  auto f = quotient_module(rd, 5, TorusCharacter(5, {1, 2}), {0}, a, false, false);
  auto rep = tensor_and_collapse(f, TorusCharacter(5, {0, 3}));
  ASSERT_TRUE(rep.precondition_ok);
  EXPECT_TRUE(rep.pass);
  for (int v : rep.v_dims) EXPECT_EQ(v, 0);
  for (const auto& d : rep.degrees) EXPECT_EQ(d.source_dim, 0);
}

TEST(Collapse, PreconditionViolationIsReported) {
  auto rd = RootDatum::make(Preset::SL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {2}));
  auto rep = tensor_and_collapse(e, TorusCharacter(5, {2}));
  EXPECT_FALSE(rep.precondition_ok);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.precondition_message.empty());
}

TEST(Collapse, SL2TrivialThetaAgainstItself) {
  auto rd = RootDatum::make(Preset::SL2);
  TorusCharacter chi(5, {0});
  auto e = build_E_theta(rd, chi);
  auto rep = tensor_and_collapse(e, chi);
  ASSERT_TRUE(rep.precondition_ok);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.v_dims, std::vector<int>({1, 1}));
}

TEST(Collapse, CorpusStronglyCentralModules) {
  int checked = 0;
  for (const auto& entry : generate_corpus()) {
    if (!check_centrality(entry.module, CentralityMode::StronglyCentral).pass) continue;
    for (const auto& chi : orbit_representatives(entry.module.rd, entry.module.q)) {
      auto rep = tensor_and_collapse(entry.module, chi);
      EXPECT_TRUE(rep.pass) << entry.name << " against " << chi.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Relations, SimpleReflectionGeneratesOmega) {
  auto rd = RootDatum::make(Preset::GL2);
  auto e = build_E_theta(rd, TorusCharacter(5, {0, 0}));
  int s = simple_index(e.W);
  ASSERT_GE(s, 0);
  EXPECT_EQ(e.omega[s] * e.omega[s], Matrix::identity(e.field, e.dim));
}
