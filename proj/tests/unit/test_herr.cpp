#include <gtest/gtest.h>

#include <random>

#include "pgm/errors.hpp"
#include "pgm/herr.hpp"

using namespace pgm;

namespace {

struct Dims {
  std::size_t h0, h1, h2;
};

Dims dims(const PhiGammaModule& M, Config cfg = {}) {
  Herr H(M, cfg);
  return {H.h0(), H.h1(), H.h2()};
}

PhiGammaModule omega_power(const AlgPtr& A, i64 n) { return cyclotomic_module(A, n); }

Cocycle unramified_class(const AlgPtr& A) {
  SeriesMatrix a = SeriesMatrix::scalar(1, LaurentSeries::constant(A, A->one()));
  return Cocycle{a, SeriesMatrix(A, 1, 1), false};
}

}  // namespace

// Local Euler characteristic and Tate duality tables for characters of G_Qp.
TEST(Herr, TrivialCharacter) {
  for (u32 p : {3u, 5u, 7u}) {
    Dims d = dims(trivial_module(CoefficientAlgebra::prime_field(p)));
    EXPECT_EQ(d.h0, 1u) << p;
    EXPECT_EQ(d.h1, 2u) << p;
    EXPECT_EQ(d.h2, 0u) << p;
  }
}

TEST(Herr, CyclotomicCharacter) {
  for (u32 p : {3u, 5u}) {
    Dims d = dims(cyclotomic_module(CoefficientAlgebra::prime_field(p), 1));
    EXPECT_EQ(d.h0, 0u);
    EXPECT_EQ(d.h1, 2u);
    EXPECT_EQ(d.h2, 1u);
  }
}

TEST(Herr, UnramifiedAndTameCharacters) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  Dims u = dims(unramified_module(F5, F5->from_int(2)));
  EXPECT_EQ(u.h0, 0u);
  EXPECT_EQ(u.h1, 1u);
  EXPECT_EQ(u.h2, 0u);
  Dims w = dims(omega_power(F5, 2));
  EXPECT_EQ(w.h0, 0u);
  EXPECT_EQ(w.h1, 1u);
  EXPECT_EQ(w.h2, 0u);
  Dims w3 = dims(omega_power(F5, 3));
  EXPECT_EQ(w3.h1, 1u);
  auto F3 = CoefficientAlgebra::prime_field(3);
  Dims u3 = dims(unramified_module(F3, F3->from_int(2)));
  EXPECT_EQ(u3.h0 + u3.h2, 0u);
  EXPECT_EQ(u3.h1, 1u);
}

TEST(Herr, ExtensionFieldCoefficients) {
  auto F9 = CoefficientAlgebra::finite_field(3, 2);
  Herr H(trivial_module(F9));
  EXPECT_EQ(H.h0(), 1u);
  EXPECT_EQ(H.h1(), 2u);
  EXPECT_EQ(H.h2(), 0u);
  EXPECT_EQ(H.h1_fp(), 4u);
  Herr U(unramified_module(F9, F9->field_generator()));
  EXPECT_EQ(U.h0() + U.h2(), 0u);
  EXPECT_EQ(U.h1(), 1u);
}

TEST(Herr, NonFieldCoefficientsCountOverFp) {
  auto D = CoefficientAlgebra::dual_numbers(CoefficientAlgebra::prime_field(3));
  Herr H(trivial_module(D));
  auto rep = H.report(false);
  EXPECT_TRUE(rep.over_fp);
  EXPECT_EQ(rep.h0, 2u);
  EXPECT_EQ(rep.h1, 4u);
  EXPECT_EQ(rep.h2, 0u);
  EXPECT_TRUE(rep.euler_ok);
}

TEST(Herr, RankTwoDirectSum) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  PhiGammaModule M = direct_sum(trivial_module(F3), cyclotomic_module(F3, 1));
  Dims d = dims(M);
  EXPECT_EQ(d.h0, 1u);
  EXPECT_EQ(d.h1, 4u);
  EXPECT_EQ(d.h2, 1u);
}

TEST(Herr, ReportEulerAndDuality) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  for (const PhiGammaModule& M :
       {trivial_module(F5), cyclotomic_module(F5, 1), unramified_module(F5, F5->from_int(3)), omega_power(F5, 2)}) {
    Herr H(M);
    auto rep = H.report(true);
    EXPECT_TRUE(rep.euler_ok);
    EXPECT_TRUE(rep.duality_checked);
    EXPECT_TRUE(rep.duality_ok);
    EXPECT_GE(rep.h1_window, 1);
  }
}

TEST(Herr, UnramifiedClassIsNontrivial) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  Herr H(trivial_module(F3));
  Cocycle u = unramified_class(F3);
  EXPECT_FALSE(H.is_coboundary(u));
  auto c = H.h1_coordinates(u);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_TRUE(c[0] != 0 || c[1] != 0);
}

TEST(Herr, CoboundariesHaveZeroClass) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  PhiGammaModule M = unramified_module(F5, F5->from_int(2));
  Herr H(M);
  // x = T'^{-1} + 1 + T'^2, Delta-averaged so the coboundary is Delta-invariant.
  SeriesMatrix x(F5, 1, 1);
  x(0, 0) = LaurentSeries(F5, -1, kExact, {1, 1, 0, 1});
  x = delta_average(M, x, 64);
  Cocycle c{M.act({ActionKind::Phi, 1}, x, 64) - x, M.act({ActionKind::Gamma, 1}, x, 64) - x, false};
  EXPECT_TRUE(H.is_coboundary(c));
}

TEST(Herr, NonCocycleRejected) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  Herr H(trivial_module(F3));
  Cocycle bad{SeriesMatrix::scalar(1, LaurentSeries::monomial(F3, 1)), SeriesMatrix(F3, 1, 1), false};
  try {
    H.h1_coordinates(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
}

TEST(Herr, BasisRepresentativesAreCocyclesWithIndependentClasses) {
  auto F9 = CoefficientAlgebra::finite_field(3, 2);
  PhiGammaModule M = cyclotomic_module(F9, 1);
  Herr H(M);
  auto basis = H.h1_basis();
  ASSERT_EQ(basis.size(), 2u);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    auto c = H.h1_A_coordinates(basis[s]);
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_EQ(c[j], j == s ? F9->one() : F9->zero());
  }
  // F9-linearity of coordinates.
  Elem g = F9->field_generator();
  Cocycle scaled{basis[0].a.scaled(g), basis[0].b.scaled(g), false};
  auto c = H.h1_A_coordinates(scaled);
  EXPECT_EQ(c[0], g);
  EXPECT_EQ(c[1], F9->zero());
}

TEST(Herr, H0BasisIsInvariant) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  PhiGammaModule M = direct_sum(trivial_module(F5), unramified_module(F5, F5->from_int(4)));
  Herr H(M);
  auto b = H.h0_basis(32);
  ASSERT_EQ(b.size(), 1u);
  for (ActionKind k : {ActionKind::Phi, ActionKind::Gamma, ActionKind::Delta})
    EXPECT_TRUE(agree(M.act({k, 1}, b[0], 32), b[0]));
  EXPECT_FALSE(b[0].is_zero());
}

TEST(Herr, PairingIsPerfect) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  for (const PhiGammaModule& M : {trivial_module(F5), unramified_module(F5, F5->from_int(2)), omega_power(F5, 2)}) {
    CupPairing P(M);
    auto m = P.matrix();
    EXPECT_TRUE(invertible_over(F5, m));
  }
  auto F9 = CoefficientAlgebra::finite_field(3, 2);
  CupPairing P9(trivial_module(F9));
  EXPECT_TRUE(invertible_over(F9, P9.matrix()));
}

TEST(Herr, UnramifiedClassPairsNontrivially) {
  // Nondegeneracy: the annihilator of the unramified class in H^1 of the
  // dual is a line.
  auto F3 = CoefficientAlgebra::prime_field(3);
  CupPairing P(trivial_module(F3));
  Herr& R = P.right();
  auto rb = R.h1_basis();
  Cocycle u = unramified_class(F3);
  std::vector<Elem> row;
  for (const auto& b : rb) row.push_back(P.pair(u, b));
  std::size_t nonzero = 0;
  for (const auto& e : row) nonzero += F3->is_zero(e) ? 0 : 1;
  EXPECT_GE(nonzero, 1u);
  EXPECT_EQ(rb.size(), 2u);
}

TEST(Herr, HomSpaces) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  auto one = hom_space(trivial_module(F5), trivial_module(F5));
  EXPECT_EQ(one.dim, 1u);
  ASSERT_EQ(one.basis.size(), 1u);
  auto none = hom_space(trivial_module(F5), unramified_module(F5, F5->from_int(2)));
  EXPECT_EQ(none.dim, 0u);
  auto tw = hom_space(omega_power(F5, 2), omega_power(F5, 2));
  EXPECT_EQ(tw.dim, 1u);
  PhiGammaModule S = direct_sum(trivial_module(F5), trivial_module(F5));
  EXPECT_EQ(hom_space(S, S).dim, 4u);
}

TEST(Herr, ExtensionRoundTrip) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  PhiGammaModule M1 = trivial_module(F5), M2 = cyclotomic_module(F5, 1);
  Config cfg;
  cfg.precision = 192;
  PhiGammaModule H = hom_module(M1, M2, cfg.precision);
  Herr HH(H, cfg);
  auto basis = HH.h1_basis();
  ASSERT_EQ(basis.size(), 2u);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    PhiGammaModule E = extension_from_cocycle(M1, M2, basis[s].a, basis[s].b, cfg.precision);
    ExtensionClass cls = class_of_extension(E, 1, cfg.precision);
    auto c = HH.h1_coordinates(cls.cocycle);
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_EQ(c[j], j == s ? 1u : 0u);
    Herr HE(E, cfg);
    auto rep = HE.report(true);
    EXPECT_TRUE(rep.euler_ok);
    EXPECT_TRUE(rep.duality_ok);
  }
}

TEST(Herr, ExtensionWithDeltaTwistedOffDiagonal) {
  // Conjugating the split extension by [[1, c], [0, 1]] introduces a Delta
  // entry; the recovered class must still vanish.
  auto F5 = CoefficientAlgebra::prime_field(5);
  PhiGammaModule M1 = trivial_module(F5), M2 = omega_power(F5, 2);
  PhiGammaModule S = direct_sum(M2, M1);
  SeriesMatrix U = SeriesMatrix::identity(F5, 2), Ui = SeriesMatrix::identity(F5, 2);
  U(0, 1) = LaurentSeries::constant(F5, F5->one());
  Ui(0, 1) = LaurentSeries::constant(F5, F5->from_int(-1));
  auto conj = [&](ActionKind k) { return Ui * S.matrix(k) * apply_action({k, 1}, U, 96); };
  PhiGammaModule E(conj(ActionKind::Phi), conj(ActionKind::Gamma), conj(ActionKind::Delta));
  EXPECT_FALSE(E.delta().block(0, 1, 1, 1).is_zero());
  ExtensionClass cls = class_of_extension(E, 1, 96);
  Herr HH(cls.hom);
  EXPECT_TRUE(HH.is_coboundary(cls.cocycle));
}

TEST(Herr, NonTriangularRejected) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  SeriesMatrix P = SeriesMatrix::identity(F3, 2);
  P(1, 0) = LaurentSeries::constant(F3, F3->one());
  PhiGammaModule E(P, SeriesMatrix::identity(F3, 2), SeriesMatrix::identity(F3, 2));
  try {
    class_of_extension(E, 1, 32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBlockTriangular);
  }
}

TEST(Herr, TautologicalLiftsAreUnobstructed) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  auto D = CoefficientAlgebra::dual_numbers(F3);
  for (const PhiGammaModule& M : {cyclotomic_module(F3, 1), direct_sum(trivial_module(F3), cyclotomic_module(F3, 1))}) {
    auto ob = obstruction_class(M, lift_to(M.phi(), D), lift_to(M.gamma(), D), nullptr, D);
    EXPECT_TRUE(ob.lifts_exist);
    EXPECT_EQ(ob.h2_ad, Herr(tensor(dual(M, 96), M, 96)).h2());
  }
}

TEST(Herr, ObstructionInvariantUnderReparametrization) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  auto D = CoefficientAlgebra::dual_numbers(F3);
  PhiGammaModule M = direct_sum(trivial_module(F3), cyclotomic_module(F3, 1));
  PhiGammaModule ad = tensor(dual(M, 96), M, 96);
  SeriesMatrix X(F3, 4, 1), Y(F3, 4, 1);
  X(1, 0) = LaurentSeries(F3, -1, kExact, {1, 2});
  Y(2, 0) = LaurentSeries(F3, 0, kExact, {2, 0, 1});
  X = delta_average(ad, X, 96);
  Y = delta_average(ad, Y, 96);
  Elem eps = D->basis(1);
  auto one_plus = [&](const SeriesMatrix& v, int sign) {
    SeriesMatrix m = SeriesMatrix::identity(D, 2);
    SeriesMatrix u = lift_to(unvec(v, 2, 2), D).scaled(D->scale(sign < 0 ? 2 : 1, eps));
    return m + u;
  };
  SeriesMatrix Pl = one_plus(X, 1) * lift_to(M.phi(), D);
  SeriesMatrix Gl = one_plus(Y, -1) * lift_to(M.gamma(), D);
  auto ob = obstruction_class(M, Pl, Gl, nullptr, D);
  EXPECT_TRUE(ob.lifts_exist);
}

TEST(Herr, LiftSpaceDimension) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  EXPECT_EQ(lift_space_dim(omega_power(F5, 2), 1), 2u);
  EXPECT_EQ(lift_space_dim(omega_power(F5, 2), 3), 6u);
  EXPECT_EQ(lift_space_dim(omega_power(F5, 2), 0), 0u);
}

TEST(Herr, SaturatedConjugateOfTrivialRankTwo) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  PhiGammaModule T = trivial_module(F3, 2);
  SeriesMatrix U = SeriesMatrix::identity(F3, 2), Ui = SeriesMatrix::identity(F3, 2);
  U(0, 1) = LaurentSeries::monomial(F3, -2);
  Ui(0, 1) = LaurentSeries(F3, -2, kExact, {2});
  auto conj = [&](ActionKind k) { return Ui * T.matrix(k) * apply_action({k, 1}, U, 96); };
  PhiGammaModule M(conj(ActionKind::Phi), conj(ActionKind::Gamma), conj(ActionKind::Delta));
  Dims d = dims(M);
  EXPECT_EQ(d.h0, 2u);
  EXPECT_EQ(d.h1, 4u);
  EXPECT_EQ(d.h2, 0u);
}

TEST(Herr, DimensionsStableUnderDoubledPrecision) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  PhiGammaModule M = direct_sum(unramified_module(F5, F5->from_int(3)), cyclotomic_module(F5, 1));
  Config cfg;
  Dims a = dims(M, cfg), b = dims(M, cfg.doubled());
  EXPECT_EQ(a.h0, b.h0);
  EXPECT_EQ(a.h1, b.h1);
  EXPECT_EQ(a.h2, b.h2);
}

TEST(Herr, PhiKernel) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  Herr T(trivial_module(F3));
  EXPECT_EQ(T.phi_kernel_fp(), 1u);
  auto k = T.phi_kernel_basis(16);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE(agree(k[0], SeriesMatrix::scalar(1, LaurentSeries::constant(F3, F3->one())).truncated(16)));
  // Phi = 1 for A(1): only the Delta-action differs.
  Herr C(cyclotomic_module(F3, 1));
  EXPECT_EQ(C.phi_kernel_fp(), 1u);
  EXPECT_EQ(C.h0(), 0u);
  Herr U(unramified_module(F3, F3->from_int(2)));
  EXPECT_EQ(U.phi_kernel_fp(), 0u);
}

TEST(Herr, TrivialH0IsConstantOne) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  Herr H(trivial_module(F3));
  auto b = H.h0_basis(24);
  ASSERT_EQ(b.size(), 1u);
  ASSERT_FALSE(b[0](0, 0).is_zero());
  // Any nonzero multiple of 1 spans; normalize by the constant term.
  Elem c = b[0](0, 0).coeff(0);
  EXPECT_TRUE(agree(b[0].scaled(F3->inverse(c)), SeriesMatrix::scalar(1, LaurentSeries::constant(F3, F3->one())).truncated(24)));
}

TEST(Herr, PhiKernelWindowBoundIsNotAttained) {
  // The window [-m0, 1) is one step wider than needed: kernel vectors vanish
  // in the lowest window degree.
  auto F5 = CoefficientAlgebra::prime_field(5);
  for (const PhiGammaModule& M : {trivial_module(F5, 2), cyclotomic_module(F5, 1),
                                  direct_sum(trivial_module(F5), omega_power(F5, 3))}) {
    Herr H(M);
    const Frame& fr = H.frame();
    for (const auto& x : H.phi_kernel_basis(16)) {
      SeriesMatrix y = fr.Binv * x;
      EXPECT_GT(y.valuation(), -fr.m0);
    }
  }
}

TEST(Herr, CoboundaryOfCoboundaryVanishes) {
  // d1(d0 x) = (gamma-1)(phi-1)x - (phi-1)(gamma-1)x = 0.
  auto F5 = CoefficientAlgebra::prime_field(5);
  std::mt19937_64 rng(11);
  for (const PhiGammaModule& M : {unramified_module(F5, F5->from_int(3)), omega_power(F5, 2),
                                  direct_sum(trivial_module(F5), cyclotomic_module(F5, 1))}) {
    for (int trial = 0; trial < 5; ++trial) {
      SeriesMatrix x(F5, M.rank(), 1);
      for (std::size_t i = 0; i < M.rank(); ++i) {
        std::vector<u32> cs(6);
        for (auto& c : cs) c = static_cast<u32>(rng() % 5);
        x(i, 0) = LaurentSeries(F5, -3, kExact, cs);
      }
      const i64 P = 40;
      SeriesMatrix a = M.act({ActionKind::Phi, 1}, x, P) - x;
      SeriesMatrix b = M.act({ActionKind::Gamma, 1}, x, P) - x;
      SeriesMatrix d1 = (M.act({ActionKind::Gamma, 1}, a, P) - a) - (M.act({ActionKind::Phi, 1}, b, P) - b);
      EXPECT_TRUE(d1.truncated(P - 8).is_zero());
    }
  }
}

TEST(Herr, PsiComparisonIsChainMap) {
  // (1, (a, b) -> (-psi a, b), c -> -psi c) intertwines the phi- and
  // psi-differentials.
  auto F3 = CoefficientAlgebra::prime_field(3);
  std::mt19937_64 rng(5);
  PhiGammaModule M = direct_sum(unramified_module(F3, F3->from_int(2)), cyclotomic_module(F3, 1));
  const i64 P = 60;
  auto rnd = [&](i64 v) {
    SeriesMatrix x(F3, 2, 1);
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<u32> cs(8);
      for (auto& c : cs) c = static_cast<u32>(rng() % 3);
      x(i, 0) = LaurentSeries(F3, v, kExact, cs);
    }
    return x;
  };
  auto g1 = [&](const SeriesMatrix& y) { return M.act({ActionKind::Gamma, 1}, y, P) - y; };
  auto f1 = [&](const SeriesMatrix& y) { return M.act({ActionKind::Phi, 1}, y, P) - y; };
  auto psi = [&](const SeriesMatrix& y) { return psi_on_module(M, y, P); };
  const i64 Q = 12;
  for (int trial = 0; trial < 4; ++trial) {
    SeriesMatrix x = rnd(-2);
    // degree 0 -> 1
    EXPECT_TRUE(agree((psi(f1(x)).scaled(F3->from_int(-1))).truncated(Q), (psi(x) - x).truncated(Q)));
    // degree 1 -> 2
    SeriesMatrix a = rnd(-4), b = rnd(-1);
    SeriesMatrix lhs = psi(g1(a) - f1(b)).scaled(F3->from_int(-1));
    SeriesMatrix pa = psi(a).scaled(F3->from_int(-1));
    SeriesMatrix rhs = g1(pa) + b - psi(b);
    EXPECT_TRUE(agree(lhs.truncated(Q), rhs.truncated(Q)));
  }
}

TEST(Herr, ClassOfUnipotentExtension) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  SeriesMatrix P = SeriesMatrix::identity(F3, 2);
  P(0, 1) = LaurentSeries::constant(F3, F3->one());
  PhiGammaModule E(P, SeriesMatrix::identity(F3, 2), SeriesMatrix::identity(F3, 2));
  ExtensionClass cls = class_of_extension(E, 1, 32);
  Herr H(cls.hom);
  auto c = H.h1_coordinates(cls.cocycle);
  EXPECT_TRUE(c == H.h1_coordinates(unramified_class(F3)));
  EXPECT_FALSE(H.is_coboundary(cls.cocycle));
}

TEST(Herr, PairingWithZeroVanishes) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  CupPairing P(unramified_module(F5, F5->from_int(2)));
  auto lb = P.left().h1_basis();
  ASSERT_FALSE(lb.empty());
  Cocycle r0 = P.right().h1_basis().at(0);
  Cocycle zero{r0.a.scaled(F5->zero()), r0.b.scaled(F5->zero()), false};
  EXPECT_TRUE(F5->is_zero(P.pair(lb[0], zero)));
}

TEST(Herr, HomOfDistinctUnramifiedIsZero) {
  auto F5 = CoefficientAlgebra::prime_field(5);
  EXPECT_EQ(hom_space(unramified_module(F5, F5->from_int(2)), unramified_module(F5, F5->from_int(3))).dim, 0u);
  PhiGammaModule M = direct_sum(unramified_module(F5, F5->from_int(2)), omega_power(F5, 3));
  EXPECT_GE(hom_space(M, M).dim, 1u);
}

TEST(Herr, LiftSpaceDimensionRankOne) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  EXPECT_EQ(lift_space_dim(trivial_module(F3), 1), 2u);
  EXPECT_EQ(lift_space_dim(unramified_module(F3, F3->from_int(2)), 1), 2u);
}

TEST(Herr, RankOneTrivialLiftUnobstructed) {
  auto F3 = CoefficientAlgebra::prime_field(3);
  auto D = CoefficientAlgebra::dual_numbers(F3);
  PhiGammaModule M = trivial_module(F3);
  SeriesMatrix Pl = lift_to(M.phi(), D);
  Pl(0, 0) = LaurentSeries::constant(D, D->add(D->one(), D->basis(1)));
  auto ob = obstruction_class(M, Pl, lift_to(M.gamma(), D), nullptr, D);
  EXPECT_TRUE(ob.lifts_exist);
  EXPECT_EQ(ob.h2_ad, 0u);
}
