#include <gtest/gtest.h>

#include <random>

#include "pgm/errors.hpp"
#include "pgm/laurent.hpp"

using namespace pgm;

namespace {

LaurentSeries poly(const AlgPtr& A, i64 val, std::vector<i64> c, i64 prec = kExact) {
  return LaurentSeries::from_ints(A, val, c, prec);
}

LaurentSeries random_series(const AlgPtr& A, std::mt19937_64& rng, i64 val, i64 len, i64 prec) {
  std::vector<u32> flat(static_cast<std::size_t>(len * A->dim()));
  for (auto& x : flat) x = static_cast<u32>(rng() % A->p());
  return LaurentSeries(A, val, prec, flat);
}

// The psi oracle: write f = sum_{i<p} (1+T')^i phi(x_i) by solving a linear
// system over F_p and return x_0.  f must be a polynomial in T' of degree < W.
std::vector<u32> psi_by_linear_solve(const std::vector<u32>& f, u32 p) {
  const std::size_t W = f.size();
  const std::size_t D = W / p + 1;  // each x_i has degree < D
  const std::size_t E = p * D + p;  // exponents covered
  // Column (i, k) is (1+T')^i * T'^{pk}.
  FpMat sys(E, p * D, p);
  for (u32 i = 0; i < p; ++i) {
    // binomial coefficients of (1+T')^i
    std::vector<u32> b(i + 1, 0);
    b[0] = 1;
    for (u32 t = 1; t <= i; ++t)
      for (u32 s = t; s > 0; --s) b[s] = (b[s] + b[s - 1]) % p;
    for (std::size_t k = 0; k < D; ++k)
      for (u32 s = 0; s <= i; ++s) sys.at(p * k + s, i * D + k) = b[s];
  }
  FpMat rhs(E, 1, p);
  for (std::size_t e = 0; e < W; ++e) rhs.at(e, 0) = f[e];
  auto x = solve(sys, rhs);
  EXPECT_TRUE(x.has_value());
  std::vector<u32> out(D);
  for (std::size_t k = 0; k < D; ++k) out[k] = x->at(k, 0);
  return out;
}

}  // namespace

TEST(Laurent, MulExamples) {
  auto A = CoefficientAlgebra::prime_field(3);
  auto f = poly(A, -1, {1, 1});
  auto g = poly(A, 1, {1, -1});
  auto h = f * g;
  EXPECT_TRUE(agree(h, poly(A, 0, {1, 0, -1})));
  EXPECT_EQ(h.valuation(), 0);
  EXPECT_TRUE(h.exact());
  auto one_plus = poly(A, 0, {1, 1});
  auto cube = one_plus * (one_plus * one_plus);
  EXPECT_TRUE(agree(cube, poly(A, 0, {1, 0, 0, 1})));
  // identity keeps the window
  auto s = poly(A, 2, {1, 2, 1}, 9);
  auto s1 = s * LaurentSeries::one(A);
  EXPECT_EQ(s1.valuation(), 2);
  EXPECT_EQ(s1.precision(), 9);
}

TEST(Laurent, MulWindow) {
  auto A = CoefficientAlgebra::prime_field(5);
  auto f = poly(A, -2, {1, 3, 4}, 5);
  auto g = poly(A, 1, {2, 1}, 7);
  auto h = f * g;
  EXPECT_EQ(h.valuation(), -1);
  EXPECT_EQ(h.precision(), std::min<i64>(5 + 1, 7 - 2));
}

TEST(Laurent, InvertExamples) {
  auto A = CoefficientAlgebra::prime_field(3);
  auto inv = invert(poly(A, 0, {1, 1}), 12);
  std::vector<i64> alt;
  for (int n = 0; n < 12; ++n) alt.push_back(n % 2 ? -1 : 1);
  EXPECT_TRUE(agree(inv, poly(A, 0, alt)));
  EXPECT_EQ(inv.precision(), 12);
  auto tinv = invert(LaurentSeries::monomial(A, 1));
  EXPECT_TRUE(tinv.exact());
  EXPECT_EQ(tinv.valuation(), -1);
  // (2+T')^{-1} over F_3 is 2(1+2T')^{-1} = 2 + 2T' + 2T'^2 + ...
  auto i2 = invert(poly(A, 0, {2, 1}), 10);
  EXPECT_TRUE(agree(i2, poly(A, 0, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2})));
  EXPECT_TRUE(agree(i2 * poly(A, 0, {2, 1}), LaurentSeries::one(A)));
  EXPECT_THROW(invert(LaurentSeries::zero(A, 4)), Error);
}

TEST(Laurent, InvertNilpotentLeading) {
  auto A = CoefficientAlgebra::dual_numbers(CoefficientAlgebra::prime_field(3));
  // eps*T'^{-1} + 1 is a unit of A((T')).
  std::vector<u32> flat = {0, 1, 1, 0};
  LaurentSeries f(A, -1, kExact, flat);
  auto g = invert(f, 20);
  EXPECT_TRUE(agree(f * g, LaurentSeries::one(A)));
}

TEST(Laurent, RelativePrecisionPreservedByInverse) {
  auto A = CoefficientAlgebra::finite_field(3, 2);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto f = random_series(A, rng, -3, 15, 12);
    if (!f.leading_is_unit() || f.valuation() != -3) continue;
    auto g = invert(f);
    EXPECT_EQ(g.precision() - g.valuation(), f.precision() - f.valuation());
    auto prod = f * g;
    EXPECT_TRUE(agree(prod, LaurentSeries::one(A)));
  }
}

TEST(Laurent, SubstituteExamples) {
  auto A = CoefficientAlgebra::prime_field(3);
  auto r = substitute(LaurentSeries::monomial(A, 2), LaurentSeries::monomial(A, 3));
  EXPECT_TRUE(agree(r, LaurentSeries::monomial(A, 6)));
  EXPECT_TRUE(r.exact());
  auto s = substitute(LaurentSeries::monomial(A, -1), poly(A, 1, {1, 1}), 10);
  std::vector<i64> alt;
  for (int n = 0; n < 11; ++n) alt.push_back(n % 2 ? -1 : 1);
  EXPECT_TRUE(agree(s, poly(A, -1, alt)));
  EXPECT_EQ(s.precision(), 10);
  auto c = substitute(LaurentSeries::one(A), poly(A, 1, {1, 2, 1}, 5));
  EXPECT_TRUE(agree(c, LaurentSeries::one(A)));
  EXPECT_THROW(substitute(LaurentSeries::one(A), LaurentSeries::one(A)), Error);
}

TEST(Laurent, GammaImages) {
  auto A = CoefficientAlgebra::prime_field(3);
  auto g = gamma_image(A, {ActionKind::Gamma, 1}, 20);
  EXPECT_TRUE(agree(g, poly(A, 1, {1, 0, 1, 1})));
  EXPECT_TRUE(g.exact());
  // Teichmuller lift of 2 is -1 for p = 3.
  auto d = gamma_image(A, {ActionKind::Delta, 1}, 12);
  EXPECT_TRUE(agree(d, poly(A, 1, {2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2})));
  EXPECT_EQ(d.precision(), 12);
  auto id = gamma_image(A, {ActionKind::Delta, 0}, 12);
  EXPECT_TRUE(agree(id, LaurentSeries::monomial(A, 1)));
  // p = 5: the image of delta agrees with the binomial series of the lift.
  auto A5 = CoefficientAlgebra::prime_field(5);
  auto d5 = gamma_image(A5, {ActionKind::Delta, 1}, 40);
  PadicInt c = action_exponent(5, {ActionKind::Delta, 1}, 10);
  for (i64 n = 1; n < 40; ++n) EXPECT_EQ(d5.coeff(n)[0], padic_binomial(c, static_cast<u64>(n)));
}

TEST(Laurent, PsiExamples) {
  auto A = CoefficientAlgebra::prime_field(3);
  EXPECT_TRUE(agree(psi(LaurentSeries::monomial(A, 4)), poly(A, 1, {2})));
  EXPECT_TRUE(agree(psi(LaurentSeries::one(A)), LaurentSeries::one(A)));
  EXPECT_TRUE(agree(psi(LaurentSeries::monomial(A, -3)), LaurentSeries::monomial(A, -1)));
  EXPECT_EQ(psi(poly(A, 0, {1}, 10)).precision(), 3);
}

TEST(Laurent, PsiClosedFormulaMatchesLinearSolve) {
  for (u32 p : {3u, 5u}) {
    auto A = CoefficientAlgebra::prime_field(p);
    std::mt19937_64 rng(p);
    for (std::size_t W = 1; W <= 30; ++W) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<u32> f(W);
        for (auto& x : f) x = static_cast<u32>(rng() % p);
        auto oracle = psi_by_linear_solve(f, p);
        // shift by a multiple of p to cover negative exponents as well
        i64 s = static_cast<i64>(trial) - 1;
        LaurentSeries fs(A, static_cast<i64>(p) * s, kExact, f);
        auto got = psi(fs);
        for (std::size_t k = 0; k < oracle.size(); ++k)
          EXPECT_EQ(got.coeff(static_cast<i64>(k) + s)[0], oracle[k]) << "p=" << p << " W=" << W;
      }
    }
  }
}

TEST(Laurent, PsiPhiIdentities) {
  for (u32 p : {3u, 5u}) {
    for (int deg : {1, 2}) {
      auto A = CoefficientAlgebra::finite_field(p, deg);
      std::mt19937_64 rng(11 * p + deg);
      for (int t = 0; t < 25; ++t) {
        auto a = random_series(A, rng, -4, 20, 16);
        auto b = random_series(A, rng, -7, 30, 23);
        EXPECT_TRUE(agree(psi(phi(a)), a));
        EXPECT_TRUE(agree(psi(phi(a) * b), a * psi(b)));
        // phi is reindexing by p
        auto pa = phi(a);
        for (i64 e = pa.valuation(); e < pa.precision(); ++e)
          EXPECT_EQ(pa.coeff(e), e % static_cast<i64>(p) == 0 ? a.coeff(e / static_cast<i64>(p)) : A->zero());
      }
    }
  }
}

TEST(Laurent, ActionsCommuteAndPreserveValuation) {
  for (u32 p : {3u, 5u}) {
    auto A = CoefficientAlgebra::prime_field(p);
    const i64 N = 40;
    auto T = LaurentSeries::monomial(A, 1);
    RingAction ph{ActionKind::Phi, 1}, ga{ActionKind::Gamma, 1}, de{ActionKind::Delta, 1};
    auto pg = apply_action(ph, apply_action(ga, T, N), N);
    auto gp = apply_action(ga, apply_action(ph, T, N), N);
    EXPECT_TRUE(agree(pg, gp));
    auto gd = apply_action(ga, apply_action(de, T, N), N);
    auto dg = apply_action(de, apply_action(ga, T, N), N);
    EXPECT_TRUE(agree(gd, dg));
    EXPECT_GE(std::min(gd.precision(), dg.precision()), N);
    auto x = T;
    for (u32 j = 0; j + 1 < p; ++j) x = apply_action(de, x, N);
    EXPECT_TRUE(agree(x, T));
    EXPECT_GE(x.precision(), N);
    // delta^j agrees with j-fold delta
    auto d2 = apply_action({ActionKind::Delta, 2}, T, N);
    auto dd = apply_action(de, apply_action(de, T, N), N);
    EXPECT_TRUE(agree(d2, dd));
    std::mt19937_64 rng(p);
    for (int t = 0; t < 10; ++t) {
      auto f = random_series(A, rng, -5, 20, 15);
      for (auto act : {ph, ga, de}) EXPECT_EQ(apply_action(act, f, 60).valuation(),
                                              act.kind == ActionKind::Phi ? p * f.valuation() : f.valuation());
    }
  }
}

TEST(Laurent, ExactnessUnderPrecisionIncrease) {
  auto A = CoefficientAlgebra::finite_field(5, 2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto big = random_series(A, rng, -2, 40, 38);
    auto other = random_series(A, rng, 1, 40, 41);
    if (!big.leading_is_unit()) continue;
    auto small = big.truncated(20);
    EXPECT_TRUE(agree(invert(small), invert(big)));
    EXPECT_TRUE(agree(small * other, big * other));
    EXPECT_TRUE(agree(psi(small), psi(big)));
    RingAction de{ActionKind::Delta, 3};
    EXPECT_TRUE(agree(apply_action(de, small, 80), apply_action(de, big, 80)));
  }
}

TEST(Laurent, TabulatedActionsMatchSubstitution) {
  for (u32 p : {3u, 5u}) {
    auto A = CoefficientAlgebra::finite_field(p, 2);
    std::mt19937_64 rng(11 + p);
    for (int trial = 0; trial < 5; ++trial) {
      i64 v = static_cast<i64>(rng() % 9) - 4;
      std::vector<u32> flat(2 * 12);
      for (auto& x : flat) x = static_cast<u32>(rng() % p);
      LaurentSeries f(A, v, 20, flat);
      for (int j = 1; j < static_cast<int>(p) - 1; ++j) {
        RingAction d{ActionKind::Delta, j};
        auto img = gamma_image(A, d, 40);
        EXPECT_TRUE(agree(apply_action(d, f, 20), substitute(f, img, 20)));
        EXPECT_EQ(apply_action(d, f, 20).precision(), 20);
      }
      RingAction g{ActionKind::Gamma, 1};
      EXPECT_TRUE(agree(apply_action(g, f, 15), substitute(f, gamma_image(A, g, 0), 15)));
    }
  }
}
