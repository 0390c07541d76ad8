#include <gtest/gtest.h>

#include "pgm/coeffs.hpp"
#include "pgm/errors.hpp"

using namespace pgm;

namespace {

// Plain integer binomial for small arguments.
u64 int_binomial(u64 c, u64 n) {
  if (n > c) return 0;
  u64 r = 1;
  for (u64 i = 0; i < n; ++i) r = r * (c - i) / (i + 1);
  return r;
}

}  // namespace

TEST(Teichmuller, FrozenValues) {
  EXPECT_EQ(teichmuller(3, 2, 3).value, 26u);
  EXPECT_EQ(teichmuller(3, 1, 5).value, 1u);
  EXPECT_EQ(teichmuller(5, 2, 2).value, 7u);
  EXPECT_THROW(teichmuller(3, 0, 2), Error);
}

TEST(Teichmuller, RootOfUnityAndMultiplicative) {
  for (u32 p : {3u, 5u, 7u, 11u}) {
    for (int k = 1; k <= 8; ++k) {
      u64 pk = pow_u64(p, k);
      for (u32 a = 1; a < p; ++a) {
        u64 t = teichmuller(p, a, k).value;
        EXPECT_EQ(t % p, a);
        u64 x = 1;
        for (u32 i = 0; i + 1 < p; ++i) x = static_cast<u64>((static_cast<unsigned __int128>(x) * t) % pk);
        EXPECT_EQ(x, 1u % pk);
        for (u32 b = 1; b < p; ++b) {
          u64 tb = teichmuller(p, b, k).value;
          u64 tab = teichmuller(p, static_cast<u32>(static_cast<u64>(a) * b % p), k).value;
          EXPECT_EQ(static_cast<u64>(static_cast<unsigned __int128>(t) * tb % pk), tab);
        }
      }
    }
  }
}

TEST(PadicBinomial, FrozenValues) {
  EXPECT_EQ(padic_binomial({3, 3, 26}, 2), 1u);
  EXPECT_EQ(padic_binomial({3, 3, 4}, 2), 0u);
  EXPECT_EQ(padic_binomial({3, 1, 17}, 0), 1u);
  // v_3(3!) = 1 needs k >= 2.
  EXPECT_THROW(padic_binomial({3, 1, 5}, 3), Error);
}

TEST(PadicBinomial, AgreesWithIntegerBinomialAndLucas) {
  for (u32 p : {3u, 5u}) {
    int k = 12;
    u64 pk = pow_u64(p, k);
    for (u64 c = 0; c < 60; ++c) {
      for (u64 n = 0; n < 20; ++n) {
        if (vp_factorial(p, n) >= k) continue;
        u32 got = padic_binomial({p, k, c % pk}, n);
        EXPECT_EQ(got, int_binomial(c, n) % p) << "c=" << c << " n=" << n;
        EXPECT_EQ(got, lucas_binomial(padic_digits({p, k, c}), n, p));
      }
    }
    // Negative and Teichmuller exponents against Lucas on the digit expansion.
    for (u32 a = 1; a < p; ++a) {
      PadicInt t = teichmuller(p, a, k);
      auto digs = padic_digits(t);
      for (u64 n = 0; n < 40; ++n) {
        if (vp_factorial(p, n) >= k) continue;
        EXPECT_EQ(padic_binomial(t, n), lucas_binomial(digs, n, p)) << "a=" << a << " n=" << n;
      }
    }
  }
}

TEST(PadicBinomial, Pascal) {
  u32 p = 3;
  int k = 10;
  u64 pk = pow_u64(p, k);
  for (u64 c = 1; c < 200; c += 7) {
    PadicInt cc{p, k, (pk - c) % pk};  // negative integers
    PadicInt cm{p, k, (pk - c - 1) % pk};
    for (u64 n = 1; n < 15; ++n) {
      if (vp_factorial(p, n) >= k) continue;
      u32 lhs = padic_binomial(cc, n);
      u32 rhs = (padic_binomial(cm, n) + padic_binomial(cm, n - 1)) % p;
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Algebra, PrimeAndExtensionFields) {
  auto f3 = CoefficientAlgebra::prime_field(3);
  EXPECT_EQ(f3->dim(), 1);
  EXPECT_TRUE(f3->is_field());
  auto f9 = CoefficientAlgebra::finite_field(3, 2);
  EXPECT_EQ(f9->dim(), 2);
  EXPECT_EQ(f9->residue_degree(), 2);
  EXPECT_TRUE(f9->max_ideal().empty());
  // The unit group is cyclic of order 8 with the chosen generator.
  auto units = f9->field_units();
  ASSERT_EQ(units.size(), 8u);
  for (const auto& u : units) {
    auto inv = f9->inverse(u);
    EXPECT_EQ(f9->mul(u, inv), f9->one());
  }
  EXPECT_EQ(f9->pow(f9->field_generator(), 8), f9->one());
  EXPECT_NE(f9->pow(f9->field_generator(), 4), f9->one());
  auto f25 = CoefficientAlgebra::finite_field(5, 2);
  EXPECT_EQ(f25->field_units().size(), 24u);
}

TEST(Algebra, DualNumbers) {
  auto f3 = CoefficientAlgebra::prime_field(3);
  auto a = CoefficientAlgebra::dual_numbers(f3);
  EXPECT_EQ(a->dim(), 2);
  EXPECT_FALSE(a->is_field());
  EXPECT_EQ(a->max_ideal(), std::vector<int>{1});
  Elem eps = a->basis(1);
  EXPECT_TRUE(a->is_zero(a->mul(eps, eps)));
  EXPECT_FALSE(a->is_unit(eps));
  Elem u = {2, 1};
  EXPECT_TRUE(a->is_unit(u));
  EXPECT_EQ(a->mul(u, a->inverse(u)), a->one());
  EXPECT_EQ(a->nilpotency_index(), 2);
  EXPECT_THROW(a->inverse(eps), Error);
}

TEST(Algebra, LocalAlgebraValidation) {
  // F_3[e]/(e^2) from a table.
  std::vector<u32> t = {1, 0, 0, 1, 0, 1, 0, 0};
  auto a = CoefficientAlgebra::local_algebra(3, 2, t, {1});
  EXPECT_EQ(a->residue_degree(), 1);
  // F_3 x F_3 (idempotents) is not local.
  std::vector<u32> split = {1, 0, 0, 0, 0, 0, 0, 1};
  EXPECT_THROW(CoefficientAlgebra::local_algebra(3, 2, split, {}), Error);
  // Non-commutative table.
  std::vector<u32> nc(27, 0);
  auto at = [&](int i, int j, int k) -> u32& { return nc[(i * 3 + j) * 3 + k]; };
  for (int j = 0; j < 3; ++j) at(0, j, j) = at(j, 0, j) = 1;
  at(1, 2, 1) = 1;
  EXPECT_THROW(CoefficientAlgebra::local_algebra(3, 3, nc, {1, 2}), Error);
  // Declared maximal ideal not nilpotent: F_3[e]/(e^2 - 1).
  std::vector<u32> bad = {1, 0, 0, 1, 0, 1, 1, 0};
  EXPECT_THROW(CoefficientAlgebra::local_algebra(3, 2, bad, {1}), Error);
}

TEST(Algebra, UnitIffResidueNonzero) {
  auto f9 = CoefficientAlgebra::finite_field(3, 2);
  auto a = CoefficientAlgebra::dual_numbers(f9);
  for (const auto& x : a->elements()) {
    bool residue_nonzero = x[0] != 0 || x[1] != 0;
    EXPECT_EQ(a->is_unit(x), residue_nonzero);
    if (residue_nonzero) EXPECT_EQ(a->mul(x, a->inverse(x)), a->one());
  }
}
