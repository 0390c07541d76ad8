#include "pgm/suite.hpp"

#include <random>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

Elem random_elem(std::mt19937_64& rng, const AlgPtr& A, bool nonzero) {
  while (true) {
    Elem e(static_cast<std::size_t>(A->dim()));
    for (auto& x : e) x = static_cast<u32>(rng() % A->p());
    if (!nonzero || !A->is_zero(e)) return e;
  }
}

CharacterLabel random_label(std::mt19937_64& rng, const AlgPtr& A) {
  CharacterLabel l;
  l.n = static_cast<i64>(rng() % (A->p() - 1));
  l.a = random_elem(rng, A, true);
  return l;
}

}  // namespace

RandomModule random_module(u64 seed, const AlgPtr& A, std::size_t d_max, const Config& cfg_in) {
  // Build at a higher precision than the analysis uses: extension matrices
  // carry the poles of the cocycle representatives.
  Config cfg = cfg_in;
  cfg.precision = 3 * cfg_in.precision;
  std::mt19937_64 rng(seed);
  RandomModule out;
  out.rank = 1 + static_cast<std::size_t>(rng() % d_max);
  out.labels.push_back(random_label(rng, A));
  PhiGammaModule E = from_character(A, out.labels[0]);
  for (std::size_t k = 1; k < out.rank; ++k) {
    CharacterLabel l = random_label(rng, A);
    out.labels.push_back(l);
    PhiGammaModule chi = from_character(A, l);
    Herr H(hom_module(chi, E, derived_precision(E, cfg)), cfg);
    auto basis = H.h1_basis();
    SeriesMatrix a(A, E.rank(), 1), b(A, E.rank(), 1);
    for (const auto& c : basis) {
      Elem lam = random_elem(rng, A, false);
      a = a + c.a.scaled(lam);
      b = b + c.b.scaled(lam);
    }
    E = extension_from_cocycle(chi, E, a, b, cfg.precision);
  }
  out.module = E;
  return out;
}

u64 case_seed(u64 seed, std::size_t index) {
  std::seed_seq seq{static_cast<u32>(seed), static_cast<u32>(seed >> 32), static_cast<u32>(index)};
  std::vector<u32> w(2);
  seq.generate(w.begin(), w.end());
  return (static_cast<u64>(w[0]) << 32) | w[1];
}

SuiteCase run_case(const SuiteOptions& opt, std::size_t index) {
  SuiteCase c;
  c.index = index;
  c.seed = case_seed(opt.seed, index);
  AlgPtr A = opt.q_degree == 1 ? CoefficientAlgebra::prime_field(opt.p) : CoefficientAlgebra::finite_field(opt.p, opt.q_degree);
  try {
    RandomModule rm = random_module(c.seed, A, opt.d_max, opt.cfg);
    c.rank = rm.rank;
    c.labels = rm.labels;
    const PhiGammaModule& M = rm.module;
    Herr H(M, opt.cfg);
    c.h0 = H.h0();
    c.h1 = H.h1();
    c.h2 = H.h2();
    c.euler_ok = static_cast<i64>(c.h0) - static_cast<i64>(c.h1) + static_cast<i64>(c.h2) == -static_cast<i64>(c.rank);
    Herr D(cartier_dual(M, derived_precision(M, opt.cfg)), opt.cfg);
    c.dual_h0 = D.h0();
    c.dual_h1 = D.h1();
    c.dual_h2 = D.h2();
    c.duality_ok = c.h0 == c.dual_h2 && c.h1 == c.dual_h1 && c.h2 == c.dual_h0;
    bool ok = c.euler_ok && c.duality_ok;
    if (opt.check_pairing) {
      CupPairing P(M, opt.cfg);
      bool inv = invertible_over(A, P.matrix());
      c.pairing = inv ? "invertible" : "singular";
      ok = ok && inv;
    }
    if (opt.check_base_change && A->dim() == 1) {
      AlgPtr B = CoefficientAlgebra::finite_field(opt.p, 2);
      Herr HB(base_change(M, B), opt.cfg);
      bool same = HB.h0() == c.h0 && HB.h1() == c.h1 && HB.h2() == c.h2;
      c.base_change = same ? "stable" : "changed";
      ok = ok && same;
    }
    if (opt.check_doubled) {
      Herr H2(M, opt.cfg.doubled());
      bool same = H2.h0() == c.h0 && H2.h1() == c.h1 && H2.h2() == c.h2;
      c.doubled = same ? "stable" : "changed";
      ok = ok && same;
    }
    if (opt.check_psi) {
      bool all = true;
      for (int n = 1; n <= 3; ++n) all = all && check_psi_bounds(M, n, opt.cfg, nullptr);
      c.psi_bounds = all ? "hold" : "violated";
      ok = ok && all;
    }
    c.ok = ok;
  } catch (const Error& e) {
    c.ok = false;
    c.error = e.what();
  }
  return c;
}

SuiteReport run_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.options = opt;
  for (std::size_t i = 0; i < opt.count; ++i) {
    rep.cases.push_back(run_case(opt, i));
    rep.all_ok = rep.all_ok && rep.cases.back().ok;
  }
  return rep;
}

}  // namespace pgm
