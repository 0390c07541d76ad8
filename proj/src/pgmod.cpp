#include "pgm/pgmod.hpp"

#include <algorithm>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

void check_square(const SeriesMatrix& m, std::size_t d, const char* what) {
  if (m.rows() != d || m.cols() != d) fail(ErrorKind::Malformed, std::string(what) + " matrix has the wrong shape");
}

Elem cyclotomic_delta(const AlgPtr& A, i64 n) {
  const u32 p = A->p();
  i64 e = ((n % static_cast<i64>(p - 1)) + static_cast<i64>(p - 1)) % static_cast<i64>(p - 1);
  return A->from_int(mod_pow(primitive_root(p), static_cast<u64>(e), p));
}

SeriesMatrix constant_matrix(const AlgPtr& A, const Elem& c) {
  return SeriesMatrix::scalar(1, LaurentSeries::constant(A, c));
}

}  // namespace

PhiGammaModule::PhiGammaModule(SeriesMatrix phi, SeriesMatrix gamma, SeriesMatrix delta)
    : phi_(std::move(phi)), gamma_(std::move(gamma)), delta_(std::move(delta)) {
  const std::size_t d = phi_.rows();
  if (d == 0) fail(ErrorKind::Malformed, "module of rank 0");
  check_square(phi_, d, "phi");
  check_square(gamma_, d, "gamma");
  check_square(delta_, d, "delta");
  if (!gamma_.algebra()->same_as(*phi_.algebra()) || !delta_.algebra()->same_as(*phi_.algebra()))
    fail(ErrorKind::Malformed, "matrices over different coefficient algebras");
}

const SeriesMatrix& PhiGammaModule::matrix(ActionKind k) const {
  switch (k) {
    case ActionKind::Phi: return phi_;
    case ActionKind::Gamma: return gamma_;
    default: return delta_;
  }
}

i64 PhiGammaModule::precision() const { return std::min({phi_.precision(), gamma_.precision(), delta_.precision()}); }

SeriesMatrix PhiGammaModule::act(const RingAction& a, const SeriesMatrix& x, i64 target) const {
  if (a.kind == ActionKind::Phi) return (phi_ * apply_action(a, x, target)).truncated(target);
  int times = a.power;
  if (a.kind == ActionKind::Delta) {
    const int n = static_cast<int>(p() - 1);
    times = ((times % n) + n) % n;
  }
  if (times < 0) fail(ErrorKind::Unsupported, "negative gamma powers are not supported");
  SeriesMatrix y = x;
  const SeriesMatrix& m = matrix(a.kind);
  for (int t = 0; t < times; ++t) y = (m * apply_action({a.kind, 1}, y, target)).truncated(target);
  return y;
}

PhiGammaModule character_module(const AlgPtr& A, const CharacterParams& c) {
  if (!A->is_unit(c.a_phi) || !A->is_unit(c.c_gamma) || !A->is_unit(c.c_delta))
    fail(ErrorKind::NonUnit, "character parameters must be units");
  if (A->pow(c.c_delta, A->p() - 1) != A->one()) fail(ErrorKind::DeltaOrderFailure, "c_delta^(p-1) != 1");
  return PhiGammaModule(constant_matrix(A, c.a_phi), constant_matrix(A, c.c_gamma), constant_matrix(A, c.c_delta));
}

PhiGammaModule trivial_module(const AlgPtr& A, std::size_t d) {
  auto I = SeriesMatrix::identity(A, d);
  return PhiGammaModule(I, I, I);
}

PhiGammaModule unramified_module(const AlgPtr& A, const Elem& a) {
  return character_module(A, {a, A->one(), A->one()});
}

i64 derived_precision(const PhiGammaModule& M, const Config& cfg) {
  return std::min<i64>(M.precision(), 4 * cfg.precision);
}

PhiGammaModule cyclotomic_module(const AlgPtr& A, i64 n) {
  return character_module(A, {A->one(), A->one(), cyclotomic_delta(A, n)});
}

PhiGammaModule tensor(const PhiGammaModule& M, const PhiGammaModule& N, i64) {
  return PhiGammaModule(kron(M.phi(), N.phi()), kron(M.gamma(), N.gamma()), kron(M.delta(), N.delta()));
}

PhiGammaModule dual(const PhiGammaModule& M, i64 prec) {
  return PhiGammaModule(inverse(M.phi(), prec).transpose(), inverse(M.gamma(), prec).transpose(),
                        inverse(M.delta(), prec).transpose());
}

PhiGammaModule tate_twist(const PhiGammaModule& M, i64 n) {
  // chi(gamma) = 1 + p is 1 mod p, so only Delta changes.
  const AlgPtr& A = M.algebra();
  return PhiGammaModule(M.phi(), M.gamma(), M.delta().scaled(cyclotomic_delta(A, n)));
}

PhiGammaModule cartier_dual(const PhiGammaModule& M, i64 prec) { return tate_twist(dual(M, prec), 1); }

PhiGammaModule direct_sum(const PhiGammaModule& M, const PhiGammaModule& N) {
  const AlgPtr& A = M.algebra();
  const std::size_t d1 = M.rank(), d2 = N.rank();
  auto blk = [&](const SeriesMatrix& a, const SeriesMatrix& b) {
    SeriesMatrix out(A, d1 + d2, d1 + d2);
    out.set_block(0, 0, a);
    out.set_block(d1, d1, b);
    return out;
  };
  return PhiGammaModule(blk(M.phi(), N.phi()), blk(M.gamma(), N.gamma()), blk(M.delta(), N.delta()));
}

PhiGammaModule base_change(const PhiGammaModule& M, const AlgPtr& B) {
  const AlgPtr& A = M.algebra();
  if (A->same_as(*B)) return M;
  if (A->dim() != 1 || A->p() != B->p()) fail(ErrorKind::Unsupported, "base change is implemented from the prime field");
  auto conv = [&](const SeriesMatrix& m) {
    SeriesMatrix out(B, m.rows(), m.cols());
    const std::size_t r = static_cast<std::size_t>(B->dim());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const LaurentSeries& s = m(i, j);
        std::vector<u32> flat(s.stored() * r, 0);
        for (std::size_t k = 0; k < s.stored(); ++k) {
          Elem c = B->scale(s.flat()[k], B->one());
          std::copy(c.begin(), c.end(), flat.begin() + static_cast<std::ptrdiff_t>(k * r));
        }
        out(i, j) = LaurentSeries(B, s.is_zero() ? 0 : s.valuation(), s.precision(), flat);
      }
    return out;
  };
  return PhiGammaModule(conv(M.phi()), conv(M.gamma()), conv(M.delta()));
}

PhiGammaModule hom_module(const PhiGammaModule& M1, const PhiGammaModule& M2, i64 prec) {
  return tensor(dual(M1, prec), M2, prec);
}

SeriesMatrix vec_of(const SeriesMatrix& F) {
  SeriesMatrix v(F.algebra(), F.rows() * F.cols(), 1);
  for (std::size_t c = 0; c < F.cols(); ++c)
    for (std::size_t r = 0; r < F.rows(); ++r) v(c * F.rows() + r, 0) = F(r, c);
  return v;
}

SeriesMatrix unvec(const SeriesMatrix& v, std::size_t rows, std::size_t cols) {
  if (v.rows() != rows * cols || v.cols() != 1) fail(ErrorKind::Malformed, "vector length does not match the matrix shape");
  SeriesMatrix F(v.algebra(), rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) F(r, c) = v(c * rows + r, 0);
  return F;
}

SeriesMatrix delta_average(const PhiGammaModule& M, const SeriesMatrix& x, i64 target) {
  SeriesMatrix y = x.truncated(target), acc = y;
  for (u32 j = 1; j + 1 < M.p(); ++j) {
    y = M.act({ActionKind::Delta, 1}, y, target);
    acc = acc + y;
  }
  return acc.scaled(M.algebra()->from_int(-1));
}

SeriesMatrix psi_on_module(const PhiGammaModule& M, const SeriesMatrix& x, i64 target) {
  SeriesMatrix y = inverse(M.phi(), target) * x;
  SeriesMatrix out(M.algebra(), y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) = psi(y(i, j));
  return out;
}

PhiGammaModule extension_from_cocycle(const PhiGammaModule& M1, const PhiGammaModule& M2, const SeriesMatrix& a,
                                      const SeriesMatrix& b, i64 prec) {
  const std::size_t d1 = M1.rank(), d2 = M2.rank();
  if (a.rows() != d2 || a.cols() != d1 || b.rows() != d2 || b.cols() != d1)
    fail(ErrorKind::Malformed, "cocycle matrices must be rank(M2) x rank(M1)");
  PhiGammaModule H = hom_module(M1, M2, prec);
  SeriesMatrix va = vec_of(a), vb = vec_of(b);
  auto invariant = [&](const SeriesMatrix& v) { return agree(H.act({ActionKind::Delta, 1}, v, prec), v); };
  if (!invariant(va)) va = delta_average(H, va, prec);
  if (!invariant(vb)) vb = delta_average(H, vb, prec);
  SeriesMatrix lhs = H.act({ActionKind::Gamma, 1}, va, prec) - va;
  SeriesMatrix rhs = H.act({ActionKind::Phi, 1}, vb, prec) - vb;
  SeriesMatrix diff = lhs - rhs;
  if (!diff.is_zero()) fail(ErrorKind::NotACocycle, "(gamma-1)a != (phi-1)b");
  if (diff.precision() < 1) fail(ErrorKind::InsufficientPrecision, "cocycle identity cannot be checked at this precision");
  SeriesMatrix A12 = unvec(va, d2, d1), B12 = unvec(vb, d2, d1);
  const AlgPtr& A = M1.algebra();
  auto blk = [&](const SeriesMatrix& m2, const SeriesMatrix& m12, const SeriesMatrix& m1) {
    SeriesMatrix out(A, d1 + d2, d1 + d2);
    out.set_block(0, 0, m2);
    out.set_block(0, d2, m12);
    out.set_block(d2, d2, m1);
    return out;
  };
  return PhiGammaModule(blk(M2.phi(), A12 * M1.phi(), M1.phi()), blk(M2.gamma(), B12 * M1.gamma(), M1.gamma()),
                        blk(M2.delta(), SeriesMatrix(A, d2, d1), M1.delta()));
}

namespace {

// T'^m * sigma(T'^{-m}) as a scalar series.
LaurentSeries shift_factor(const AlgPtr& A, ActionKind k, i64 m, i64 target) {
  if (m == 0 || k == ActionKind::Phi) return LaurentSeries::one(A);
  return shift(apply_action({k, 1}, LaurentSeries::monomial(A, -m), target - m), m);
}

}  // namespace

LatticeSpec phi_lattice(const SeriesMatrix& phi, i64 prec) {
  const i64 p = static_cast<i64>(phi.algebra()->p());
  i64 v = phi.valuation();
  if (v >= kExact) fail(ErrorKind::NotEtale, "zero Frobenius matrix");
  i64 m = v >= 0 ? v / (p - 1) : -((-v + p - 2) / (p - 1));
  SeriesMatrix inv = inverse(phi.shifted(-(p - 1) * m), prec);
  LatticeSpec s;
  s.shift = m;
  s.phi_stable = true;
  s.psi_stable = true;
  s.height = std::max<i64>(0, -inv.valuation());
  s.m0 = (s.height + p - 2) / (p - 1) + 1;
  return s;
}

Frame stabilize(const PhiGammaModule& M, const Config& cfg) {
  const AlgPtr& A = M.algebra();
  const i64 N = cfg.precision;
  const std::size_t d = M.rank();
  const i64 p = static_cast<i64>(M.p());
  SeriesMatrix B = SeriesMatrix::identity(A, d), Binv = B;
  SeriesMatrix G = M.gamma(), D = M.delta();
  int rounds = 0;
  if (!A->is_field()) {
    if (!G.is_integral() || !D.is_integral() || unit_valuation(LaurentSeries::one(A)) != 0)
      fail(ErrorKind::Unsupported, "non-field coefficients need integral gamma and delta matrices");
  } else {
    while (true) {
      SeriesMatrix GB = M.gamma() * apply_action({ActionKind::Gamma, 1}, B, N);
      SeriesMatrix DB = M.delta() * apply_action({ActionKind::Delta, 1}, B, N);
      G = Binv * GB;
      D = Binv * DB;
      if (G.is_integral() && D.is_integral()) break;
      if (++rounds > cfg.saturation_cap) fail(ErrorKind::BoundExceeded, "lattice saturation did not terminate");
      B = column_hnf(B.hcat(GB).hcat(DB), N);
      Binv = inverse(B, N);
    }
  }
  SeriesMatrix P = Binv * M.phi() * apply_action({ActionKind::Phi, 1}, B, N);
  LatticeSpec ls = phi_lattice(P, N);
  const i64 m = ls.shift;
  Frame f;
  f.B = B.shifted(-m);
  f.Binv = Binv.shifted(m);
  f.phi = P.shifted(-(p - 1) * m).truncated(N);
  f.gamma = G.scaled(shift_factor(A, ActionKind::Gamma, m, N)).truncated(N);
  f.delta = D.scaled(shift_factor(A, ActionKind::Delta, m, N)).truncated(N);
  f.phi_inv = inverse(f.phi, N);
  f.shift = m;
  f.height = std::max<i64>(0, -f.phi_inv.valuation());
  f.m0 = (f.height + p - 2) / (p - 1) + 1;
  f.precision = std::min({f.phi.precision(), f.gamma.precision(), f.delta.precision(), f.phi_inv.precision()});
  f.saturation_rounds = rounds;
  return f;
}

LatticeSpec stabilize_lattice(const PhiGammaModule& M, const Config& cfg) {
  Frame f = stabilize(M, cfg);
  LatticeSpec s;
  s.shift = f.shift;
  s.phi_stable = f.phi.is_integral();
  s.height = f.height;
  s.m0 = f.m0;
  s.saturation_rounds = f.saturation_rounds;
  s.psi_stable = check_psi_bounds(M, 0, cfg);
  return s;
}

namespace {

FpMat residue_fp(const SeriesMatrix& m) {
  const AlgPtr& A = m.algebra();
  const std::size_t d = m.rows(), r = static_cast<std::size_t>(A->dim());
  FpMat out(d * r, d * r, A->p());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      FpMat blk = A->mult_matrix(m(i, j).coeff(0));
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) out.at(i * r + a, j * r + b) = blk.at(a, b);
    }
  return out;
}

}  // namespace

ContinuityWitness is_continuous(const PhiGammaModule& M, const Config& cfg) {
  Frame f = stabilize(M, cfg);
  FpMat g = residue_fp(f.gamma);
  FpMat n = g - FpMat::identity(g.rows(), g.p());
  const int dim = static_cast<int>(g.rows());
  const int bound = cfg.continuity_bound > 0 ? cfg.continuity_bound : dim;
  FpMat pw = n;
  for (int k = 1; k <= bound; ++k) {
    if (pw.is_zero()) return {true, k};
    pw = pw * n;
  }
  if (bound >= dim) return {false, 0};
  fail(ErrorKind::BoundExceeded, "continuity undecided within the configured bound");
}

namespace {

void check_identity(const SeriesMatrix& lhs, const SeriesMatrix& rhs, ErrorKind kind, const std::string& name) {
  SeriesMatrix diff = lhs - rhs;
  if (!diff.is_zero()) fail(kind, name + " fails");
  if (diff.precision() < 1) fail(ErrorKind::InsufficientPrecision, name + " cannot be checked at this precision");
}

void check_at(const PhiGammaModule& M, i64 N) {
  const SeriesMatrix &P = M.phi(), &G = M.gamma(), &D = M.delta();
  check_identity(P * apply_action({ActionKind::Phi, 1}, G, N), G * apply_action({ActionKind::Gamma, 1}, P, N),
                 ErrorKind::CommutationFailure, "Phi*phi(Gamma) = Gamma*gamma(Phi)");
  check_identity(P * apply_action({ActionKind::Phi, 1}, D, N), D * apply_action({ActionKind::Delta, 1}, P, N),
                 ErrorKind::CommutationFailure, "Phi*phi(Delta) = Delta*delta(Phi)");
  check_identity(G * apply_action({ActionKind::Gamma, 1}, D, N), D * apply_action({ActionKind::Delta, 1}, G, N),
                 ErrorKind::CommutationFailure, "Gamma*gamma(Delta) = Delta*delta(Gamma)");
  SeriesMatrix prod = D, cur = D;
  for (u32 j = 1; j + 1 < M.p(); ++j) {
    cur = apply_action({ActionKind::Delta, 1}, cur, N);
    prod = prod * cur;
  }
  check_identity(prod.truncated(N), SeriesMatrix::identity(M.algebra(), M.rank()), ErrorKind::DeltaOrderFailure,
                 "Delta*delta(Delta)*...*delta^{p-2}(Delta) = 1");
}

}  // namespace

ValidationResult validate(const PhiGammaModule& M, const Config& cfg) {
  inverse(M.phi(), cfg.precision);
  check_at(M, cfg.precision);
  check_at(M, 2 * cfg.precision);
  ValidationResult v;
  v.continuity = is_continuous(M, cfg);
  if (!v.continuity.continuous) fail(ErrorKind::NotContinuous, "gamma - 1 is not topologically nilpotent on the lattice");
  v.height = stabilize(M, cfg).height;
  return v;
}

bool check_psi_bounds(const PhiGammaModule& M, int n, const Config& cfg, std::string* why) {
  Frame f = stabilize(M, cfg);
  const AlgPtr& A = M.algebra();
  const std::size_t d = M.rank();
  const i64 p = static_cast<i64>(M.p()), h = f.height;
  auto report = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  for (i64 k = h + n * p; k < h + n * p + p; ++k)
    for (std::size_t j = 0; j < d; ++j)
      for (int al = 0; al < A->dim(); ++al) {
        SeriesMatrix x(A, d, 1);
        x(j, 0) = LaurentSeries::monomial(A, k, A->basis(al));
        SeriesMatrix y = f.phi_inv * x;
        for (std::size_t i = 0; i < d; ++i) {
          LaurentSeries s = psi(y(i, 0));
          if (s.precision() < n) return report("precision too low for the psi bound check");
          if (!vanishes_below(s, n)) return report("psi(T'^{h+np} L) is not contained in T'^n L");
        }
      }
  for (std::size_t j = 0; j < d; ++j) {
    SeriesMatrix y = f.phi.column(j).shifted(n * p);
    if (y.valuation() < n * p) return report("phi(L) is not contained in L");
    SeriesMatrix back = f.phi_inv * y;
    for (std::size_t i = 0; i < d; ++i) {
      LaurentSeries s = psi(back(i, 0));
      LaurentSeries want = i == j ? LaurentSeries::monomial(A, n) : LaurentSeries(A);
      if (!agree(s, want) || s.precision() <= n) return report("T'^n L is not contained in psi(T'^{np} L)");
    }
  }
  return true;
}

}  // namespace pgm
