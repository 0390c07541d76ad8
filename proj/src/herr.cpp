#include "pgm/herr.hpp"

#include <algorithm>
#include <optional>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

// Exponent window [lo, hi) of a rank-d lattice; F_p coordinates are laid out
// as ((k - lo) * d + i) * r + alpha.
struct Win {
  i64 lo = 0, hi = 0;
  std::size_t d = 0, r = 0;
  std::size_t size() const { return static_cast<std::size_t>(hi - lo) * d * r; }
  std::size_t idx(i64 k, std::size_t i, std::size_t a) const {
    return (static_cast<std::size_t>(k - lo) * d + i) * r + a;
  }
};

std::vector<u32> to_window(const SeriesMatrix& x, const Win& w) {
  std::vector<u32> v(w.size(), 0);
  for (std::size_t i = 0; i < w.d; ++i) {
    const LaurentSeries& s = x(i, 0);
    if (s.precision() < w.hi) fail(ErrorKind::InsufficientPrecision, "series not known on the window");
    if (s.is_zero()) continue;
    if (s.valuation() < w.lo) fail(ErrorKind::CertificateFailure, "element leaves the window");
    for (i64 k = s.valuation(); k < std::min(w.hi, s.top()); ++k) {
      const u32* c = s.coeff_ptr(k);
      if (!c) continue;
      for (std::size_t a = 0; a < w.r; ++a) v[w.idx(k, i, a)] = c[a];
    }
  }
  return v;
}

SeriesMatrix from_window(const std::vector<u32>& v, const Win& w, const AlgPtr& A) {
  SeriesMatrix x(A, w.d, 1);
  for (std::size_t i = 0; i < w.d; ++i) {
    std::vector<u32> flat(static_cast<std::size_t>(w.hi - w.lo) * w.r, 0);
    for (i64 k = w.lo; k < w.hi; ++k)
      for (std::size_t a = 0; a < w.r; ++a) flat[static_cast<std::size_t>(k - w.lo) * w.r + a] = v[w.idx(k, i, a)];
    x(i, 0) = LaurentSeries(A, w.lo, kExact, flat);
  }
  return x;
}

// Reindexes a window vector into a larger window.
std::vector<u32> embed(const std::vector<u32>& v, const Win& from, const Win& to) {
  std::vector<u32> out(to.size(), 0);
  for (i64 k = from.lo; k < from.hi; ++k) {
    if (k < to.lo || k >= to.hi) {
      for (std::size_t i = 0; i < from.d; ++i)
        for (std::size_t a = 0; a < from.r; ++a)
          if (v[from.idx(k, i, a)]) fail(ErrorKind::CertificateFailure, "window embedding loses data");
      continue;
    }
    for (std::size_t i = 0; i < from.d; ++i)
      for (std::size_t a = 0; a < from.r; ++a) out[to.idx(k, i, a)] = v[from.idx(k, i, a)];
  }
  return out;
}

std::vector<u32> mul_elem(const AlgPtr& A, const Elem& lam, const std::vector<u32>& v) {
  const std::size_t r = static_cast<std::size_t>(A->dim());
  if (r == 1) {
    std::vector<u32> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<u32>(static_cast<u64>(v[i]) * lam[0] % A->p());
    return out;
  }
  FpMat m = A->mult_matrix(lam);
  std::vector<u32> out(v.size(), 0);
  for (std::size_t b = 0; b < v.size(); b += r)
    for (std::size_t i = 0; i < r; ++i) {
      u64 s = 0;
      for (std::size_t j = 0; j < r; ++j) s += static_cast<u64>(m.at(i, j)) * v[b + j];
      out[b + i] = static_cast<u32>(s % A->p());
    }
  return out;
}

FpMat scaled(const FpMat& m, u32 s) {
  FpMat out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = static_cast<u32>(static_cast<u64>(m.at(i, j)) * s % m.p());
  return out;
}

FpMat from_columns(const std::vector<std::vector<u32>>& cols, std::size_t n, u32 p) {
  FpMat m(n, cols.size(), p);
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

enum class Op { Phi, Gamma, Delta, Psi };

}  // namespace

struct Herr::Impl {
  PhiGammaModule M;
  Config cfg;
  AlgPtr A;
  std::size_t d = 0, r = 0;
  u32 p = 0;
  i64 N = 0;
  bool have_frame = false;
  Frame fr;
  PhiGammaModule fm;  // the module in frame coordinates

  std::optional<std::size_t> h0;
  Win h0_win;
  FpMat h0_kernel;
  std::optional<FpMat> phi_kernel;

  std::optional<std::size_t> h2;
  Win w2;
  FpMat e2, q2, er2;

  struct H1Win {
    int c = 0;
    i64 R = 0;
    Win wa, wb;
    FpMat Z, B;
    std::size_t h1 = 0;
  };
  std::map<int, H1Win> h1w;
  int c_cert = -1;
  std::size_t h1 = 0;
  std::vector<std::vector<u32>> basis_gen;  // A-generators (window vectors at c_cert)
  std::vector<std::vector<u32>> basis_fp;   // lambda_t * z_s
  std::optional<std::vector<Cocycle>> reps;

  Impl(PhiGammaModule m, Config c) : M(std::move(m)), cfg(c) {
    A = M.algebra();
    d = M.rank();
    r = static_cast<std::size_t>(A->dim());
    p = A->p();
  }

  void ensure_frame() {
    if (!have_frame) need(0);
  }

  void need(i64 req) {
    if (have_frame && fr.precision >= req) return;
    i64 n = have_frame ? 2 * N : cfg.precision;
    i64 last = have_frame ? fr.precision : -kExact;
    while (true) {
      Config c = cfg;
      c.precision = n;
      fr = stabilize(M, c);
      fm = PhiGammaModule(fr.phi, fr.gamma, fr.delta);
      have_frame = true;
      N = n;
      if (fr.precision >= req) return;
      if (fr.precision <= last || n > (i64{1} << 15))
        fail(ErrorKind::InsufficientPrecision, "module matrices are known to T'^" + std::to_string(fr.precision) +
                                                   " in the frame but T'^" + std::to_string(req) + " is required");
      last = fr.precision;
      n *= 2;
    }
  }

  Win win(i64 lo, i64 hi) const { return Win{lo, hi, d, r}; }

  FpMat identity(const Win& w) const { return FpMat::identity(w.size(), p); }

  FpMat include(const Win& in, const Win& out) const {
    if (in.lo < out.lo) fail(ErrorKind::CertificateFailure, "inclusion below the target window");
    FpMat m(out.size(), in.size(), p);
    for (i64 k = in.lo; k < std::min(in.hi, out.hi); ++k)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t a = 0; a < r; ++a) m.at(out.idx(k, i, a), in.idx(k, i, a)) = 1;
    return m;
  }

  // Matrix of sigma from the window `in` to `out` modulo T'^{out.hi}.
  FpMat action(Op op, const Win& in, const Win& out) {
    FpMat m(out.size(), in.size(), p);
    const i64 pp = static_cast<i64>(p);
    for (i64 k = in.lo; k < in.hi; ++k) {
      LaurentSeries s(A);
      if (op == Op::Phi) {
        if (pp * k >= out.hi) continue;
        s = LaurentSeries::monomial(A, pp * k);
      } else if (op == Op::Gamma || op == Op::Delta) {
        if (k >= out.hi) continue;
        s = apply_action({op == Op::Gamma ? ActionKind::Gamma : ActionKind::Delta, 1}, LaurentSeries::monomial(A, k),
                         out.hi);
      }
      for (std::size_t j = 0; j < d; ++j) {
        SeriesMatrix col(A, d, 1);
        if (op == Op::Psi) {
          SeriesMatrix y = fr.phi_inv.column(j).shifted(k);
          for (std::size_t i = 0; i < d; ++i) col(i, 0) = psi(y(i, 0));
        } else {
          const SeriesMatrix& mat = op == Op::Phi ? fr.phi : op == Op::Gamma ? fr.gamma : fr.delta;
          col = mat.column(j).scaled(s);
        }
        for (std::size_t a = 0; a < r; ++a) {
          SeriesMatrix ca = r == 1 ? col : col.scaled(A->basis(static_cast<int>(a)));
          m.set_column(in.idx(k, j, a), to_window(ca.truncated(out.hi), out));
        }
      }
    }
    return m;
  }

  FpMat delta_projector(const Win& w) {
    FpMat D = action(Op::Delta, w, w);
    FpMat sum = identity(w), pw = identity(w);
    for (u32 j = 1; j + 1 < p; ++j) {
      pw = D * pw;
      sum = sum + pw;
    }
    return scaled(sum, p - 1);
  }

  // ---- H^0 ----
  // Solutions of (phi-1)x in T'L live in T'^{-m0+1}L; the window is [-m0, 1)
  // and phi maps it into [-p*m0, 1) modulo T'L.
  std::size_t compute_h0() {
    if (h0) return *h0;
    compute_phi_kernel();
    Win in = h0_win;
    FpMat G = action(Op::Gamma, in, in) - identity(in);
    FpMat D = action(Op::Delta, in, in) - identity(in);
    FpMat K = *phi_kernel;
    FpMat sub = kernel((G * K).vcat(D * K));
    h0_kernel = K * sub;
    h0 = h0_kernel.cols();
    return *h0;
  }

  std::size_t compute_phi_kernel() {
    if (phi_kernel) return phi_kernel->cols();
    ensure_frame();
    const i64 m0 = fr.m0, pp = static_cast<i64>(p);
    need(pp * m0 + 2);
    Win in = win(-m0, 1), out = win(-pp * m0, 1);
    h0_win = in;
    phi_kernel = kernel(action(Op::Phi, in, out) - include(in, out));
    return phi_kernel->cols();
  }

  // A-basis of the span of the columns of K (F_p-basis when A is not a field).
  std::vector<std::vector<u32>> a_generators(const FpMat& K, const Win& w) {
    Subspace S(w.size(), p);
    std::vector<std::vector<u32>> gens;
    for (std::size_t j = 0; j < K.cols(); ++j) {
      auto v = K.column(j);
      if (S.contains(v)) continue;
      gens.push_back(v);
      if (A->is_field())
        for (int t = 0; t < A->dim(); ++t) S.add(mul_elem(A, A->basis(t), v));
      else
        S.add(v);
    }
    return gens;
  }

  // x = x0 + sum_k phi^k((phi-1)x0) solves phi(x) = x exactly.
  std::vector<SeriesMatrix> phi_fixed_lifts(const std::vector<std::vector<u32>>& gens, i64 prec) {
    i64 spread = std::max<i64>(0, -fr.B.valuation());
    const i64 P = prec + spread + 2;
    need(std::min<i64>(P, N));
    std::vector<SeriesMatrix> out;
    for (const auto& v : gens) {
      SeriesMatrix x0 = from_window(v, h0_win, A);
      SeriesMatrix y = fm.act({ActionKind::Phi, 1}, x0, P) - x0;
      if (y.valuation() < 1) fail(ErrorKind::CertificateFailure, "phi-kernel window element does not lift");
      SeriesMatrix x = x0, t = y;
      while (!t.is_zero() && t.valuation() < P) {
        x = x + t;
        t = fm.act({ActionKind::Phi, 1}, t, P);
      }
      out.push_back((fr.B * x.truncated(P)).truncated(prec));
    }
    return out;
  }

  // ---- H^2 ----
  std::size_t compute_h2() {
    if (h2) return *h2;
    ensure_frame();
    const i64 h = fr.height, pp = static_cast<i64>(p);
    const i64 np = 1 - (h + pp + pp - 2) / (pp - 1);
    need(pp - np + h + 2);
    Win W = win(np, 1), Wr = win(np, h + pp);
    FpMat rel = (action(Op::Psi, Wr, W) - include(Wr, W)).hcat(action(Op::Gamma, W, W) - identity(W));
    FpMat E = delta_projector(W);
    FpMat ER = column_basis(E * rel);
    Subspace S(W.size(), p);
    for (std::size_t j = 0; j < ER.cols(); ++j) S.add(ER.column(j));
    FpMat EB = column_basis(E);
    std::vector<std::vector<u32>> q;
    for (std::size_t j = 0; j < EB.cols(); ++j)
      if (S.add(EB.column(j))) q.push_back(EB.column(j));
    w2 = W;
    e2 = E;
    er2 = ER;
    q2 = from_columns(q, W.size(), p);
    h2 = q.size();
    return *h2;
  }

  SeriesMatrix psi_frame(const SeriesMatrix& x) {
    SeriesMatrix y = fr.phi_inv * x;
    SeriesMatrix out(A, d, 1);
    for (std::size_t i = 0; i < d; ++i) out(i, 0) = psi(y(i, 0));
    return out;
  }

  std::vector<u32> h2_coords_of_window(const std::vector<u32>& z) {
    std::vector<u32> w = e2.apply(z);
    FpMat sys = q2.hcat(er2);
    FpMat rhs(w.size(), 1, p);
    rhs.set_column(0, w);
    auto sol = solve(sys, rhs);
    if (!sol) fail(ErrorKind::CertificateFailure, "H^2 class outside the finite model");
    std::vector<u32> out(q2.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sol->at(i, 0);
    return out;
  }

  std::vector<u32> h2_class(const SeriesMatrix& c) {
    compute_h2();
    if (c.rows() != d || c.cols() != 1) fail(ErrorKind::Malformed, "2-cochain has the wrong shape");
    SeriesMatrix x = fr.Binv * c;
    SeriesMatrix z = psi_frame(x).scaled(A->from_int(-1));
    const i64 np = w2.lo;
    for (int guard = 0; guard < 256; ++guard) {
      i64 v = z.valuation();
      if (v >= np) break;
      SeriesMatrix low(A, d, 1), high(A, d, 1);
      for (std::size_t i = 0; i < d; ++i) {
        low(i, 0) = z(i, 0).window(std::min(v, z(i, 0).valuation()), np);
        high(i, 0) = sub(z(i, 0), low(i, 0));
      }
      z = high + psi_frame(low);
    }
    if (z.valuation() < np) fail(ErrorKind::CertificateFailure, "psi iteration did not reach the window");
    return h2_coords_of_window(to_window(z.truncated(1), w2));
  }

  std::vector<std::vector<u32>> h2_multiples(const std::vector<u32>& cls) {
    compute_h2();
    std::vector<u32> rep(w2.size(), 0);
    for (std::size_t j = 0; j < cls.size(); ++j)
      for (std::size_t i = 0; i < rep.size(); ++i) rep[i] = static_cast<u32>((rep[i] + static_cast<u64>(cls[j]) * q2.at(i, j)) % p);
    std::vector<std::vector<u32>> out;
    for (std::size_t t = 0; t < r; ++t) out.push_back(h2_coords_of_window(mul_elem(A, A->basis(static_cast<int>(t)), rep)));
    return out;
  }

  // ---- H^1 ----
  i64 bound_R(int c) const {
    const i64 h = fr.height, pp = static_cast<i64>(p);
    return -std::max(h / (pp - 1), (c + h) / pp) - 1;
  }

  H1Win& window(int c) {
    auto it = h1w.find(c);
    if (it != h1w.end()) return it->second;
    ensure_frame();
    const i64 pp = static_cast<i64>(p);
    const i64 R = bound_R(c);
    const i64 L = std::min<i64>(-c, pp * R);
    need(std::max<i64>(c, -L) + fr.height + 2 * pp + 4);
    Win wa = win(-c, 1), wb = win(R, 1), wt = win(L, 1);
    FpMat Ua = column_basis(delta_projector(wa));
    FpMat Ub = column_basis(delta_projector(wb));
    FpMat Ga = include(wa, wt) * (action(Op::Gamma, wa, wa) - identity(wa));
    FpMat Pb = action(Op::Phi, wb, wt) - include(wb, wt);
    FpMat PbU = Pb * Ub;
    FpMat C = (Ga * Ua).hcat(scaled(PbU, p - 1));
    FpMat K = kernel(C);
    FpMat Z = (Ua * K.select_rows(0, Ua.cols())).vcat(Ub * K.select_rows(Ua.cols(), K.rows()));
    const std::size_t nlow = static_cast<std::size_t>(-c - L) * d * r;
    FpMat Kx = nlow ? kernel(PbU.select_rows(0, nlow)) : FpMat::identity(Ub.cols(), p);
    FpMat X = Ub * Kx;
    FpMat Ba = (Pb * X).select_rows(nlow, wt.size());
    FpMat Bb = (action(Op::Gamma, wb, wb) - identity(wb)) * X;
    FpMat B = Ba.vcat(Bb);
    std::size_t rz = rank(Z), rb = rank(B);
    if (rank(Z.hcat(B)) != rz) fail(ErrorKind::CertificateFailure, "coboundaries outside the cocycle space");
    H1Win hw;
    hw.c = c;
    hw.R = R;
    hw.wa = wa;
    hw.wb = wb;
    hw.Z = Z;
    hw.B = B;
    hw.h1 = rz - rb;
    return h1w.emplace(c, std::move(hw)).first->second;
  }

  std::size_t expected_h1() {
    return compute_h0() + compute_h2() + d * r;
  }

  std::size_t compute_h1() {
    if (c_cert > 0) return h1;
    const std::size_t target = expected_h1();
    int c = std::max(1, cfg.h1_window_start);
    while (true) {
      std::size_t got = window(c).h1;
      if (got == target) break;
      if (got > target) fail(ErrorKind::CertificateFailure, "window H^1 exceeds the Euler characteristic value");
      c *= 2;
      if (c > cfg.h1_window_budget)
        fail(ErrorKind::StabilizationBudgetExceeded, "H^1 did not stabilize within the window budget");
    }
    if (window(2 * c).h1 != target) fail(ErrorKind::CertificateFailure, "H^1 changed after doubling the window");
    c_cert = c;
    h1 = target;
    build_basis();
    return h1;
  }

  void build_basis() {
    H1Win& w = window(c_cert);
    Subspace S(w.Z.rows(), p);
    for (std::size_t j = 0; j < w.B.cols(); ++j) S.add(w.B.column(j));
    const bool field = A->is_field();
    // Candidates from the narrowest windows first, so representatives have small poles.
    std::vector<std::vector<u32>> cand;
    for (int c = 1; c < c_cert; c *= 2) {
      H1Win& s = window(c);
      for (std::size_t j = 0; j < s.Z.cols(); ++j) {
        auto z = s.Z.column(j);
        std::vector<u32> za(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(s.wa.size()));
        std::vector<u32> zb(z.begin() + static_cast<std::ptrdiff_t>(s.wa.size()), z.end());
        auto ea = embed(za, s.wa, w.wa), eb = embed(zb, s.wb, w.wb);
        ea.insert(ea.end(), eb.begin(), eb.end());
        cand.push_back(std::move(ea));
      }
    }
    for (std::size_t j = 0; j < w.Z.cols(); ++j) cand.push_back(w.Z.column(j));
    const std::size_t full = rank(w.Z);
    for (std::size_t j = 0; j < cand.size() && S.dim() < full; ++j) {
      const std::vector<u32>& z = cand[j];
      if (S.contains(z)) continue;
      basis_gen.push_back(z);
      if (field) {
        for (std::size_t t = 0; t < r; ++t) {
          auto v = mul_elem(A, A->basis(static_cast<int>(t)), z);
          S.add(v);
          basis_fp.push_back(v);
        }
      } else {
        S.add(z);
        basis_fp.push_back(z);
      }
    }
    if (basis_fp.size() != h1) fail(ErrorKind::CertificateFailure, "H^1 basis has the wrong size");
  }

  Cocycle representative(const std::vector<u32>& v, const H1Win& w) {
    const i64 P = N;
    std::vector<u32> va(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(w.wa.size()));
    std::vector<u32> vb(v.begin() + static_cast<std::ptrdiff_t>(w.wa.size()), v.end());
    SeriesMatrix a = delta_average(fm, from_window(va, w.wa, A), P);
    SeriesMatrix b = delta_average(fm, from_window(vb, w.wb, A), P);
    SeriesMatrix y = (fm.act({ActionKind::Gamma, 1}, a, P) - a) - (fm.act({ActionKind::Phi, 1}, b, P) - b);
    if (y.valuation() < 1) fail(ErrorKind::CertificateFailure, "window cocycle does not lift");
    SeriesMatrix t = y, acc(A, d, 1);
    while (!t.is_zero() && t.valuation() < P) {
      acc = acc + t;
      t = fm.act({ActionKind::Phi, 1}, t, P);
    }
    b = b - acc.truncated(P);
    Cocycle out;
    out.a = fr.B * a;
    out.b = fr.B * b;
    out.certified = true;
    return out;
  }

  Cocycle checked(const Cocycle& c) {
    if (c.a.rows() != d || c.b.rows() != d || c.a.cols() != 1 || c.b.cols() != 1)
      fail(ErrorKind::Malformed, "cocycle components have the wrong shape");
    ensure_frame();
    const i64 P = std::min<i64>(N, std::max(c.a.precision(), c.b.precision()));
    Cocycle out = c;
    auto inv = [&](const SeriesMatrix& x) { return agree(M.act({ActionKind::Delta, 1}, x, P), x); };
    if (!inv(out.a)) out.a = delta_average(M, out.a, P);
    if (!inv(out.b)) out.b = delta_average(M, out.b, P);
    SeriesMatrix diff = (M.act({ActionKind::Gamma, 1}, out.a, P) - out.a) - (M.act({ActionKind::Phi, 1}, out.b, P) - out.b);
    if (!diff.is_zero()) fail(ErrorKind::NotACocycle, "(gamma-1)a != (phi-1)b");
    if (diff.precision() < 1) fail(ErrorKind::InsufficientPrecision, "cocycle identity cannot be checked at this precision");
    out.certified = true;
    return out;
  }

  std::vector<u32> coordinates(const Cocycle& c0) {
    compute_h1();
    Cocycle c = checked(c0);
    SeriesMatrix af = (fr.Binv * c.a).truncated(1), bf = (fr.Binv * c.b).truncated(1);
    int cc = c_cert;
    i64 va = af.valuation(), vb = bf.valuation();
    while ((va < kExact && -va > cc) || (vb < kExact && vb < bound_R(cc))) {
      cc *= 2;
      if (cc > 64 * cfg.h1_window_budget) fail(ErrorKind::StabilizationBudgetExceeded, "cocycle window too large");
    }
    H1Win& w = window(cc);
    H1Win& w0 = window(c_cert);
    std::vector<u32> v = to_window(af, w.wa), vbv = to_window(bf, w.wb);
    v.insert(v.end(), vbv.begin(), vbv.end());
    FpMat H(w.Z.rows(), basis_fp.size(), p);
    for (std::size_t s = 0; s < basis_fp.size(); ++s) {
      const auto& z = basis_fp[s];
      std::vector<u32> za(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(w0.wa.size()));
      std::vector<u32> zb(z.begin() + static_cast<std::ptrdiff_t>(w0.wa.size()), z.end());
      auto ea = embed(za, w0.wa, w.wa), eb = embed(zb, w0.wb, w.wb);
      ea.insert(ea.end(), eb.begin(), eb.end());
      H.set_column(s, ea);
    }
    FpMat rhs(v.size(), 1, p);
    rhs.set_column(0, v);
    auto sol = solve(H.hcat(w.B), rhs);
    if (!sol) fail(ErrorKind::CertificateFailure, "cocycle class not in the span of the certified basis");
    std::vector<u32> out(basis_fp.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sol->at(i, 0);
    return out;
  }
};

Herr::Herr(PhiGammaModule M, Config cfg) : M_(M), cfg_(cfg), impl_(std::make_unique<Impl>(std::move(M), cfg)) {}
Herr::~Herr() = default;
Herr::Herr(Herr&&) noexcept = default;
Herr& Herr::operator=(Herr&&) noexcept = default;

const Frame& Herr::frame() {
  impl_->ensure_frame();
  return impl_->fr;
}

std::size_t Herr::divisor() const {
  const AlgPtr& A = M_.algebra();
  return A->is_field() ? static_cast<std::size_t>(A->dim()) : 1;
}

std::size_t Herr::h0_fp() { return impl_->compute_h0(); }
std::size_t Herr::h1_fp() { return impl_->compute_h1(); }
std::size_t Herr::h2_fp() { return impl_->compute_h2(); }
int Herr::h1_window() {
  impl_->compute_h1();
  return impl_->c_cert;
}

std::vector<SeriesMatrix> Herr::h0_basis(i64 prec) {
  Impl& I = *impl_;
  I.compute_h0();
  return I.phi_fixed_lifts(I.a_generators(I.h0_kernel, I.h0_win), prec);
}

std::size_t Herr::phi_kernel_fp() { return impl_->compute_phi_kernel(); }

std::vector<SeriesMatrix> Herr::phi_kernel_basis(i64 prec) {
  Impl& I = *impl_;
  I.compute_phi_kernel();
  return I.phi_fixed_lifts(I.a_generators(*I.phi_kernel, I.h0_win), prec);
}

std::vector<Cocycle> Herr::h1_basis() {
  Impl& I = *impl_;
  I.compute_h1();
  if (!I.reps) {
    std::vector<Cocycle> reps;
    for (const auto& z : I.basis_gen) reps.push_back(I.representative(z, I.window(I.c_cert)));
    I.reps = std::move(reps);
  }
  return *I.reps;
}

std::vector<u32> Herr::h1_coordinates(const Cocycle& c) { return impl_->coordinates(c); }

std::vector<Elem> Herr::h1_A_coordinates(const Cocycle& c) {
  auto v = impl_->coordinates(c);
  const AlgPtr& A = impl_->A;
  const std::size_t r = A->is_field() ? static_cast<std::size_t>(A->dim()) : 1;
  std::vector<Elem> out;
  for (std::size_t s = 0; s * r < v.size(); ++s) {
    Elem e = A->zero();
    for (std::size_t t = 0; t < r; ++t) e = A->add(e, A->scale(v[s * r + t], r == 1 ? A->one() : A->basis(static_cast<int>(t))));
    out.push_back(e);
  }
  return out;
}

bool Herr::is_coboundary(const Cocycle& c) {
  auto v = impl_->coordinates(c);
  return std::all_of(v.begin(), v.end(), [](u32 x) { return x == 0; });
}

Cocycle Herr::checked_cocycle(const Cocycle& c) { return impl_->checked(c); }

std::vector<u32> Herr::h2_class(const SeriesMatrix& c) { return impl_->h2_class(c); }

std::vector<std::vector<u32>> Herr::h2_class_multiples(const std::vector<u32>& cls) { return impl_->h2_multiples(cls); }

CohomologyReport Herr::report(bool with_duality) {
  Impl& I = *impl_;
  CohomologyReport rep;
  const std::size_t h0f = h0_fp(), h2f = h2_fp(), h1f = h1_fp();
  const std::size_t div = divisor();
  rep.h0 = h0f / div;
  rep.h1 = h1f / div;
  rep.h2 = h2f / div;
  rep.over_fp = !I.A->is_field();
  rep.euler_ok = static_cast<i64>(h0f) - static_cast<i64>(h1f) + static_cast<i64>(h2f) == -static_cast<i64>(I.d * I.r);
  rep.h1_window = I.c_cert;
  rep.height = I.fr.height;
  rep.precision = I.N;
  rep.certificates.push_back("H0: kernel of (phi-1, gamma-1, delta-1) on T'^-" + std::to_string(I.fr.m0) +
                             "L/T'L with series correction");
  rep.certificates.push_back("H2: psi-model on T'^" + std::to_string(I.w2.lo) + "L/T'L, Delta-projected");
  rep.certificates.push_back("H1: window stabilized at c=" + std::to_string(I.c_cert) +
                             " (re-checked at 2c) against h0+h2+d*dim(A)");
  if (with_duality && I.A->is_field()) {
    Herr D(cartier_dual(I.M, derived_precision(I.M, I.cfg)), I.cfg);
    rep.duality_checked = true;
    rep.duality_ok = D.h0_fp() == h2f && D.h2_fp() == h0f && D.h1_fp() == h1f;
    rep.certificates.push_back("duality: h_i(M) = h_{2-i}(M*) checked");
  }
  return rep;
}

// ---- pairing ----

CupPairing::CupPairing(const PhiGammaModule& M, Config cfg) {
  const AlgPtr& A = M.algebra();
  if (!A->is_field()) fail(ErrorKind::Unsupported, "the cup pairing is implemented for field coefficients");
  left_ = std::make_unique<Herr>(M, cfg);
  right_ = std::make_unique<Herr>(cartier_dual(M, derived_precision(M, cfg)), cfg);
  twist_ = std::make_unique<Herr>(cyclotomic_module(A, 1), cfg);
  if (twist_->h2_fp() != static_cast<std::size_t>(A->dim()))
    fail(ErrorKind::CertificateFailure, "H^2(A(1)) is not free of rank one");
  std::vector<u32> kappa(static_cast<std::size_t>(A->dim()), 0);
  kappa[0] = 1;
  kappa_multiples_ = twist_->h2_class_multiples(kappa);
}

CupPairing::~CupPairing() = default;

Elem CupPairing::pair(const Cocycle& alpha, const Cocycle& beta) {
  Cocycle a = left_->checked_cocycle(alpha), b = right_->checked_cocycle(beta);
  const PhiGammaModule& Md = right_->module();
  const AlgPtr& A = Md.algebra();
  const i64 P = std::min({a.a.precision(), a.b.precision(), b.a.precision(), b.b.precision(), left_->config().precision});
  SeriesMatrix ga2 = Md.act({ActionKind::Gamma, 1}, b.a, P);
  SeriesMatrix pb2 = Md.act({ActionKind::Phi, 1}, b.b, P);
  LaurentSeries c(A);
  for (std::size_t i = 0; i < a.a.rows(); ++i) c = c + a.b(i, 0) * ga2(i, 0) - a.a(i, 0) * pb2(i, 0);
  auto cls = twist_->h2_class(SeriesMatrix::scalar(1, c));
  const std::size_t r = cls.size();
  FpMat K(r, r, A->p());
  for (std::size_t t = 0; t < r; ++t) K.set_column(t, kappa_multiples_[t]);
  FpMat rhs(r, 1, A->p());
  rhs.set_column(0, cls);
  auto sol = solve(K, rhs);
  if (!sol) fail(ErrorKind::CertificateFailure, "pairing value outside H^2(A(1))");
  Elem out(r);
  for (std::size_t t = 0; t < r; ++t) out[t] = sol->at(t, 0);
  return out;
}

std::vector<std::vector<Elem>> CupPairing::matrix() {
  auto L = left_->h1_basis();
  auto R = right_->h1_basis();
  std::vector<std::vector<Elem>> m(L.size(), std::vector<Elem>(R.size()));
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < R.size(); ++j) m[i][j] = pair(L[i], R[j]);
  return m;
}

bool invertible_over(const AlgPtr& A, std::vector<std::vector<Elem>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) return false;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t piv = n;
    for (std::size_t i = j; i < n; ++i)
      if (A->is_unit(m[i][j])) {
        piv = i;
        break;
      }
    if (piv == n) return false;
    std::swap(m[piv], m[j]);
    Elem inv = A->inverse(m[j][j]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || A->is_zero(m[i][j])) continue;
      Elem f = A->mul(m[i][j], inv);
      for (std::size_t k = j; k < n; ++k) m[i][k] = A->sub(m[i][k], A->mul(f, m[j][k]));
    }
  }
  return true;
}

HomSpace hom_space(const PhiGammaModule& M1, const PhiGammaModule& M2, const Config& cfg, i64 prec) {
  Herr H(hom_module(M1, M2, std::min(derived_precision(M1, cfg), derived_precision(M2, cfg))), cfg);
  HomSpace out;
  out.dim = H.h0();
  for (const auto& v : H.h0_basis(prec)) out.basis.push_back(unvec(v, M2.rank(), M1.rank()));
  return out;
}

ExtensionClass class_of_extension(const PhiGammaModule& E, std::size_t sub_rank, i64 prec) {
  const std::size_t d = E.rank(), d2 = sub_rank;
  if (d2 == 0 || d2 >= d) fail(ErrorKind::Malformed, "sub rank must lie strictly between 0 and the rank");
  const std::size_t d1 = d - d2;
  for (const SeriesMatrix* m : {&E.phi(), &E.gamma(), &E.delta()})
    if (!m->block(d2, 0, d1, d2).is_zero()) fail(ErrorKind::NotBlockTriangular, "lower left block is nonzero");
  auto sub = [&](const SeriesMatrix& m) { return m.block(0, 0, d2, d2); };
  auto quo = [&](const SeriesMatrix& m) { return m.block(d2, d2, d1, d1); };
  auto off = [&](const SeriesMatrix& m) { return m.block(0, d2, d2, d1); };
  PhiGammaModule M2(sub(E.phi()), sub(E.gamma()), sub(E.delta()));
  PhiGammaModule M1(quo(E.phi()), quo(E.gamma()), quo(E.delta()));
  PhiGammaModule H = hom_module(M1, M2, prec);
  SeriesMatrix va = vec_of(off(E.phi()) * inverse(M1.phi(), prec));
  SeriesMatrix vb = vec_of(off(E.gamma()) * inverse(M1.gamma(), prec));
  SeriesMatrix ve = vec_of(off(E.delta()) * inverse(M1.delta(), prec));
  if (!ve.is_zero()) {
    // Solve (delta-1)x = -e with x = -(1/n) sum_j j delta^j(e), n = p-1.
    const u32 p = E.p();
    const AlgPtr& A = E.algebra();
    SeriesMatrix acc(A, d1 * d2, 1), t = ve;
    for (u32 j = 1; j + 1 < p; ++j) {
      t = H.act({ActionKind::Delta, 1}, t, prec);
      acc = acc + t.scaled(A->from_int(j));
    }
    SeriesMatrix x = acc.scaled(A->from_int(-static_cast<i64>(mod_inv(p - 1, p))));
    va = va + (H.act({ActionKind::Phi, 1}, x, prec) - x);
    vb = vb + (H.act({ActionKind::Gamma, 1}, x, prec) - x);
  }
  ExtensionClass out{M2, M1, H, Cocycle{va, vb, false}};
  return out;
}

// ---- obstruction theory ----

SeriesMatrix lift_to(const SeriesMatrix& m, const AlgPtr& Ap) {
  const AlgPtr& A = m.algebra();
  const std::size_t r = static_cast<std::size_t>(A->dim()), rp = static_cast<std::size_t>(Ap->dim());
  SeriesMatrix out(Ap, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const LaurentSeries& s = m(i, j);
      std::vector<u32> flat(s.stored() * rp, 0);
      for (std::size_t k = 0; k < s.stored(); ++k)
        for (std::size_t a = 0; a < r; ++a) flat[k * rp + a] = s.flat()[k * r + a];
      out(i, j) = LaurentSeries(Ap, s.is_zero() ? 0 : s.valuation(), s.precision(), flat);
    }
  return out;
}

namespace {

SeriesMatrix component(const SeriesMatrix& m, const AlgPtr& A, std::size_t offset) {
  const std::size_t r = static_cast<std::size_t>(A->dim()), rp = static_cast<std::size_t>(m.algebra()->dim());
  SeriesMatrix out(A, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const LaurentSeries& s = m(i, j);
      std::vector<u32> flat(s.stored() * r, 0);
      for (std::size_t k = 0; k < s.stored(); ++k)
        for (std::size_t a = 0; a < r; ++a) flat[k * r + a] = s.flat()[k * rp + offset + a];
      out(i, j) = LaurentSeries(A, s.is_zero() ? 0 : s.valuation(), s.precision(), flat);
    }
  return out;
}

}  // namespace

SeriesMatrix reduce_from(const SeriesMatrix& m, const AlgPtr& A) { return component(m, A, 0); }

ObstructionClass obstruction_class(const PhiGammaModule& M, const SeriesMatrix& phi_lift, const SeriesMatrix& gamma_lift,
                                   const SeriesMatrix* delta_lift, const AlgPtr& Ap, const Config& cfg) {
  const AlgPtr& A = M.algebra();
  if (!A->is_field()) fail(ErrorKind::Unsupported, "obstruction classes are implemented over field coefficients");
  if (!Ap->base() || !Ap->base()->same_as(*A) || Ap->dim() != 2 * A->dim())
    fail(ErrorKind::Unsupported, "the square-zero extension must be A[eps]");
  const i64 N = derived_precision(M, cfg);
  SeriesMatrix Dl = delta_lift ? *delta_lift : lift_to(M.delta(), Ap);
  for (const SeriesMatrix* m : {&phi_lift, &gamma_lift, static_cast<const SeriesMatrix*>(&Dl)})
    if (!m->algebra()->same_as(*Ap) || m->rows() != M.rank() || m->cols() != M.rank())
      fail(ErrorKind::NotALift, "lift matrices must be rank x rank over A[eps]");
  if (!agree(reduce_from(phi_lift, A), M.phi()) || !agree(reduce_from(gamma_lift, A), M.gamma()) ||
      !agree(reduce_from(Dl, A), M.delta()))
    fail(ErrorKind::NotALift, "lifts do not reduce to the module");
  auto same = [&](const SeriesMatrix& x, const SeriesMatrix& y) {
    SeriesMatrix diff = x - y;
    return diff.is_zero() && diff.precision() >= 1;
  };
  if (!same(phi_lift * apply_action({ActionKind::Phi, 1}, Dl, N), Dl * apply_action({ActionKind::Delta, 1}, phi_lift, N)) ||
      !same(gamma_lift * apply_action({ActionKind::Gamma, 1}, Dl, N), Dl * apply_action({ActionKind::Delta, 1}, gamma_lift, N)))
    fail(ErrorKind::NotALift, "the lift of delta does not commute with the other lifts");
  SeriesMatrix O = phi_lift * apply_action({ActionKind::Phi, 1}, gamma_lift, N) *
                       inverse(apply_action({ActionKind::Gamma, 1}, phi_lift, N), N) * inverse(gamma_lift, N) -
                   SeriesMatrix::identity(Ap, M.rank());
  O = O.truncated(N);
  if (!component(O, A, 0).is_zero()) fail(ErrorKind::NotALift, "lifts do not commute modulo the ideal");
  SeriesMatrix O1 = component(O, A, static_cast<std::size_t>(A->dim()));
  PhiGammaModule ad = tensor(dual(M, N), M, N);
  Herr H(ad, cfg);
  ObstructionClass out;
  out.h2_ad = H.h2();
  out.coordinates.push_back(H.h2_class(vec_of(O1)));
  out.lifts_exist = std::all_of(out.coordinates[0].begin(), out.coordinates[0].end(), [](u32 x) { return x == 0; });
  return out;
}

std::size_t lift_space_dim(const PhiGammaModule& M, std::size_t dim_F, const Config& cfg) {
  if (dim_F == 0) return 0;
  if (!M.algebra()->is_field()) fail(ErrorKind::Unsupported, "lift dimensions are implemented over field coefficients");
  const i64 N = derived_precision(M, cfg);
  Herr H(tensor(dual(M, N), M, N), cfg);
  return H.h1() * dim_F;
}

}  // namespace pgm
