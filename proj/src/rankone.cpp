#include "pgm/rankone.hpp"

#include "pgm/errors.hpp"

namespace pgm {

PhiGammaModule from_character(const AlgPtr& A, const CharacterLabel& label) {
  const u32 p = A->p();
  const i64 n = ((label.n % (p - 1)) + (p - 1)) % (p - 1);
  if (label.a.size() != static_cast<std::size_t>(A->dim()) || !A->is_unit(label.a))
    fail(ErrorKind::NonUnit, "character label needs a unit a");
  CharacterParams c;
  c.a_phi = label.a;
  c.c_gamma = A->one();
  c.c_delta = A->from_int(mod_pow(primitive_root(p), static_cast<u64>(n), p));
  return character_module(A, c);
}

std::vector<CharacterLabel> all_labels(const AlgPtr& A) {
  if (!A->is_field()) fail(ErrorKind::Unsupported, "labels are enumerated for field coefficients");
  const u32 p = A->p();
  const std::size_t r = static_cast<std::size_t>(A->dim());
  u64 q = 1;
  for (std::size_t i = 0; i < r; ++i) q *= p;
  std::vector<CharacterLabel> out;
  for (i64 n = 0; n + 1 < static_cast<i64>(p); ++n)
    for (u64 idx = 1; idx < q; ++idx) {
      Elem a(r);
      u64 t = idx;
      for (std::size_t i = 0; i < r; ++i) {
        a[i] = static_cast<u32>(t % p);
        t /= p;
      }
      out.push_back({n, a});
    }
  return out;
}

CharacterLabel identify_rank1(const PhiGammaModule& M, const Config& cfg) {
  if (M.rank() != 1) fail(ErrorKind::Malformed, "identify expects a rank-one module");
  const AlgPtr& A = M.algebra();
  for (const auto& label : all_labels(A)) {
    Herr H(tensor(M, dual(from_character(A, label), cfg.precision), cfg.precision), cfg);
    if (H.h0() != 0) return label;
  }
  fail(ErrorKind::NoMatch, "no character label matches the module");
}

bool is_tres_ramifiee(const Cocycle& c, const AlgPtr& A, const Config& cfg) {
  if (A->p() == 2) fail(ErrorKind::Unsupported, "p must be odd");
  CupPairing P(trivial_module(A), cfg);
  Cocycle u{SeriesMatrix::scalar(1, LaurentSeries::constant(A, A->one())), SeriesMatrix(A, 1, 1), true};
  return !A->is_zero(P.pair(u, c));
}

bool valid_weight(const SerreWeight2& w, u32 p) {
  const i64 q = static_cast<i64>(p) - 1;
  return w.k1 - w.k2 >= 0 && w.k1 - w.k2 <= q && w.k2 >= 0 && w.k2 <= q && !(w.k1 == q && w.k2 == q);
}

WeightResult weight_rank2(const PhiGammaModule& E, const Config& cfg) {
  if (E.rank() != 2) fail(ErrorKind::Malformed, "weight_rank2 expects a rank-two module");
  const AlgPtr& A = E.algebra();
  const u32 p = A->p();
  const i64 q = static_cast<i64>(p) - 1;
  ExtensionClass ext = class_of_extension(E, 1, cfg.precision);
  Herr H(ext.hom, cfg);
  if (H.is_coboundary(ext.cocycle)) fail(ErrorKind::NotMaximallyNonsplit, "the extension splits");
  WeightResult out;
  out.sub = identify_rank1(ext.sub, cfg);
  out.quotient = identify_rank1(ext.quotient, cfg);
  const i64 n1 = out.sub.n, n2 = out.quotient.n;
  // chi_i on inertia is eps^{1-i} omega^{-k_{3-i}}.
  const i64 k2 = ((-n1) % q + q) % q;
  const i64 t = ((n1 - n2 - 1) % q + q) % q;
  i64 k1 = k2 + t;
  out.ratio_is_cyclotomic = t == 0 && out.sub.a == out.quotient.a;
  if (out.ratio_is_cyclotomic) {
    out.tres_ramifiee = is_tres_ramifiee(ext.cocycle, A, cfg);
    if (out.tres_ramifiee) k1 = k2 + q;
  }
  out.weight = {k1, k2};
  return out;
}

}  // namespace pgm
