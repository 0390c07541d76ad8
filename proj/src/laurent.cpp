#include "pgm/laurent.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <sstream>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

LaurentSeries::LaurentSeries(AlgPtr A) : A_(std::move(A)) {}

LaurentSeries::LaurentSeries(AlgPtr A, i64 val, i64 prec, std::vector<u32> flat)
    : A_(std::move(A)), val_(val), prec_(clamp_prec(prec)), c_(std::move(flat)) {
  const std::size_t r = static_cast<std::size_t>(A_->dim());
  if (c_.size() % r != 0) fail(ErrorKind::Malformed, "coefficient vector length is not a multiple of dim(A)");
  len_ = c_.size() / r;
  if (!exact() && val_ + static_cast<i64>(len_) > prec_) {
    i64 keep = std::max<i64>(0, prec_ - val_);
    len_ = static_cast<std::size_t>(keep);
    c_.resize(len_ * r);
  }
  const u32 p = A_->p();
  for (auto& x : c_) x %= p;
  normalize();
}

void LaurentSeries::normalize() {
  const std::size_t r = static_cast<std::size_t>(A_->dim());
  std::size_t lead = 0;
  while (lead < len_ && A_->is_zero(c_.data() + lead * r)) ++lead;
  if (lead == len_) {
    len_ = 0;
    c_.clear();
    val_ = prec_;
    return;
  }
  std::size_t last = len_;
  while (last > lead && A_->is_zero(c_.data() + (last - 1) * r)) --last;
  if (lead > 0 || last < len_) {
    c_ = std::vector<u32>(c_.begin() + static_cast<std::ptrdiff_t>(lead * r),
                          c_.begin() + static_cast<std::ptrdiff_t>(last * r));
    val_ += static_cast<i64>(lead);
    len_ = last - lead;
  }
}

LaurentSeries LaurentSeries::zero(AlgPtr A, i64 prec) {
  LaurentSeries z(std::move(A));
  z.prec_ = clamp_prec(prec);
  z.val_ = z.prec_;
  return z;
}

LaurentSeries LaurentSeries::one(AlgPtr A) { return constant(A, A->one()); }

LaurentSeries LaurentSeries::constant(AlgPtr A, const Elem& c) { return LaurentSeries(A, 0, kExact, c); }

LaurentSeries LaurentSeries::monomial(AlgPtr A, i64 e) {
  Elem one = A->one();
  return LaurentSeries(A, e, kExact, one);
}

LaurentSeries LaurentSeries::monomial(AlgPtr A, i64 e, const Elem& c) { return LaurentSeries(A, e, kExact, c); }

LaurentSeries LaurentSeries::from_ints(AlgPtr A, i64 val, const std::vector<i64>& ints, i64 prec) {
  const std::size_t r = static_cast<std::size_t>(A->dim());
  std::vector<u32> flat(ints.size() * r, 0);
  for (std::size_t k = 0; k < ints.size(); ++k) {
    Elem c = A->from_int(ints[k]);
    std::copy(c.begin(), c.end(), flat.begin() + static_cast<std::ptrdiff_t>(k * r));
  }
  return LaurentSeries(A, val, prec, flat);
}

const u32* LaurentSeries::coeff_ptr(i64 e) const {
  if (e >= prec_) fail(ErrorKind::InsufficientPrecision, "coefficient requested beyond precision");
  if (len_ == 0 || e < val_ || e >= top()) return nullptr;
  return c_.data() + static_cast<std::size_t>(e - val_) * static_cast<std::size_t>(A_->dim());
}

Elem LaurentSeries::coeff(i64 e) const {
  const u32* c = coeff_ptr(e);
  if (!c) return A_->zero();
  return Elem(c, c + A_->dim());
}

bool LaurentSeries::leading_is_unit() const { return len_ > 0 && A_->is_unit(c_.data()); }

LaurentSeries LaurentSeries::truncated(i64 prec) const {
  if (prec >= prec_) return *this;
  LaurentSeries out(A_);
  out.prec_ = prec;
  if (len_ == 0 || prec <= val_) {
    out.val_ = prec;
    return out;
  }
  const std::size_t r = static_cast<std::size_t>(A_->dim());
  std::size_t keep = std::min(len_, static_cast<std::size_t>(prec - val_));
  out.val_ = val_;
  out.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(keep * r));
  out.len_ = keep;
  out.normalize();
  return out;
}

LaurentSeries LaurentSeries::window(i64 lo, i64 hi) const {
  if (hi > prec_) fail(ErrorKind::InsufficientPrecision, "segment extends beyond precision");
  const std::size_t r = static_cast<std::size_t>(A_->dim());
  i64 a = std::max(lo, val_), b = std::min(hi, top());
  if (len_ == 0 || a >= b) return LaurentSeries(A_);
  std::vector<u32> flat(c_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a - val_) * r),
                        c_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(b - val_) * r));
  return LaurentSeries(A_, a, kExact, flat);
}

std::string LaurentSeries::to_string() const {
  std::ostringstream os;
  const int r = A_->dim();
  bool first = true;
  for (std::size_t k = 0; k < len_; ++k) {
    const u32* c = c_.data() + k * static_cast<std::size_t>(r);
    if (A_->is_zero(c)) continue;
    if (!first) os << " + ";
    first = false;
    if (r == 1)
      os << c[0];
    else {
      os << "(";
      for (int i = 0; i < r; ++i) os << (i ? "," : "") << c[i];
      os << ")";
    }
    os << "*T^" << (val_ + static_cast<i64>(k));
  }
  if (first) os << "0";
  if (!exact()) os << " + O(T^" << prec_ << ")";
  return os.str();
}

LaurentSeries add(const LaurentSeries& f, const LaurentSeries& g) {
  const AlgPtr& A = f.algebra();
  const std::size_t r = static_cast<std::size_t>(A->dim());
  const u32 p = A->p();
  i64 prec = std::min(f.precision(), g.precision());
  if (f.is_zero() && g.is_zero()) return LaurentSeries::zero(A, prec);
  i64 lo = std::min(f.is_zero() ? kExact : f.valuation(), g.is_zero() ? kExact : g.valuation());
  i64 hi = std::min(prec, std::max(f.is_zero() ? lo : f.top(), g.is_zero() ? lo : g.top()));
  if (hi <= lo) return LaurentSeries::zero(A, prec);
  std::vector<u32> flat(static_cast<std::size_t>(hi - lo) * r, 0);
  auto acc = [&](const LaurentSeries& s) {
    if (s.is_zero()) return;
    i64 a = std::max(lo, s.valuation()), b = std::min(hi, s.top());
    for (i64 e = a; e < b; ++e) {
      const u32* c = s.flat().data() + static_cast<std::size_t>(e - s.valuation()) * r;
      u32* o = flat.data() + static_cast<std::size_t>(e - lo) * r;
      for (std::size_t i = 0; i < r; ++i) o[i] = (o[i] + c[i]) % p;
    }
  };
  acc(f);
  acc(g);
  return LaurentSeries(A, lo, prec, flat);
}

LaurentSeries neg(const LaurentSeries& f) { return scale_fp(f, f.p() - 1); }

LaurentSeries sub(const LaurentSeries& f, const LaurentSeries& g) { return add(f, neg(g)); }

LaurentSeries scale_fp(const LaurentSeries& f, u32 s) {
  std::vector<u32> flat = f.flat();
  const u32 p = f.p();
  for (auto& x : flat) x = static_cast<u32>(static_cast<u64>(x) * s % p);
  return LaurentSeries(f.algebra(), f.is_zero() ? 0 : f.valuation(), f.precision(), flat);
}

LaurentSeries scale(const LaurentSeries& f, const Elem& c) {
  const AlgPtr& A = f.algebra();
  if (A->dim() == 1) return scale_fp(f, c[0]);
  const std::size_t r = static_cast<std::size_t>(A->dim());
  std::vector<u32> flat(f.flat().size(), 0);
  for (std::size_t k = 0; k < f.stored(); ++k) A->mul_acc(flat.data() + k * r, f.flat().data() + k * r, c.data());
  return LaurentSeries(A, f.is_zero() ? 0 : f.valuation(), f.precision(), flat);
}

LaurentSeries shift(const LaurentSeries& f, i64 k) {
  i64 prec = f.exact() ? kExact : f.precision() + k;
  if (f.is_zero()) return LaurentSeries::zero(f.algebra(), prec);
  return LaurentSeries(f.algebra(), f.valuation() + k, prec, f.flat());
}

LaurentSeries mul(const LaurentSeries& f, const LaurentSeries& g) {
  const AlgPtr& A = f.algebra();
  const u32 p = A->p();
  i64 prec = kExact;
  if (!f.exact()) prec = std::min(prec, clamp_prec(f.precision() + (g.is_zero() ? g.precision() : g.valuation())));
  if (!g.exact()) prec = std::min(prec, clamp_prec(g.precision() + (f.is_zero() ? f.precision() : f.valuation())));
  if (f.is_zero() || g.is_zero()) return LaurentSeries::zero(A, prec);
  const i64 lo = f.valuation() + g.valuation();
  i64 len = static_cast<i64>(f.stored() + g.stored()) - 1;
  if (prec < kExact) len = std::min(len, prec - lo);
  if (len <= 0) return LaurentSeries::zero(A, prec);
  const std::size_t L = static_cast<std::size_t>(len);
  const std::size_t nf = std::min(f.stored(), L), ng = std::min(g.stored(), L);
  const u32* fc = f.flat().data();
  const u32* gc = g.flat().data();
  if (A->dim() == 1) {
    std::vector<u64> acc(L, 0);
    const u64 lim = (~0ULL) - static_cast<u64>(p) * p;
    for (std::size_t i = 0; i < nf; ++i) {
      u64 x = fc[i];
      if (!x) continue;
      std::size_t jmax = std::min(ng, L - i);
      for (std::size_t j = 0; j < jmax; ++j) {
        u64& a = acc[i + j];
        a += x * gc[j];
        if (a > lim) a %= p;
      }
    }
    std::vector<u32> flat(L);
    for (std::size_t k = 0; k < L; ++k) flat[k] = static_cast<u32>(acc[k] % p);
    return LaurentSeries(A, lo, prec, flat);
  }
  const std::size_t r = static_cast<std::size_t>(A->dim());
  std::vector<u32> flat(L * r, 0);
  for (std::size_t i = 0; i < nf; ++i) {
    const u32* x = fc + i * r;
    if (A->is_zero(x)) continue;
    std::size_t jmax = std::min(ng, L - i);
    for (std::size_t j = 0; j < jmax; ++j) A->mul_acc(flat.data() + (i + j) * r, x, gc + j * r);
  }
  return LaurentSeries(A, lo, prec, flat);
}

namespace {

// Inverse of a series whose coefficient at its valuation is a unit.
LaurentSeries invert_unit_leading(const LaurentSeries& f, i64 target) {
  const AlgPtr& A = f.algebra();
  const std::size_t r = static_cast<std::size_t>(A->dim());
  const i64 v = f.valuation();
  if (f.exact() && f.stored() == 1) return LaurentSeries::monomial(A, -v, A->inverse(f.coeff(v)));
  i64 prec = target;
  if (!f.exact()) prec = std::min(prec, f.precision() - 2 * v);
  if (prec >= kExact) fail(ErrorKind::InsufficientPrecision, "inverse of a non-monomial needs a finite target");
  i64 R = prec + v;  // relative precision of the result
  if (R <= 0) return LaurentSeries::zero(A, prec);
  const std::size_t n = static_cast<std::size_t>(R);
  Elem c0inv = A->inverse(f.coeff(v));
  Elem negc0inv = A->neg(c0inv);
  std::vector<u32> h(n * r, 0);
  std::copy(c0inv.begin(), c0inv.end(), h.begin());
  const u32* fc = f.flat().data();
  const std::size_t nf = f.stored();
  std::vector<u32> s(r);
  for (std::size_t k = 1; k < n; ++k) {
    std::fill(s.begin(), s.end(), 0);
    std::size_t imax = std::min(k, nf - 1);
    for (std::size_t i = 1; i <= imax; ++i) A->mul_acc(s.data(), fc + i * r, h.data() + (k - i) * r);
    A->mul_acc(h.data() + k * r, s.data(), negc0inv.data());
  }
  return LaurentSeries(A, -v, prec, h);
}

}  // namespace

LaurentSeries invert(const LaurentSeries& f, i64 target) {
  const AlgPtr& A = f.algebra();
  if (f.is_zero()) fail(ErrorKind::NonUnitLeading, "cannot invert zero");
  if (f.leading_is_unit()) return invert_unit_leading(f, target);
  // Leading coefficients nilpotent: f = U + N with U starting at the first
  // unit coefficient and N having nilpotent coefficients.
  i64 k0 = f.valuation();
  for (; k0 < f.top(); ++k0)
    if (A->is_unit(f.coeff(k0))) break;
  if (k0 >= f.top()) fail(ErrorKind::NonUnitLeading, "no unit coefficient in the known window");
  LaurentSeries U = f.exact() ? f.window(k0, f.top()) : f.window(k0, f.precision()).truncated(f.precision());
  if (!f.exact()) U = add(U, LaurentSeries::zero(A, f.precision()));
  LaurentSeries Nn = f.window(f.valuation(), k0);
  const int e = A->nilpotency_index();
  const i64 loss = static_cast<i64>(e) * (k0 - f.valuation());
  i64 inner_target = target >= kExact ? kExact : target + loss + 1;
  LaurentSeries Uinv = invert_unit_leading(U, inner_target);
  LaurentSeries x = neg(mul(Nn, Uinv));
  LaurentSeries term = LaurentSeries::one(A), total = LaurentSeries::one(A);
  for (int i = 1; i < e; ++i) {
    term = mul(term, x);
    total = add(total, term);
  }
  LaurentSeries out = mul(Uinv, total);
  return target >= kExact ? out : out.truncated(target);
}

LaurentSeries pow(const LaurentSeries& f, i64 e, i64 target) {
  const AlgPtr& A = f.algebra();
  if (e == 0) return LaurentSeries::one(A);
  if (f.is_zero()) {
    if (e < 0) fail(ErrorKind::NonUnitLeading, "negative power of zero");
    return LaurentSeries::zero(A, f.exact() ? kExact : f.precision() * e);
  }
  const i64 v = f.valuation();
  LaurentSeries u = shift(f, -v);
  i64 rel = target >= kExact ? kExact : target - e * v;
  if (!u.exact()) rel = std::min(rel, u.precision());
  LaurentSeries base = e > 0 ? u : invert(u, rel);
  if (rel < kExact) base = base.truncated(rel);
  i64 n = e > 0 ? e : -e;
  LaurentSeries result = LaurentSeries::one(A);
  while (n) {
    if (n & 1) {
      result = mul(result, base);
      if (rel < kExact) result = result.truncated(rel);
    }
    n >>= 1;
    if (n) {
      base = mul(base, base);
      if (rel < kExact) base = base.truncated(rel);
    }
  }
  if (rel < kExact && result.precision() > rel) result = result.truncated(rel);
  if (rel < kExact && result.precision() < rel && u.exact())
    fail(ErrorKind::InsufficientPrecision, "power lost precision");
  return shift(result, e * v);
}

LaurentSeries phi(const LaurentSeries& f) {
  const AlgPtr& A = f.algebra();
  const i64 p = static_cast<i64>(A->p());
  i64 prec = f.exact() ? kExact : clamp_prec(f.precision() * p);
  if (f.is_zero()) return LaurentSeries::zero(A, prec);
  const std::size_t r = static_cast<std::size_t>(A->dim());
  std::vector<u32> flat(((f.stored() - 1) * static_cast<std::size_t>(p) + 1) * r, 0);
  for (std::size_t k = 0; k < f.stored(); ++k)
    std::copy(f.flat().begin() + static_cast<std::ptrdiff_t>(k * r), f.flat().begin() + static_cast<std::ptrdiff_t>((k + 1) * r),
              flat.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(p) * r));
  return LaurentSeries(A, f.valuation() * p, prec, flat);
}

LaurentSeries psi(const LaurentSeries& f) {
  const AlgPtr& A = f.algebra();
  const i64 p = static_cast<i64>(A->p());
  i64 prec = f.exact() ? kExact : floor_div(f.precision(), p);
  if (f.is_zero()) return LaurentSeries::zero(A, prec);
  const std::size_t r = static_cast<std::size_t>(A->dim());
  const u32 pu = A->p();
  i64 lo = floor_div(f.valuation(), p);
  i64 hi = floor_div(f.top() - 1, p) + 1;
  if (prec < kExact) hi = std::min(hi, prec);
  if (hi <= lo) return LaurentSeries::zero(A, prec);
  std::vector<u32> flat(static_cast<std::size_t>(hi - lo) * r, 0);
  for (i64 e = f.valuation(); e < f.top(); ++e) {
    i64 j = floor_div(e, p);
    if (j >= hi) break;
    i64 rr = e - j * p;
    const u32* c = f.flat().data() + static_cast<std::size_t>(e - f.valuation()) * r;
    u32* o = flat.data() + static_cast<std::size_t>(j - lo) * r;
    for (std::size_t i = 0; i < r; ++i) o[i] = (rr % 2 == 0) ? (o[i] + c[i]) % pu : (o[i] + pu - c[i]) % pu;
  }
  return LaurentSeries(A, lo, prec, flat);
}

LaurentSeries substitute(const LaurentSeries& f, const LaurentSeries& g, i64 target) {
  const AlgPtr& A = f.algebra();
  if (g.is_zero() || g.valuation() < 1 || !g.leading_is_unit())
    fail(ErrorKind::BadInnerValuation, "inner series must have positive valuation and unit leading coefficient");
  const i64 e = g.valuation();
  if (f.is_zero()) return LaurentSeries::zero(A, std::min(target, f.exact() ? kExact : clamp_prec(e * f.precision())));
  const i64 v = f.valuation();
  // Monomial inner series: exact reindexing.
  if (g.exact() && g.stored() == 1) {
    const Elem c = g.coeff(e);
    const std::size_t r = static_cast<std::size_t>(A->dim());
    std::vector<u32> flat(((f.stored() - 1) * static_cast<std::size_t>(e) + 1) * r, 0);
    Elem cpow = A->pow(c, 0);
    Elem cinv = A->inverse(c);
    Elem cv = v >= 0 ? A->pow(c, static_cast<u64>(v)) : A->pow(cinv, static_cast<u64>(-v));
    cpow = cv;
    for (std::size_t k = 0; k < f.stored(); ++k) {
      const u32* fk = f.flat().data() + k * r;
      A->mul_acc(flat.data() + k * static_cast<std::size_t>(e) * r, fk, cpow.data());
      cpow = A->mul(cpow, c);
    }
    i64 prec = f.exact() ? kExact : clamp_prec(e * f.precision());
    LaurentSeries out(A, e * v, prec, flat);
    return target < kExact ? out.truncated(target) : out;
  }
  LaurentSeries u = shift(g, -e);
  i64 P = target;
  if (!f.exact()) P = std::min(P, clamp_prec(e * f.precision()));
  if (!g.exact()) P = std::min(P, e * v + u.precision());
  if (P >= kExact && v < 0) fail(ErrorKind::InsufficientPrecision, "substitution into a Laurent tail needs a finite target");
  const bool exact_out = P >= kExact;
  const i64 R = exact_out ? kExact : P - e * v;
  if (!exact_out && R <= 0) return LaurentSeries::zero(A, P);
  std::size_t J = f.stored();
  if (!exact_out) J = std::min<std::size_t>(J, static_cast<std::size_t>((R + e - 1) / e));
  const std::size_t r = static_cast<std::size_t>(A->dim());
  LaurentSeries acc(A);
  for (std::size_t j = J; j-- > 0;) {
    Elem c(f.flat().begin() + static_cast<std::ptrdiff_t>(j * r), f.flat().begin() + static_cast<std::ptrdiff_t>((j + 1) * r));
    acc = add(mul(acc, g), LaurentSeries::constant(A, c));
    if (!exact_out) acc = acc.truncated(R);
  }
  if (!exact_out) acc = add(acc, LaurentSeries::zero(A, R));
  if (v != 0) {
    LaurentSeries uv = pow(u, v, exact_out ? kExact : R);
    acc = mul(acc, uv);
    if (!exact_out) acc = acc.truncated(R);
  }
  return shift(acc, e * v);
}

bool agree(const LaurentSeries& f, const LaurentSeries& g) { return sub(f, g).is_zero(); }

bool vanishes_below(const LaurentSeries& f, i64 bound) { return f.valuation() >= std::min(f.precision(), bound); }

PadicInt action_exponent(u32 p, const RingAction& act, int k) {
  u64 pk = pow_u64(p, k);
  if (act.kind == ActionKind::Phi) return {p, k, p % pk};
  if (act.kind == ActionKind::Gamma) {
    unsigned __int128 x = 1;
    for (int i = 0; i < act.power; ++i) x = x * (1 + p) % pk;
    return {p, k, static_cast<u64>(x)};
  }
  u32 g = primitive_root(p);
  int j = ((act.power % static_cast<int>(p - 1)) + static_cast<int>(p - 1)) % static_cast<int>(p - 1);
  return teichmuller(p, mod_pow(g, static_cast<u64>(j), p), k);
}

LaurentSeries gamma_image(AlgPtr A, const RingAction& act, i64 N) {
  const u32 p = A->p();
  if (act.kind == ActionKind::Phi) return LaurentSeries::monomial(A, p);
  bool integral = false;
  std::vector<u32> digits;
  if (act.kind == ActionKind::Gamma) {
    // (1+p)^j is an ordinary integer; use all of its digits.
    if (act.power < 0 || act.power > 6) fail(ErrorKind::Unsupported, "gamma power out of range");
    u64 c = 1;
    for (int i = 0; i < act.power; ++i) c *= (1 + p);
    while (c) {
      digits.push_back(static_cast<u32>(c % p));
      c /= p;
    }
    integral = true;
  } else {
    int j = ((act.power % static_cast<int>(p - 1)) + static_cast<int>(p - 1)) % static_cast<int>(p - 1);
    if (j == 0) return LaurentSeries::monomial(A, 1);
    int k = 1;
    while (pow_u64(p, k) < static_cast<u64>(std::max<i64>(N, 2))) ++k;
    if (k > max_padic_digits(p)) fail(ErrorKind::InsufficientPrecision, "InsufficientPadicPrecision for the requested window");
    digits = padic_digits(action_exponent(p, act, k));
  }
  // (1+T')^c = prod_i (1+T'^{p^i})^{c_i} in characteristic p.
  const i64 cap = integral ? kExact : N;
  std::vector<u32> prod = {1};
  u64 pi = 1;
  for (std::size_t i = 0; i < digits.size(); ++i, pi *= p) {
    if (!integral && static_cast<i64>(pi) >= N) break;
    u32 ci = digits[i];
    if (ci == 0) continue;
    for (u32 t = 0; t < ci; ++t) {
      std::size_t newlen = prod.size() + pi;
      if (cap < kExact) newlen = std::min<std::size_t>(newlen, static_cast<std::size_t>(cap));
      std::vector<u32> next(newlen, 0);
      for (std::size_t a = 0; a < prod.size() && a < newlen; ++a) {
        next[a] = (next[a] + prod[a]) % p;
        if (a + pi < newlen) next[a + pi] = (next[a + pi] + prod[a]) % p;
      }
      prod = std::move(next);
    }
  }
  std::vector<i64> ints(prod.begin(), prod.end());
  if (!ints.empty()) ints[0] = static_cast<i64>(ints[0]) - 1;
  return LaurentSeries::from_ints(A, 0, ints, cap);
}

namespace {

// Powers u^k of u = sigma(T')/T' for a fixed action.  Their coefficients lie
// in F_p, so one table serves every coefficient algebra of characteristic p.
struct PowerTable {
  i64 kmin = 0, kmax = -1, R = 0;
  std::vector<std::vector<u32>> pw;
};

std::vector<u32> mul_trunc(const std::vector<u32>& a, const std::vector<u32>& b, std::size_t R, u32 p) {
  std::vector<u64> acc(R, 0);
  const u64 lim = (~0ULL) - static_cast<u64>(p) * p;
  for (std::size_t i = 0; i < a.size() && i < R; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size() && i + j < R; ++j) {
      u64& x = acc[i + j];
      x += static_cast<u64>(a[i]) * b[j];
      if (x > lim) x %= p;
    }
  }
  std::vector<u32> out(R);
  for (std::size_t i = 0; i < R; ++i) out[i] = static_cast<u32>(acc[i] % p);
  return out;
}

std::mutex g_table_mutex;
std::map<std::tuple<u32, int, int>, std::shared_ptr<const PowerTable>> g_tables;

std::shared_ptr<const PowerTable> power_table(u32 p, const RingAction& act, int j, i64 kmin, i64 kmax, i64 R) {
  auto key = std::make_tuple(p, static_cast<int>(act.kind), j);
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto it = g_tables.find(key);
  if (it != g_tables.end() && it->second->kmin <= kmin && it->second->kmax >= kmax && it->second->R >= R) return it->second;
  if (it != g_tables.end()) {
    kmin = std::min(kmin, it->second->kmin);
    kmax = std::max(kmax, it->second->kmax);
    R = std::max(R, it->second->R);
  }
  auto t = std::make_shared<PowerTable>();
  t->kmin = std::min<i64>(kmin, 0);
  t->kmax = std::max<i64>(kmax, 0);
  t->R = R;
  auto A = CoefficientAlgebra::prime_field(p);
  LaurentSeries g = gamma_image(A, act, R + 1);
  LaurentSeries u = shift(g, -1);
  LaurentSeries uinv = invert(u, R);
  auto dense = [&](const LaurentSeries& s) {
    std::vector<u32> v(static_cast<std::size_t>(R), 0);
    for (i64 e = 0; e < R; ++e) {
      const u32* c = s.coeff_ptr(e);
      if (c) v[static_cast<std::size_t>(e)] = c[0];
    }
    return v;
  };
  const std::size_t Rs = static_cast<std::size_t>(R);
  std::vector<u32> ud = dense(u), uid = dense(uinv);
  t->pw.assign(static_cast<std::size_t>(t->kmax - t->kmin + 1), {});
  std::vector<u32> one(Rs, 0);
  if (Rs) one[0] = 1;
  t->pw[static_cast<std::size_t>(-t->kmin)] = one;
  for (i64 k = 1; k <= t->kmax; ++k)
    t->pw[static_cast<std::size_t>(k - t->kmin)] = mul_trunc(t->pw[static_cast<std::size_t>(k - 1 - t->kmin)], ud, Rs, p);
  for (i64 k = -1; k >= t->kmin; --k)
    t->pw[static_cast<std::size_t>(k - t->kmin)] = mul_trunc(t->pw[static_cast<std::size_t>(k + 1 - t->kmin)], uid, Rs, p);
  g_tables[key] = t;
  return t;
}

}  // namespace

LaurentSeries apply_action(const RingAction& act, const LaurentSeries& f, i64 target) {
  if (act.kind == ActionKind::Phi) {
    LaurentSeries out = phi(f);
    return target < kExact ? out.truncated(target) : out;
  }
  const u32 p = f.p();
  int j = act.power;
  if (act.kind == ActionKind::Delta) {
    j = ((j % static_cast<int>(p - 1)) + static_cast<int>(p - 1)) % static_cast<int>(p - 1);
    if (j == 0) return target < kExact ? f.truncated(target) : f;
  } else if (j == 0) {
    return target < kExact ? f.truncated(target) : f;
  }
  i64 P = std::min(target, f.precision());
  if (f.is_zero()) return LaurentSeries::zero(f.algebra(), P);
  // Constants are fixed.
  if (f.valuation() == 0 && f.stored() == 1) return P < kExact ? f.truncated(P) : f;
  if (P >= kExact) {
    if (act.kind == ActionKind::Gamma) return substitute(f, gamma_image(f.algebra(), act, 0), target);
    fail(ErrorKind::InsufficientPrecision, "delta action on a polynomial needs a finite target");
  }
  const i64 v = f.valuation();
  if (v >= P) return LaurentSeries::zero(f.algebra(), P);
  const i64 hi = std::min(f.top(), P);
  auto t = power_table(p, {act.kind, j}, j, v, hi - 1, P - v);
  const std::size_t r = static_cast<std::size_t>(f.r());
  std::vector<u32> out(static_cast<std::size_t>(P - v) * r, 0);
  const u32* fc = f.flat().data();
  for (i64 k = v; k < hi; ++k) {
    const u32* c = fc + static_cast<std::size_t>(k - v) * r;
    const std::vector<u32>& w = t->pw[static_cast<std::size_t>(k - t->kmin)];
    const std::size_t n = static_cast<std::size_t>(P - k);
    u32* o = out.data() + static_cast<std::size_t>(k - v) * r;
    for (std::size_t a = 0; a < r; ++a) {
      const u32 ca = c[a];
      if (!ca) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (!w[i]) continue;
        u32& x = o[i * r + a];
        x = static_cast<u32>((x + static_cast<u64>(ca) * w[i]) % p);
      }
    }
  }
  return LaurentSeries(f.algebra(), v, P, std::move(out));
}

}  // namespace pgm
