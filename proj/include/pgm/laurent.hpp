#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pgm/coeffs.hpp"

namespace pgm {

// Precision of a series known exactly (a Laurent polynomial).
constexpr i64 kExact = std::numeric_limits<i64>::max() / 8;
inline i64 clamp_prec(i64 x) { return x > kExact ? kExact : x; }

// An element of A((T')) known modulo T'^precision.  Coefficients are stored
// for exponents valuation .. valuation+stored()-1; the remaining coefficients
// below the precision are zero.  The stored leading coefficient is nonzero.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  explicit LaurentSeries(AlgPtr A);  // exact zero
  // flat holds dim(A) coordinates per exponent, starting at exponent val.
  LaurentSeries(AlgPtr A, i64 val, i64 prec, std::vector<u32> flat);

  static LaurentSeries zero(AlgPtr A, i64 prec = kExact);
  static LaurentSeries one(AlgPtr A);
  static LaurentSeries constant(AlgPtr A, const Elem& c);
  static LaurentSeries monomial(AlgPtr A, i64 e);
  static LaurentSeries monomial(AlgPtr A, i64 e, const Elem& c);
  // Scalar (F_p) coefficients for exponents val, val+1, ...
  static LaurentSeries from_ints(AlgPtr A, i64 val, const std::vector<i64>& ints, i64 prec = kExact);

  const AlgPtr& algebra() const { return A_; }
  int r() const { return A_->dim(); }
  u32 p() const { return A_->p(); }
  // Lowest exponent with a nonzero coefficient; equals precision() for zero.
  i64 valuation() const { return val_; }
  i64 precision() const { return prec_; }
  bool exact() const { return prec_ >= kExact; }
  bool is_zero() const { return len_ == 0; }
  std::size_t stored() const { return len_; }
  // One past the highest stored exponent.
  i64 top() const { return val_ + static_cast<i64>(len_); }
  const std::vector<u32>& flat() const { return c_; }

  // Null when the coefficient is zero; throws past the precision.
  const u32* coeff_ptr(i64 e) const;
  Elem coeff(i64 e) const;
  bool leading_is_unit() const;

  LaurentSeries truncated(i64 prec) const;
  // Coefficients in [lo, hi) only (others dropped), keeping the precision.
  LaurentSeries window(i64 lo, i64 hi) const;
  std::string to_string() const;

 private:
  void normalize();
  AlgPtr A_;
  i64 val_ = kExact;
  i64 prec_ = kExact;
  std::size_t len_ = 0;
  std::vector<u32> c_;
};

LaurentSeries add(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries sub(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries neg(const LaurentSeries& f);
LaurentSeries scale(const LaurentSeries& f, const Elem& c);
LaurentSeries scale_fp(const LaurentSeries& f, u32 s);
// Multiplication by T'^k.
LaurentSeries shift(const LaurentSeries& f, i64 k);
// Exact product on [v_f+v_g, min(N_f+v_g, N_g+v_f)).
LaurentSeries mul(const LaurentSeries& f, const LaurentSeries& g);
// 1/f; relative precision preserved and the result truncated at `target`.
LaurentSeries invert(const LaurentSeries& f, i64 target = kExact);
LaurentSeries pow(const LaurentSeries& f, i64 e, i64 target = kExact);
// T' -> T'^p (exact modulo p).
LaurentSeries phi(const LaurentSeries& f);
// The left inverse of phi: psi(T'^{pj+r}) = (-1)^r T'^j for 0 <= r < p.
LaurentSeries psi(const LaurentSeries& f);
// f(g) for val(g) >= 1 with unit leading coefficient; truncated at target.
LaurentSeries substitute(const LaurentSeries& f, const LaurentSeries& g, i64 target = kExact);
// True when f and g agree on the common known window.
bool agree(const LaurentSeries& f, const LaurentSeries& g);
// True when every known coefficient below min(prec, bound) is zero.
bool vanishes_below(const LaurentSeries& f, i64 bound);

inline LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) { return add(f, g); }
inline LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) { return sub(f, g); }
inline LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) { return mul(f, g); }

// The semilinear ring actions.  Gamma is the pro-p generator with chi = 1+p,
// Delta^j is the j-th power of the generator of the torsion part, acting
// through the Teichmuller lift of the smallest primitive root mod p.
enum class ActionKind { Phi, Gamma, Delta };

struct RingAction {
  ActionKind kind = ActionKind::Phi;
  int power = 1;  // only used for Delta
};

// (1+T')^c - 1 for the action's exponent c, on the window [1, N).
LaurentSeries gamma_image(AlgPtr A, const RingAction& act, i64 N);
// sigma(f), truncated at target where the action is not exact.
LaurentSeries apply_action(const RingAction& act, const LaurentSeries& f, i64 target);
// The integer exponent c with sigma(1+T') = (1+T')^c, modulo p^k.
PadicInt action_exponent(u32 p, const RingAction& act, int k);

}  // namespace pgm
