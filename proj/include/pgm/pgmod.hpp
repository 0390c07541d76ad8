#pragma once

#include <optional>
#include <string>

#include "pgm/matrix.hpp"

namespace pgm {

// Knobs shared by the module and cohomology layers.  Doubling every field
// must never change a reported dimension.
struct Config {
  i64 precision = 96;       // T'-adic working precision for series
  int h1_window_start = 2;  // first a-window width tried for H^1
  int h1_window_budget = 512;
  int saturation_cap = 64;  // lattice saturation rounds
  int continuity_bound = 0; // 0: d * dim(A)
  Config doubled() const {
    Config c = *this;
    c.precision *= 2;
    c.h1_window_start *= 2;
    c.h1_window_budget *= 2;
    c.saturation_cap *= 2;
    return c;
  }
};

// Free module over A((T')) with the matrices of phi, gamma and delta on the
// standard basis.  Coordinates are columns: sigma(x) = Mat_sigma * sigma(x).
class PhiGammaModule {
 public:
  PhiGammaModule() = default;
  PhiGammaModule(SeriesMatrix phi, SeriesMatrix gamma, SeriesMatrix delta);

  const AlgPtr& algebra() const { return phi_.algebra(); }
  u32 p() const { return algebra()->p(); }
  std::size_t rank() const { return phi_.rows(); }
  const SeriesMatrix& phi() const { return phi_; }
  const SeriesMatrix& gamma() const { return gamma_; }
  const SeriesMatrix& delta() const { return delta_; }
  const SeriesMatrix& matrix(ActionKind k) const;
  // Lowest precision among the matrix entries.
  i64 precision() const;

  // sigma(x) for a coordinate matrix x (d rows); Delta powers are iterated.
  SeriesMatrix act(const RingAction& act, const SeriesMatrix& x, i64 target) const;

 private:
  SeriesMatrix phi_, gamma_, delta_;
};

struct CharacterParams {
  Elem a_phi, c_gamma, c_delta;
};

PhiGammaModule character_module(const AlgPtr& A, const CharacterParams& c);
PhiGammaModule trivial_module(const AlgPtr& A, std::size_t d = 1);
PhiGammaModule unramified_module(const AlgPtr& A, const Elem& a);
// A(n): delta acts through the n-th power of the mod p cyclotomic character.
PhiGammaModule cyclotomic_module(const AlgPtr& A, i64 n);
// Precision for modules derived from M (duals, Hom): M's own precision,
// capped at 4 * cfg.precision.
i64 derived_precision(const PhiGammaModule& M, const Config& cfg);
PhiGammaModule tensor(const PhiGammaModule& M, const PhiGammaModule& N, i64 prec);
PhiGammaModule dual(const PhiGammaModule& M, i64 prec);
PhiGammaModule tate_twist(const PhiGammaModule& M, i64 n);
PhiGammaModule cartier_dual(const PhiGammaModule& M, i64 prec);
PhiGammaModule direct_sum(const PhiGammaModule& M, const PhiGammaModule& N);
// Scalar extension from a prime field to B (same characteristic).
PhiGammaModule base_change(const PhiGammaModule& M, const AlgPtr& B);
// Internal Hom(M1, M2) = dual(M1) (x) M2; the coordinate of index
// col*d2 + row is the (row, col) entry of a d2 x d1 matrix.
PhiGammaModule hom_module(const PhiGammaModule& M1, const PhiGammaModule& M2, i64 prec);
SeriesMatrix vec_of(const SeriesMatrix& F);
SeriesMatrix unvec(const SeriesMatrix& v, std::size_t rows, std::size_t cols);

// The Delta-averaging idempotent e = -sum_{j<p-1} delta^j on coordinates.
SeriesMatrix delta_average(const PhiGammaModule& M, const SeriesMatrix& x, i64 target);
// psi_M(x) = psi(Phi^{-1} x) entrywise.
SeriesMatrix psi_on_module(const PhiGammaModule& M, const SeriesMatrix& x, i64 target);

// Block upper triangular module [[M2, *], [0, M1]] from a degree-1 cocycle
// (a, b) of Hom(M1, M2) given as d2 x d1 matrices: the top right blocks are
// a*Phi1 and b*Gamma1.  Non Delta-invariant cocycles are averaged first.
PhiGammaModule extension_from_cocycle(const PhiGammaModule& M1, const PhiGammaModule& M2, const SeriesMatrix& a,
                                      const SeriesMatrix& b, i64 prec);

// The stabilized lattice T'^{-m} * (saturated lattice) and the module
// matrices with respect to its basis.
struct Frame {
  SeriesMatrix B;     // user coordinates = B * frame coordinates
  SeriesMatrix Binv;
  SeriesMatrix phi, gamma, delta;  // in the frame basis
  SeriesMatrix phi_inv;
  i64 shift = 0;   // m
  i64 height = 0;  // h: T'^h Phi^{-1} integral in the frame
  i64 m0 = 1;      // ceil(h/(p-1)) + 1
  i64 precision = 0;
  int saturation_rounds = 0;
};

struct LatticeSpec {
  i64 shift = 0;
  bool phi_stable = false;
  bool psi_stable = false;
  i64 height = 0;
  i64 m0 = 1;
  int saturation_rounds = 0;
};

Frame stabilize(const PhiGammaModule& M, const Config& cfg);
LatticeSpec stabilize_lattice(const PhiGammaModule& M, const Config& cfg);
// Shift, height and m0 of the T'-power rescaled standard lattice for a
// Frobenius matrix alone.
LatticeSpec phi_lattice(const SeriesMatrix& phi, i64 prec);

struct ContinuityWitness {
  bool continuous = false;
  int n = 0;  // (gamma - 1)^n maps the lattice into T' * lattice
};
ContinuityWitness is_continuous(const PhiGammaModule& M, const Config& cfg);

struct ValidationResult {
  i64 height = 0;
  ContinuityWitness continuity;
};
// Raises NotEtale, CommutationFailure, DeltaOrderFailure or NotContinuous.
ValidationResult validate(const PhiGammaModule& M, const Config& cfg);

// Checks for the lemma psi(T'^{h+np} L) in T'^n L in psi(T'^{np} L) on the
// stabilized lattice; returns false with a message on the first violation.
bool check_psi_bounds(const PhiGammaModule& M, int n, const Config& cfg, std::string* why = nullptr);

}  // namespace pgm
