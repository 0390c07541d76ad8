#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pgm/pgmod.hpp"

namespace pgm {

// Degree-1 cochain (a, b) in user coordinates: a is the phi-component and b
// the gamma-component, with cocycle condition (gamma-1)a = (phi-1)b.
struct Cocycle {
  SeriesMatrix a, b;
  bool certified = false;
};

struct CohomologyReport {
  std::size_t h0 = 0, h1 = 0, h2 = 0;
  bool over_fp = false;  // dimensions over F_p (non-field coefficients)
  bool euler_ok = false;
  bool duality_ok = false;
  bool duality_checked = false;
  int h1_window = 0;
  i64 height = 0;
  i64 precision = 0;
  std::vector<std::string> certificates;
};

// Finite certified models of the Herr complex of one module, all taken on the
// Delta-invariants and computed in the stabilized lattice:
//  H^0: kernel of (phi-1, gamma-1, delta-1) on T'^{-m0}L / T'L;
//  H^2: the psi-model  e(T'^{n'}L / T'L) / e((psi-1), (gamma-1) images);
//  H^1: window cocycles (a, b) modulo T'L with a in T'^{-c}L, the width c
//       doubled until the count equals the Euler characteristic value.
class Herr {
 public:
  explicit Herr(PhiGammaModule M, Config cfg = {});
  ~Herr();
  Herr(Herr&&) noexcept;
  Herr& operator=(Herr&&) noexcept;

  const PhiGammaModule& module() const { return M_; }
  const Config& config() const { return cfg_; }
  const Frame& frame();
  // F_p-dimension of one A-dimension (dim_Fp A for fields, 1 otherwise).
  std::size_t divisor() const;

  std::size_t h0_fp();
  std::size_t h1_fp();
  std::size_t h2_fp();
  std::size_t h0() { return h0_fp() / divisor(); }
  std::size_t h1() { return h1_fp() / divisor(); }
  std::size_t h2() { return h2_fp() / divisor(); }

  // Basis of H^0 over A (over F_p for non-field A) in user coordinates,
  // exact below `prec`.
  std::vector<SeriesMatrix> h0_basis(i64 prec);
  // Same for ker(phi - 1) on M, without the Gamma condition.
  std::size_t phi_kernel_fp();
  std::vector<SeriesMatrix> phi_kernel_basis(i64 prec);
  // Basis of H^1 over A (field case) or over F_p, with full representatives.
  std::vector<Cocycle> h1_basis();
  int h1_window();

  // F_p-coordinates of the class of a cocycle along the F_p-basis
  // {lambda_t * z_s} (s outer, t over the A-basis) of the A-basis z_s.
  std::vector<u32> h1_coordinates(const Cocycle& c);
  // A-coordinates along h1_basis() (field coefficients).
  std::vector<Elem> h1_A_coordinates(const Cocycle& c);
  bool is_coboundary(const Cocycle& c);
  // Raises NotACocycle; projects to Delta-invariants when needed.
  Cocycle checked_cocycle(const Cocycle& c);

  // F_p-coordinates in H^2 of a degree-2 cochain of the phi-model.
  std::vector<u32> h2_class(const SeriesMatrix& c);
  // F_p-coordinates in H^2 of lambda * (class of c) for each A-basis element.
  std::vector<std::vector<u32>> h2_class_multiples(const std::vector<u32>& cls);

  CohomologyReport report(bool with_duality = true);

  struct Impl;

 private:
  PhiGammaModule M_;
  Config cfg_;
  std::unique_ptr<Impl> impl_;
};

// Pairing H^1(M) x H^1(M*) -> H^2(A(1)) = A via the cup product and the
// contraction M (x) M* -> A(1); the identification of H^2(A(1)) with A is
// fixed by a chosen generator, so values are defined up to a global unit.
class CupPairing {
 public:
  CupPairing(const PhiGammaModule& M, Config cfg = {});
  ~CupPairing();
  Herr& left() { return *left_; }
  Herr& right() { return *right_; }
  Elem pair(const Cocycle& alpha, const Cocycle& beta);
  // Entries pair(basis_i(M), basis_j(M*)).
  std::vector<std::vector<Elem>> matrix();

 private:
  std::unique_ptr<Herr> left_, right_, twist_;
  std::vector<std::vector<u32>> kappa_multiples_;
};

// Invertibility over a field algebra by Gaussian elimination.
bool invertible_over(const AlgPtr& A, std::vector<std::vector<Elem>> m);

// Hom(M1, M2) as H^0(dual(M1) (x) M2) with basis as d2 x d1 matrices.
struct HomSpace {
  std::size_t dim = 0;  // over A (field) or F_p
  std::vector<SeriesMatrix> basis;
};
HomSpace hom_space(const PhiGammaModule& M1, const PhiGammaModule& M2, const Config& cfg = {}, i64 prec = 64);

// Reads the class of a block upper triangular module [[M2, *], [0, M1]]
// whose sub has rank sub_rank, as a cocycle of Hom(M1, M2) in vec layout.
struct ExtensionClass {
  PhiGammaModule sub, quotient, hom;
  Cocycle cocycle;
};
ExtensionClass class_of_extension(const PhiGammaModule& E, std::size_t sub_rank, i64 prec);

struct ObstructionClass {
  std::vector<std::vector<u32>> coordinates;  // one H^2(ad M) vector per A-basis element of I
  bool lifts_exist = false;
  std::size_t h2_ad = 0;
};
// M over a field A, lifts over dual_numbers(A).  Delta lift defaults to the
// tautological one.
ObstructionClass obstruction_class(const PhiGammaModule& M, const SeriesMatrix& phi_lift, const SeriesMatrix& gamma_lift,
                                   const SeriesMatrix* delta_lift, const AlgPtr& Aprime, const Config& cfg = {});
// Matrices over A viewed over A[eps] (tautological lift).
SeriesMatrix lift_to(const SeriesMatrix& m, const AlgPtr& Aprime);
SeriesMatrix reduce_from(const SeriesMatrix& m, const AlgPtr& A);
// dim Lift(x, A[F]) = h1(ad M) * dim_A F.
std::size_t lift_space_dim(const PhiGammaModule& M, std::size_t dim_F, const Config& cfg = {});

}  // namespace pgm
