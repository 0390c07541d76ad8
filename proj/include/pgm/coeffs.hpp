#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pgm/linalg.hpp"

namespace pgm {

// Coordinates of an algebra element in the F_p-basis of the algebra.
using Elem = std::vector<u32>;

class CoefficientAlgebra;
using AlgPtr = std::shared_ptr<const CoefficientAlgebra>;

// A finite local commutative F_p-algebra given by structure constants.
// Finite fields use the power basis 1, x, ..., x^{r-1} of F_p[x]/(f).
class CoefficientAlgebra {
 public:
  enum class Kind { FiniteField, LocalAlgebra };

  static AlgPtr prime_field(u32 p);
  // Uses the first monic irreducible polynomial (ordered by coefficients,
  // constant term least significant) whose root generates the unit group.
  static AlgPtr finite_field(u32 p, int degree);
  // modulus: monic, lowest coefficient first, size degree + 1.
  static AlgPtr finite_field_with_modulus(u32 p, const std::vector<u32>& modulus);
  // table[(i*r + j)*r + k] is the coefficient of b_k in b_i*b_j.
  static AlgPtr local_algebra(u32 p, int dim, const std::vector<u32>& table,
                              const std::vector<int>& max_ideal);
  // base[eps]/(eps^2) with basis (b_0..b_{r-1}, eps*b_0..eps*b_{r-1}).
  static AlgPtr dual_numbers(const AlgPtr& base);

  Kind kind() const { return kind_; }
  u32 p() const { return p_; }
  int dim() const { return r_; }
  int residue_degree() const { return residue_degree_; }
  bool is_field() const { return max_ideal_.empty(); }
  const std::vector<int>& max_ideal() const { return max_ideal_; }
  const std::vector<u32>& modulus() const { return modulus_; }
  const std::vector<u32>& table() const { return table_; }
  // For dual_numbers(base): the base algebra, else null.
  const AlgPtr& base() const { return base_; }
  // Smallest e with m^e = 0 (1 for fields).
  int nilpotency_index() const { return nil_index_; }
  // Number of elements; only meaningful when small.
  u64 order() const;

  Elem zero() const { return Elem(r_, 0); }
  const Elem& one() const { return one_; }
  Elem from_int(i64 v) const;
  Elem basis(int i) const;

  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem neg(const Elem& x) const;
  Elem scale(u32 s, const Elem& x) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem pow(const Elem& x, u64 e) const;
  // out += x*y.
  void mul_acc(u32* out, const u32* x, const u32* y) const;
  bool is_zero(const u32* x) const;
  bool is_zero(const Elem& x) const { return is_zero(x.data()); }
  bool is_unit(const u32* x) const;
  bool is_unit(const Elem& x) const { return is_unit(x.data()); }
  Elem inverse(const Elem& x) const;
  // Matrix of y -> x*y in the F_p-basis (columns are images of basis vectors).
  FpMat mult_matrix(const Elem& x) const;
  // All elements, in lexicographic order of coordinates (requires order() <= 2^20).
  std::vector<Elem> elements() const;
  // Nonzero elements of a field, ordered as powers of the chosen generator.
  std::vector<Elem> field_units() const;
  // A generator of the unit group of a field.
  Elem field_generator() const;
  std::string describe() const;
  bool same_as(const CoefficientAlgebra& o) const;

 private:
  CoefficientAlgebra() = default;
  void finalize();

  Kind kind_ = Kind::FiniteField;
  u32 p_ = 3;
  int r_ = 1;
  int residue_degree_ = 1;
  int nil_index_ = 1;
  std::vector<u32> table_;
  std::vector<int> max_ideal_;
  std::vector<u32> modulus_;
  Elem one_;
  AlgPtr base_;
  // Sparse structure constants: for each (i,j) the nonzero (k, c).
  std::vector<std::vector<std::pair<int, u32>>> sparse_;
};

// p-adic integers modulo p^k with p^k < 2^62.
struct PadicInt {
  u32 p = 3;
  int k = 1;
  u64 value = 0;  // in [0, p^k)
};

u64 pow_u64(u64 base, int e);
// Largest k with p^k < 2^62.
int max_padic_digits(u32 p);
// The (p-1)-st root of unity congruent to a, by iterating x -> x^p.
PadicInt teichmuller(u32 p, u32 a, int k);
// v_p(n!) by Legendre's formula.
i64 vp_factorial(u32 p, u64 n);
// binom(c, n) mod p from the falling factorial with exact valuation cancellation.
u32 padic_binomial(const PadicInt& c, u64 n);
// binom(c, n) mod p via base-p digits of both arguments.
u32 lucas_binomial(const std::vector<u32>& c_digits, u64 n, u32 p);
std::vector<u32> padic_digits(const PadicInt& c);

// The fixed value of the cyclotomic character on the pro-p generator gamma.
inline u64 chi_gamma(u32 p) { return 1 + static_cast<u64>(p); }

}  // namespace pgm
