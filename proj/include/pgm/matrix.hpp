#pragma once

#include <vector>

#include "pgm/laurent.hpp"

namespace pgm {

// Dense matrix with entries in A((T')).  Vectors are single-column matrices.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(AlgPtr A, std::size_t rows, std::size_t cols);  // exact zeros

  static SeriesMatrix identity(AlgPtr A, std::size_t n);
  static SeriesMatrix scalar(std::size_t n, const LaurentSeries& s);

  const AlgPtr& algebra() const { return A_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  LaurentSeries& operator()(std::size_t i, std::size_t j) { return e_[i * c_ + j]; }
  const LaurentSeries& operator()(std::size_t i, std::size_t j) const { return e_[i * c_ + j]; }

  SeriesMatrix operator*(const SeriesMatrix& o) const;
  SeriesMatrix operator+(const SeriesMatrix& o) const;
  SeriesMatrix operator-(const SeriesMatrix& o) const;
  SeriesMatrix transpose() const;
  SeriesMatrix truncated(i64 prec) const;
  SeriesMatrix shifted(i64 k) const;
  SeriesMatrix scaled(const Elem& c) const;
  SeriesMatrix scaled(const LaurentSeries& s) const;
  SeriesMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const SeriesMatrix& b);
  SeriesMatrix column(std::size_t j) const { return block(0, j, r_, 1); }
  SeriesMatrix hcat(const SeriesMatrix& o) const;

  // Minimum entry valuation; kExact for the zero matrix.
  i64 valuation() const;
  // Minimum entry precision.
  i64 precision() const;
  bool is_zero() const;
  bool is_integral() const { return valuation() >= 0; }
  std::string to_string() const;

 private:
  AlgPtr A_;
  std::size_t r_ = 0, c_ = 0;
  std::vector<LaurentSeries> e_;
};

// Inverse over A((T')); raises NotEtale when the residue matrix is singular
// at the known precision.  Inexact results are truncated at `target`.
SeriesMatrix inverse(const SeriesMatrix& m, i64 target);
SeriesMatrix kron(const SeriesMatrix& a, const SeriesMatrix& b);
SeriesMatrix apply_action(const RingAction& act, const SeriesMatrix& m, i64 target);
bool agree(const SeriesMatrix& a, const SeriesMatrix& b);
// A basis (as columns) of the F_q[[T']]-span of the columns of m, which must
// have full row rank.  Pivots are normalized to powers of T'.  Field A only.
SeriesMatrix column_hnf(const SeriesMatrix& m, i64 target);
// Exponent of the first unit coefficient, or kExact if none is known.
i64 unit_valuation(const LaurentSeries& f);

}  // namespace pgm
