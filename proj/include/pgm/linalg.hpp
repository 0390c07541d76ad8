#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pgm {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

u32 mod_pow(u32 a, u64 e, u32 p);
u32 mod_inv(u32 a, u32 p);
inline u32 mod_reduce(i64 x, u32 p) {
  i64 r = x % static_cast<i64>(p);
  return static_cast<u32>(r < 0 ? r + p : r);
}
bool is_prime(u32 n);
// Smallest generator of (Z/p)^x.
u32 primitive_root(u32 p);

// Dense matrix over F_p, row-major.
class FpMat {
 public:
  FpMat() = default;
  FpMat(std::size_t rows, std::size_t cols, u32 p) : r_(rows), c_(cols), p_(p), a_(rows * cols, 0) {}

  static FpMat identity(std::size_t n, u32 p);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  u32 p() const { return p_; }
  u32& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  u32 at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  u32* row(std::size_t i) { return a_.data() + i * c_; }
  const u32* row(std::size_t i) const { return a_.data() + i * c_; }
  std::vector<u32> column(std::size_t j) const;
  void set_column(std::size_t j, const std::vector<u32>& v);

  FpMat operator*(const FpMat& o) const;
  FpMat operator+(const FpMat& o) const;
  FpMat operator-(const FpMat& o) const;
  std::vector<u32> apply(const std::vector<u32>& v) const;
  FpMat transpose() const;
  FpMat hcat(const FpMat& o) const;
  FpMat vcat(const FpMat& o) const;
  FpMat select_rows(std::size_t from, std::size_t to) const;
  FpMat select_cols(const std::vector<std::size_t>& idx) const;
  bool is_zero() const;
  bool operator==(const FpMat& o) const { return r_ == o.r_ && c_ == o.c_ && p_ == o.p_ && a_ == o.a_; }

 private:
  std::size_t r_ = 0, c_ = 0;
  u32 p_ = 2;
  std::vector<u32> a_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref_inplace(FpMat& m);
std::size_t rank(const FpMat& m);
// Columns form a basis of the right kernel {x : m x = 0}.
FpMat kernel(const FpMat& m);
// Some X with m X = rhs, if one exists.
std::optional<FpMat> solve(const FpMat& m, const FpMat& rhs);
// Columns form a basis of the column space (a subset of the columns of m).
FpMat column_basis(const FpMat& m);

// Incrementally built subspace of F_p^n with membership tests.
class Subspace {
 public:
  Subspace(std::size_t n, u32 p) : n_(n), p_(p) {}
  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient() const { return n_; }
  std::vector<u32> reduce(std::vector<u32> v) const;
  bool contains(const std::vector<u32>& v) const;
  // Returns true when v enlarged the span.
  bool add(const std::vector<u32>& v);

 private:
  std::size_t n_;
  u32 p_;
  std::vector<std::vector<u32>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace pgm
