#include "pgm/linalg.hpp"

#include <stdexcept>

namespace pgm {

u32 mod_pow(u32 a, u64 e, u32 p) {
  u64 r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

u32 mod_inv(u32 a, u32 p) {
  a %= p;
  if (a == 0) throw std::domain_error("mod_inv of zero");
  return mod_pow(a, p - 2, p);
}

bool is_prime(u32 n) {
  if (n < 2) return false;
  for (u32 d = 2; static_cast<u64>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u32 primitive_root(u32 p) {
  if (p == 2) return 1;
  std::vector<u32> fac;
  u32 n = p - 1;
  for (u32 d = 2; static_cast<u64>(d) * d <= n; ++d) {
    if (n % d == 0) {
      fac.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fac.push_back(n);
  for (u32 g = 2; g < p; ++g) {
    bool ok = true;
    for (u32 q : fac)
      if (mod_pow(g, (p - 1) / q, p) == 1) ok = false;
    if (ok) return g;
  }
  return 1;
}

FpMat FpMat::identity(std::size_t n, u32 p) {
  FpMat m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % p;
  return m;
}

std::vector<u32> FpMat::column(std::size_t j) const {
  std::vector<u32> v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = at(i, j);
  return v;
}

void FpMat::set_column(std::size_t j, const std::vector<u32>& v) {
  for (std::size_t i = 0; i < r_; ++i) at(i, j) = v[i];
}

FpMat FpMat::operator*(const FpMat& o) const {
  if (c_ != o.r_) throw std::invalid_argument("FpMat product shape");
  FpMat out(r_, o.c_, p_);
  std::vector<u64> acc(o.c_);
  for (std::size_t i = 0; i < r_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const u32* ri = row(i);
    for (std::size_t k = 0; k < c_; ++k) {
      u64 x = ri[k];
      if (!x) continue;
      const u32* rk = o.row(k);
      for (std::size_t j = 0; j < o.c_; ++j) acc[j] += x * rk[j];
      if ((k & 1023) == 1023)
        for (auto& a : acc) a %= p_;
    }
    u32* out_i = out.row(i);
    for (std::size_t j = 0; j < o.c_; ++j) out_i[j] = static_cast<u32>(acc[j] % p_);
  }
  return out;
}

FpMat FpMat::operator+(const FpMat& o) const {
  FpMat out(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = (a_[i] + o.a_[i]) % p_;
  return out;
}

FpMat FpMat::operator-(const FpMat& o) const {
  FpMat out(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = (a_[i] + p_ - o.a_[i]) % p_;
  return out;
}

std::vector<u32> FpMat::apply(const std::vector<u32>& v) const {
  std::vector<u32> out(r_, 0);
  for (std::size_t i = 0; i < r_; ++i) {
    u64 s = 0;
    const u32* ri = row(i);
    for (std::size_t j = 0; j < c_; ++j) s += static_cast<u64>(ri[j]) * v[j];
    out[i] = static_cast<u32>(s % p_);
  }
  return out;
}

FpMat FpMat::transpose() const {
  FpMat t(c_, r_, p_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
  return t;
}

FpMat FpMat::hcat(const FpMat& o) const {
  if (r_ != o.r_) throw std::invalid_argument("hcat shape");
  FpMat m(r_, c_ + o.c_, p_);
  for (std::size_t i = 0; i < r_; ++i) {
    for (std::size_t j = 0; j < c_; ++j) m.at(i, j) = at(i, j);
    for (std::size_t j = 0; j < o.c_; ++j) m.at(i, c_ + j) = o.at(i, j);
  }
  return m;
}

FpMat FpMat::vcat(const FpMat& o) const {
  if (c_ != o.c_) throw std::invalid_argument("vcat shape");
  FpMat m(r_ + o.r_, c_, p_);
  std::copy(a_.begin(), a_.end(), m.a_.begin());
  std::copy(o.a_.begin(), o.a_.end(), m.a_.begin() + static_cast<std::ptrdiff_t>(a_.size()));
  return m;
}

FpMat FpMat::select_rows(std::size_t from, std::size_t to) const {
  FpMat m(to - from, c_, p_);
  for (std::size_t i = from; i < to; ++i)
    for (std::size_t j = 0; j < c_; ++j) m.at(i - from, j) = at(i, j);
  return m;
}

FpMat FpMat::select_cols(const std::vector<std::size_t>& idx) const {
  FpMat m(r_, idx.size(), p_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) m.at(i, k) = at(i, idx[k]);
  return m;
}

bool FpMat::is_zero() const {
  for (u32 x : a_)
    if (x) return false;
  return true;
}

std::vector<std::size_t> rref_inplace(FpMat& m) {
  const u32 p = m.p();
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(r, j));
    u32 inv = mod_inv(m.at(r, c), p);
    u32* rr = m.row(r);
    for (std::size_t j = c; j < m.cols(); ++j) rr[j] = static_cast<u32>(static_cast<u64>(rr[j]) * inv % p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      u32 f = m.at(i, c);
      if (!f) continue;
      u32* ri = m.row(i);
      u64 nf = p - f;
      for (std::size_t j = c; j < m.cols(); ++j)
        if (rr[j]) ri[j] = static_cast<u32>((ri[j] + nf * rr[j]) % p);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::size_t rank(const FpMat& m) {
  FpMat t(m);
  return rref_inplace(t).size();
}

FpMat kernel(const FpMat& m) {
  FpMat t(m);
  auto piv = rref_inplace(t);
  const u32 p = m.p();
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  FpMat k(m.cols(), free.size(), p);
  for (std::size_t f = 0; f < free.size(); ++f) {
    k.at(free[f], f) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) k.at(piv[i], f) = (p - t.at(i, free[f])) % p;
  }
  return k;
}

std::optional<FpMat> solve(const FpMat& m, const FpMat& rhs) {
  FpMat aug = m.hcat(rhs);
  auto piv = rref_inplace(aug);
  FpMat x(m.cols(), rhs.cols(), m.p());
  for (std::size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < rhs.cols(); ++j) x.at(piv[i], j) = aug.at(i, m.cols() + j);
  }
  return x;
}

FpMat column_basis(const FpMat& m) {
  FpMat t(m);
  auto piv = rref_inplace(t);
  return m.select_cols(piv);
}

std::vector<u32> Subspace::reduce(std::vector<u32> v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    u32 f = v[pivots_[k]];
    if (!f) continue;
    u64 nf = p_ - f;
    const auto& r = rows_[k];
    for (std::size_t j = 0; j < n_; ++j)
      if (r[j]) v[j] = static_cast<u32>((v[j] + nf * r[j]) % p_);
  }
  return v;
}

bool Subspace::contains(const std::vector<u32>& v) const {
  auto w = reduce(v);
  for (u32 x : w)
    if (x) return false;
  return true;
}

bool Subspace::add(const std::vector<u32>& v) {
  auto w = reduce(v);
  std::size_t piv = n_;
  for (std::size_t j = 0; j < n_; ++j)
    if (w[j]) {
      piv = j;
      break;
    }
  if (piv == n_) return false;
  u32 inv = mod_inv(w[piv], p_);
  for (auto& x : w) x = static_cast<u32>(static_cast<u64>(x) * inv % p_);
  rows_.push_back(std::move(w));
  pivots_.push_back(piv);
  return true;
}

}  // namespace pgm
