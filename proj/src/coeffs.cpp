#include "pgm/coeffs.hpp"

#include <algorithm>
#include <sstream>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

using Poly = std::vector<u32>;  // lowest coefficient first

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, u32 p) {
  poly_trim(a);
  u32 lead_inv = mod_inv(m.back(), p);
  while (a.size() >= m.size()) {
    u32 f = static_cast<u32>(static_cast<u64>(a.back()) * lead_inv % p);
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = static_cast<u32>((a[shift + i] + static_cast<u64>(p - f) * m[i]) % p);
    poly_trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, u32 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = static_cast<u32>((c[i + j] + static_cast<u64>(a[i]) * b[j]) % p);
  return poly_mod(c, m, p);
}

Poly poly_powmod(Poly base, u64 e, const Poly& m, u32 p) {
  Poly r = {1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

bool poly_irreducible(const Poly& f, u32 p) {
  int n = static_cast<int>(f.size()) - 1;
  // Trial division by all monic polynomials of degree 1..n/2.
  for (int d = 1; 2 * d <= n; ++d) {
    u64 count = pow_u64(p, d);
    for (u64 t = 0; t < count; ++t) {
      Poly g(d + 1, 0);
      u64 x = t;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<u32>(x % p);
        x /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> f;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) f.push_back(n);
  return f;
}

bool poly_primitive(const Poly& f, u32 p) {
  int n = static_cast<int>(f.size()) - 1;
  u64 q1 = pow_u64(p, n) - 1;
  Poly x = {0, 1};
  if (n == 1) x = poly_mod(x, f, p);
  for (u64 l : prime_factors(q1)) {
    Poly y = poly_powmod(x, q1 / l, f, p);
    if (y == Poly{1}) return false;
  }
  return true;
}

}  // namespace

u64 pow_u64(u64 base, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

AlgPtr CoefficientAlgebra::prime_field(u32 p) {
  if (p < 3 || !is_prime(p)) fail(ErrorKind::Malformed, "p must be an odd prime");
  auto a = std::shared_ptr<CoefficientAlgebra>(new CoefficientAlgebra());
  a->kind_ = Kind::FiniteField;
  a->p_ = p;
  a->r_ = 1;
  a->table_ = {1};
  a->modulus_ = {0, 1};
  a->finalize();
  return a;
}

AlgPtr CoefficientAlgebra::finite_field(u32 p, int degree) {
  if (p < 3 || !is_prime(p)) fail(ErrorKind::Malformed, "p must be an odd prime");
  if (degree < 1 || pow_u64(p, degree) > (1u << 20)) fail(ErrorKind::Unsupported, "field degree out of range");
  if (degree == 1) return prime_field(p);
  u64 count = pow_u64(p, degree);
  for (u64 t = 0; t < count; ++t) {
    Poly f(degree + 1, 0);
    u64 x = t;
    for (int i = 0; i < degree; ++i) {
      f[i] = static_cast<u32>(x % p);
      x /= p;
    }
    f[degree] = 1;
    if (f[0] == 0) continue;
    if (poly_irreducible(f, p) && poly_primitive(f, p)) return finite_field_with_modulus(p, f);
  }
  fail(ErrorKind::Unsupported, "no primitive polynomial found");
}

AlgPtr CoefficientAlgebra::finite_field_with_modulus(u32 p, const std::vector<u32>& modulus) {
  if (p < 3 || !is_prime(p)) fail(ErrorKind::Malformed, "p must be an odd prime");
  Poly f = modulus;
  for (auto& c : f) c %= p;
  if (f.size() < 2 || f.back() != 1) fail(ErrorKind::Malformed, "modulus must be monic of degree >= 1");
  if (!poly_irreducible(f, p)) fail(ErrorKind::NotLocal, "modulus is reducible");
  int r = static_cast<int>(f.size()) - 1;
  auto a = std::shared_ptr<CoefficientAlgebra>(new CoefficientAlgebra());
  a->kind_ = Kind::FiniteField;
  a->p_ = p;
  a->r_ = r;
  a->modulus_ = f;
  a->table_.assign(static_cast<std::size_t>(r) * r * r, 0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Poly m(i + j + 1, 0);
      m[i + j] = 1;
      Poly red = poly_mod(m, f, p);
      for (std::size_t k = 0; k < red.size(); ++k) a->table_[(static_cast<std::size_t>(i) * r + j) * r + k] = red[k];
    }
  a->finalize();
  return a;
}

AlgPtr CoefficientAlgebra::local_algebra(u32 p, int dim, const std::vector<u32>& table,
                                         const std::vector<int>& max_ideal) {
  if (p < 3 || !is_prime(p)) fail(ErrorKind::Malformed, "p must be an odd prime");
  if (dim < 1 || dim > 16) fail(ErrorKind::Malformed, "algebra dimension out of range");
  const std::size_t r = static_cast<std::size_t>(dim);
  if (table.size() != r * r * r) fail(ErrorKind::Malformed, "mult_table must have dim^3 entries");
  auto T = [&](std::size_t i, std::size_t j, std::size_t k) { return table[(i * r + j) * r + k] % p; };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k)
        if (T(i, j, k) != T(j, i, k)) fail(ErrorKind::NotCommutative, "structure constants are not symmetric");
  // (b_i b_j) b_l == b_i (b_j b_l)
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = 0; l < r; ++l)
        for (std::size_t k = 0; k < r; ++k) {
          u64 lhs = 0, rhs = 0;
          for (std::size_t s = 0; s < r; ++s) {
            lhs += static_cast<u64>(T(i, j, s)) * T(s, l, k);
            rhs += static_cast<u64>(T(j, l, s)) * T(i, s, k);
          }
          if (lhs % p != rhs % p) fail(ErrorKind::NotAssociative, "structure constants are not associative");
        }
  // Identity element: sum_i e_i T(i, j, k) = [j == k].
  FpMat sys(r * r, r, p);
  FpMat rhs(r * r, 1, p);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < r; ++i) sys.at(j * r + k, i) = T(i, j, k);
      rhs.at(j * r + k, 0) = (j == k) ? 1 : 0;
    }
  auto e = solve(sys, rhs);
  if (!e) fail(ErrorKind::Malformed, "algebra has no unit element");

  auto a = std::shared_ptr<CoefficientAlgebra>(new CoefficientAlgebra());
  a->kind_ = Kind::LocalAlgebra;
  a->p_ = p;
  a->r_ = dim;
  a->table_.resize(r * r * r);
  for (std::size_t x = 0; x < a->table_.size(); ++x) a->table_[x] = table[x] % p;
  std::vector<int> mi = max_ideal;
  std::sort(mi.begin(), mi.end());
  mi.erase(std::unique(mi.begin(), mi.end()), mi.end());
  for (int idx : mi)
    if (idx < 0 || idx >= dim) fail(ErrorKind::Malformed, "max_ideal index out of range");
  a->max_ideal_ = mi;
  a->one_.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i) a->one_[i] = e->at(i, 0);
  a->finalize();
  return a;
}

AlgPtr CoefficientAlgebra::dual_numbers(const AlgPtr& base) {
  const int r = base->dim();
  const int n = 2 * r;
  std::vector<u32> t(static_cast<std::size_t>(n) * n * n, 0);
  auto at = [&](int i, int j, int k) -> u32& { return t[(static_cast<std::size_t>(i) * n + j) * n + k]; };
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) {
        u32 c = base->table()[(static_cast<std::size_t>(i) * r + j) * r + k];
        at(i, j, k) = c;
        at(i, r + j, r + k) = c;
        at(r + i, j, r + k) = c;
      }
  std::vector<int> mi = base->max_ideal();
  for (int i = 0; i < r; ++i) mi.push_back(r + i);
  auto a = std::shared_ptr<CoefficientAlgebra>(new CoefficientAlgebra());
  a->kind_ = Kind::LocalAlgebra;
  a->p_ = base->p();
  a->r_ = n;
  a->table_ = t;
  a->max_ideal_ = mi;
  a->one_.assign(n, 0);
  for (int i = 0; i < r; ++i) a->one_[i] = base->one()[i];
  a->base_ = base;
  a->finalize();
  return a;
}

void CoefficientAlgebra::finalize() {
  const std::size_t r = static_cast<std::size_t>(r_);
  if (one_.empty()) {
    one_.assign(r, 0);
    one_[0] = 1;
  }
  sparse_.assign(r * r, {});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        u32 c = table_[(i * r + j) * r + k];
        if (c) sparse_[i * r + j].push_back({static_cast<int>(k), c});
      }
  if (kind_ == Kind::FiniteField) {
    residue_degree_ = r_;
    nil_index_ = 1;
    return;
  }
  // Maximal ideal checks: an ideal, nilpotent, with field quotient.
  std::vector<bool> in_m(r, false);
  for (int i : max_ideal_) in_m[static_cast<std::size_t>(i)] = true;
  for (std::size_t i = 0; i < r; ++i)
    for (int j : max_ideal_)
      for (auto [k, c] : sparse_[i * r + static_cast<std::size_t>(j)])
        if (!in_m[static_cast<std::size_t>(k)]) fail(ErrorKind::NotLocal, "declared maximal ideal is not an ideal");
  bool one_in_m = true;
  for (std::size_t i = 0; i < r; ++i)
    if (!in_m[i] && one_[i]) one_in_m = false;
  if (one_in_m) fail(ErrorKind::NotLocal, "unit element lies in the declared maximal ideal");
  // Powers of m as spans.
  std::vector<Elem> power;
  for (int i : max_ideal_) power.push_back(basis(i));
  int e = 1;
  while (!power.empty()) {
    Subspace next(r, p_);
    std::vector<Elem> gens;
    for (const auto& x : power)
      for (int j : max_ideal_) {
        Elem y = mul(x, basis(j));
        if (next.add(y)) gens.push_back(y);
      }
    power = gens;
    ++e;
    if (e > r_ + 1) fail(ErrorKind::NotLocal, "declared maximal ideal is not nilpotent");
  }
  nil_index_ = max_ideal_.empty() ? 1 : e;
  residue_degree_ = r_ - static_cast<int>(max_ideal_.size());
  // The quotient A/m (spanned by the remaining basis vectors) must be a field:
  // every nonzero residue class must act injectively on A/m.
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < r; ++i)
    if (!in_m[i]) rest.push_back(i);
  u64 qsize = pow_u64(p_, static_cast<int>(rest.size()));
  if (qsize > (1u << 16)) fail(ErrorKind::Unsupported, "residue field too large to verify");
  for (u64 t = 1; t < qsize; ++t) {
    Elem x(r, 0);
    u64 v = t;
    for (auto idx : rest) {
      x[idx] = static_cast<u32>(v % p_);
      v /= p_;
    }
    FpMat lm(rest.size(), rest.size(), p_);
    for (std::size_t c = 0; c < rest.size(); ++c) {
      Elem y = mul(x, basis(static_cast<int>(rest[c])));
      for (std::size_t rr = 0; rr < rest.size(); ++rr) lm.at(rr, c) = y[rest[rr]];
    }
    if (rank(lm) != rest.size()) fail(ErrorKind::NotLocal, "quotient by the declared maximal ideal is not a field");
  }
}

u64 CoefficientAlgebra::order() const { return pow_u64(p_, r_); }

Elem CoefficientAlgebra::from_int(i64 v) const { return scale(mod_reduce(v, p_), one_); }

Elem CoefficientAlgebra::basis(int i) const {
  Elem e(static_cast<std::size_t>(r_), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return e;
}

Elem CoefficientAlgebra::add(const Elem& x, const Elem& y) const {
  Elem z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] + y[i]) % p_;
  return z;
}

Elem CoefficientAlgebra::sub(const Elem& x, const Elem& y) const {
  Elem z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] + p_ - y[i]) % p_;
  return z;
}

Elem CoefficientAlgebra::neg(const Elem& x) const {
  Elem z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (p_ - x[i]) % p_;
  return z;
}

Elem CoefficientAlgebra::scale(u32 s, const Elem& x) const {
  Elem z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = static_cast<u32>(static_cast<u64>(s) * x[i] % p_);
  return z;
}

void CoefficientAlgebra::mul_acc(u32* out, const u32* x, const u32* y) const {
  if (r_ == 1) {
    out[0] = static_cast<u32>((out[0] + static_cast<u64>(x[0]) * y[0]) % p_);
    return;
  }
  const std::size_t r = static_cast<std::size_t>(r_);
  for (std::size_t i = 0; i < r; ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (!y[j]) continue;
      u64 xy = static_cast<u64>(x[i]) * y[j] % p_;
      for (auto [k, c] : sparse_[i * r + j]) out[k] = static_cast<u32>((out[k] + xy * c) % p_);
    }
  }
}

Elem CoefficientAlgebra::mul(const Elem& x, const Elem& y) const {
  Elem z(static_cast<std::size_t>(r_), 0);
  mul_acc(z.data(), x.data(), y.data());
  return z;
}

Elem CoefficientAlgebra::pow(const Elem& x, u64 e) const {
  Elem r = one_, b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

bool CoefficientAlgebra::is_zero(const u32* x) const {
  for (int i = 0; i < r_; ++i)
    if (x[i]) return false;
  return true;
}

bool CoefficientAlgebra::is_unit(const u32* x) const {
  if (max_ideal_.empty()) return !is_zero(x);
  std::vector<bool> in_m(static_cast<std::size_t>(r_), false);
  for (int i : max_ideal_) in_m[static_cast<std::size_t>(i)] = true;
  for (int i = 0; i < r_; ++i)
    if (!in_m[static_cast<std::size_t>(i)] && x[i]) return true;
  return false;
}

FpMat CoefficientAlgebra::mult_matrix(const Elem& x) const {
  FpMat m(static_cast<std::size_t>(r_), static_cast<std::size_t>(r_), p_);
  for (int j = 0; j < r_; ++j) {
    Elem y = mul(x, basis(j));
    for (int i = 0; i < r_; ++i) m.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = y[static_cast<std::size_t>(i)];
  }
  return m;
}

Elem CoefficientAlgebra::inverse(const Elem& x) const {
  if (r_ == 1) {
    if (x[0] == 0) fail(ErrorKind::NonUnit, "zero is not invertible");
    return {mod_inv(x[0], p_)};
  }
  if (!is_unit(x)) fail(ErrorKind::NonUnit, "element has zero residue");
  FpMat rhs(static_cast<std::size_t>(r_), 1, p_);
  for (int i = 0; i < r_; ++i) rhs.at(static_cast<std::size_t>(i), 0) = one_[static_cast<std::size_t>(i)];
  auto y = solve(mult_matrix(x), rhs);
  if (!y) fail(ErrorKind::NonUnit, "element is not invertible");
  Elem z(static_cast<std::size_t>(r_));
  for (int i = 0; i < r_; ++i) z[static_cast<std::size_t>(i)] = y->at(static_cast<std::size_t>(i), 0);
  return z;
}

std::vector<Elem> CoefficientAlgebra::elements() const {
  u64 n = order();
  if (n > (1u << 20)) fail(ErrorKind::Unsupported, "algebra too large to enumerate");
  std::vector<Elem> out;
  out.reserve(n);
  for (u64 t = 0; t < n; ++t) {
    Elem x(static_cast<std::size_t>(r_));
    u64 v = t;
    for (int i = 0; i < r_; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<u32>(v % p_);
      v /= p_;
    }
    out.push_back(x);
  }
  return out;
}

Elem CoefficientAlgebra::field_generator() const {
  if (!is_field()) fail(ErrorKind::Unsupported, "generator requested for a non-field");
  if (r_ == 1) return {primitive_root(p_)};
  return basis(1);  // the modulus is primitive
}

std::vector<Elem> CoefficientAlgebra::field_units() const {
  Elem g = field_generator();
  u64 n = order() - 1;
  std::vector<Elem> out;
  Elem x = one_;
  for (u64 i = 0; i < n; ++i) {
    out.push_back(x);
    x = mul(x, g);
  }
  return out;
}

std::string CoefficientAlgebra::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::FiniteField)
    os << "F_" << order();
  else
    os << "local algebra of dimension " << r_ << " over F_" << p_;
  return os.str();
}

bool CoefficientAlgebra::same_as(const CoefficientAlgebra& o) const {
  return p_ == o.p_ && r_ == o.r_ && table_ == o.table_ && max_ideal_ == o.max_ideal_;
}

int max_padic_digits(u32 p) {
  int k = 0;
  unsigned __int128 x = 1;
  while (x * p < (static_cast<unsigned __int128>(1) << 62)) {
    x *= p;
    ++k;
  }
  return k;
}

PadicInt teichmuller(u32 p, u32 a, int k) {
  a %= p;
  if (a == 0) fail(ErrorKind::ZeroInput, "Teichmuller lift of zero");
  if (k < 1 || k > max_padic_digits(p)) fail(ErrorKind::Unsupported, "p-adic precision out of range");
  u64 pk = pow_u64(p, k);
  u64 x = a;
  for (;;) {
    // x^p mod p^k
    unsigned __int128 y = 1, b = x;
    u64 e = p;
    while (e) {
      if (e & 1) y = y * b % pk;
      b = b * b % pk;
      e >>= 1;
    }
    u64 nx = static_cast<u64>(y);
    if (nx == x) break;
    x = nx;
  }
  return {p, k, x};
}

i64 vp_factorial(u32 p, u64 n) {
  i64 v = 0;
  while (n) {
    n /= p;
    v += static_cast<i64>(n);
  }
  return v;
}

u32 padic_binomial(const PadicInt& c, u64 n) {
  const u32 p = c.p;
  if (n == 0) return 1 % p;
  if (vp_factorial(p, n) >= c.k)
    fail(ErrorKind::InsufficientPrecision, "padic_binomial needs k > v_p(n!)");
  u64 pk = pow_u64(p, c.k);
  i64 val = 0;
  u64 unit = 1;
  for (u64 i = 0; i < n; ++i) {
    u64 f = (c.value + pk - (i % pk)) % pk;
    if (f == 0) return 0;  // valuation >= k > v_p(n!)
    while (f % p == 0) {
      f /= p;
      ++val;
    }
    unit = unit * (f % p) % p;
  }
  i64 vn = vp_factorial(p, n);
  if (val > vn) return 0;
  u64 nunit = 1;
  for (u64 i = 1; i <= n; ++i) {
    u64 f = i;
    while (f % p == 0) f /= p;
    nunit = nunit * (f % p) % p;
  }
  return static_cast<u32>(unit * mod_inv(static_cast<u32>(nunit), p) % p);
}

std::vector<u32> padic_digits(const PadicInt& c) {
  std::vector<u32> d(static_cast<std::size_t>(c.k));
  u64 v = c.value;
  for (int i = 0; i < c.k; ++i) {
    d[static_cast<std::size_t>(i)] = static_cast<u32>(v % c.p);
    v /= c.p;
  }
  return d;
}

u32 lucas_binomial(const std::vector<u32>& c_digits, u64 n, u32 p) {
  u64 r = 1;
  std::size_t i = 0;
  while (n) {
    if (i >= c_digits.size()) fail(ErrorKind::InsufficientPrecision, "too few p-adic digits for Lucas");
    u32 ni = static_cast<u32>(n % p);
    u32 ci = c_digits[i];
    if (ni > ci) return 0;
    // small binomial mod p
    u64 num = 1, den = 1;
    for (u32 t = 0; t < ni; ++t) {
      num = num * (ci - t) % p;
      den = den * (t + 1) % p;
    }
    r = r * num % p * mod_inv(static_cast<u32>(den), p) % p;
    n /= p;
    ++i;
  }
  return static_cast<u32>(r);
}

}  // namespace pgm
