#include "pgm/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "pgm/errors.hpp"

namespace pgm {

SeriesMatrix::SeriesMatrix(AlgPtr A, std::size_t rows, std::size_t cols)
    : A_(A), r_(rows), c_(cols), e_(rows * cols, LaurentSeries(A)) {}

SeriesMatrix SeriesMatrix::identity(AlgPtr A, std::size_t n) {
  SeriesMatrix m(A, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentSeries::one(A);
  return m;
}

SeriesMatrix SeriesMatrix::scalar(std::size_t n, const LaurentSeries& s) {
  SeriesMatrix m(s.algebra(), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

SeriesMatrix SeriesMatrix::operator*(const SeriesMatrix& o) const {
  if (c_ != o.r_) fail(ErrorKind::Malformed, "matrix shape mismatch in product");
  SeriesMatrix out(A_, r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < o.c_; ++j) {
      LaurentSeries acc(A_);
      bool first = true;
      for (std::size_t k = 0; k < c_; ++k) {
        LaurentSeries t = mul((*this)(i, k), o(k, j));
        acc = first ? t : add(acc, t);
        first = false;
      }
      out(i, j) = acc;
    }
  return out;
}

SeriesMatrix SeriesMatrix::operator+(const SeriesMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(ErrorKind::Malformed, "matrix shape mismatch in sum");
  SeriesMatrix out(A_, r_, c_);
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = add(e_[i], o.e_[i]);
  return out;
}

SeriesMatrix SeriesMatrix::operator-(const SeriesMatrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(ErrorKind::Malformed, "matrix shape mismatch in difference");
  SeriesMatrix out(A_, r_, c_);
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = sub(e_[i], o.e_[i]);
  return out;
}

SeriesMatrix SeriesMatrix::transpose() const {
  SeriesMatrix out(A_, c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

SeriesMatrix SeriesMatrix::truncated(i64 prec) const {
  SeriesMatrix out = *this;
  for (auto& x : out.e_) x = x.truncated(prec);
  return out;
}

SeriesMatrix SeriesMatrix::shifted(i64 k) const {
  SeriesMatrix out = *this;
  for (auto& x : out.e_) x = shift(x, k);
  return out;
}

SeriesMatrix SeriesMatrix::scaled(const Elem& c) const {
  SeriesMatrix out = *this;
  for (auto& x : out.e_) x = scale(x, c);
  return out;
}

SeriesMatrix SeriesMatrix::scaled(const LaurentSeries& s) const {
  SeriesMatrix out = *this;
  for (auto& x : out.e_) x = mul(x, s);
  return out;
}

SeriesMatrix SeriesMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  SeriesMatrix out(A_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void SeriesMatrix::set_block(std::size_t r0, std::size_t c0, const SeriesMatrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

SeriesMatrix SeriesMatrix::hcat(const SeriesMatrix& o) const {
  SeriesMatrix out(A_, r_, c_ + o.c_);
  out.set_block(0, 0, *this);
  out.set_block(0, c_, o);
  return out;
}

i64 SeriesMatrix::valuation() const {
  i64 v = kExact;
  for (const auto& x : e_)
    if (!x.is_zero()) v = std::min(v, x.valuation());
  return v;
}

i64 SeriesMatrix::precision() const {
  i64 v = kExact;
  for (const auto& x : e_) v = std::min(v, x.precision());
  return v;
}

bool SeriesMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const LaurentSeries& x) { return x.is_zero(); });
}

std::string SeriesMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < r_; ++i) {
    os << (i ? "; " : "") << "[";
    for (std::size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

i64 unit_valuation(const LaurentSeries& f) {
  if (f.is_zero()) return kExact;
  const AlgPtr& A = f.algebra();
  if (A->is_field()) return f.valuation();
  for (i64 e = f.valuation(); e < f.top(); ++e)
    if (A->is_unit(f.coeff(e))) return e;
  return kExact;
}

SeriesMatrix inverse(const SeriesMatrix& m, i64 target) {
  const std::size_t n = m.rows();
  if (n != m.cols()) fail(ErrorKind::Malformed, "inverse of a non-square matrix");
  const AlgPtr& A = m.algebra();
  i64 spread = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m(i, j).is_zero()) spread = std::max(spread, std::abs(m(i, j).valuation()));
  const i64 work = target >= kExact ? kExact : clamp_prec(target + 2 * static_cast<i64>(n) * spread + 4);
  SeriesMatrix a = m, inv = SeriesMatrix::identity(A, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = n;
    i64 bv = kExact;
    for (std::size_t i = j; i < n; ++i) {
      i64 uv = unit_valuation(a(i, j));
      if (uv < bv) {
        bv = uv;
        best = i;
      }
    }
    if (best == n) fail(ErrorKind::NotEtale, "matrix is singular at the known precision");
    if (best != j)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(best, k), a(j, k));
        std::swap(inv(best, k), inv(j, k));
      }
    LaurentSeries pinv = invert(a(j, j), work);
    for (std::size_t k = 0; k < n; ++k) {
      a(j, k) = mul(a(j, k), pinv);
      inv(j, k) = mul(inv(j, k), pinv);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || a(i, j).is_zero()) continue;
      LaurentSeries f = a(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        a(i, k) = sub(a(i, k), mul(f, a(j, k)));
        inv(i, k) = sub(inv(i, k), mul(f, inv(j, k)));
      }
    }
  }
  return target >= kExact ? inv : inv.truncated(target);
}

SeriesMatrix kron(const SeriesMatrix& a, const SeriesMatrix& b) {
  SeriesMatrix out(a.algebra(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = mul(a(i, j), b(k, l));
  return out;
}

SeriesMatrix apply_action(const RingAction& act, const SeriesMatrix& m, i64 target) {
  SeriesMatrix out(m.algebra(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = apply_action(act, m(i, j), target);
  return out;
}

bool agree(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!agree(a(i, j), b(i, j))) return false;
  return true;
}

SeriesMatrix column_hnf(const SeriesMatrix& m, i64 target) {
  const AlgPtr& A = m.algebra();
  if (!A->is_field()) fail(ErrorKind::Unsupported, "lattice saturation needs field coefficients");
  const std::size_t d = m.rows();
  std::vector<SeriesMatrix> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
  SeriesMatrix out(A, d, d);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t best = cols.size();
    i64 bv = kExact;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (!cols[k](i, 0).is_zero() && cols[k](i, 0).valuation() < bv) {
        bv = cols[k](i, 0).valuation();
        best = k;
      }
    if (best == cols.size()) fail(ErrorKind::NotEtale, "lattice generators do not span the module");
    SeriesMatrix pc = cols[best];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best));
    LaurentSeries unit = shift(pc(i, 0), -bv);
    pc = pc.scaled(invert(unit, target));
    for (auto& c : cols) {
      if (c(i, 0).is_zero()) continue;
      LaurentSeries q = shift(c(i, 0), -bv);
      for (std::size_t r = 0; r < d; ++r) c(r, 0) = sub(c(r, 0), mul(q, pc(r, 0)));
    }
    out.set_block(0, i, pc);
  }
  return out;
}

}  // namespace pgm
