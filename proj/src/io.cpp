#include "pgm/io.hpp"

#include "pgm/errors.hpp"

namespace pgm {

namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Malformed, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Malformed, std::string("field \"") + key + "\": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Malformed, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

AlgPtr coeffs_from_json(u32 p, const json& j) {
  if (!is_prime(p) || p == 2) fail(ErrorKind::Malformed, "p must be an odd prime");
  if (j.is_null()) return CoefficientAlgebra::prime_field(p);
  std::string kind = get<std::string>(j, "kind");
  if (kind == "prime_field") return CoefficientAlgebra::prime_field(p);
  if (kind == "finite_field") {
    int r = get<int>(j, "degree");
    if (r < 1) fail(ErrorKind::Malformed, "degree must be positive");
    if (j.contains("modulus")) return CoefficientAlgebra::finite_field_with_modulus(p, get<std::vector<u32>>(j, "modulus"));
    return CoefficientAlgebra::finite_field(p, r);
  }
  if (kind == "local_algebra")
    return CoefficientAlgebra::local_algebra(p, get<int>(j, "dim"), get<std::vector<u32>>(j, "mult_table"),
                                             get<std::vector<int>>(j, "max_ideal"));
  if (kind == "dual_numbers") return CoefficientAlgebra::dual_numbers(coeffs_from_json(p, field(j, "base")));
  fail(ErrorKind::Malformed, "unknown coefficient kind \"" + kind + "\"");
}

json coeffs_to_json(const AlgPtr& A) {
  if (A->base()) return {{"kind", "dual_numbers"}, {"base", coeffs_to_json(A->base())}};
  if (A->is_field()) {
    if (A->dim() == 1) return {{"kind", "prime_field"}};
    return {{"kind", "finite_field"}, {"degree", A->dim()}, {"modulus", A->modulus()}};
  }
  return {{"kind", "local_algebra"}, {"dim", A->dim()}, {"mult_table", A->table()}, {"max_ideal", A->max_ideal()}};
}

Elem elem_from_json(const AlgPtr& A, const json& j) {
  Elem e;
  if (j.is_number_integer()) return A->from_int(j.get<i64>());
  try {
    std::vector<i64> v = j.get<std::vector<i64>>();
    if (v.size() != static_cast<std::size_t>(A->dim())) fail(ErrorKind::Malformed, "element has the wrong number of components");
    for (i64 x : v) e.push_back(mod_reduce(x, A->p()));
  } catch (const json::exception& ex) {
    fail(ErrorKind::Malformed, std::string("bad element: ") + ex.what());
  }
  return e;
}

json elem_to_json(const Elem& e) { return json(e); }

LaurentSeries series_from_json(const AlgPtr& A, const json& j) {
  if (j.is_number_integer()) return LaurentSeries::constant(A, A->from_int(j.get<i64>()));
  i64 v = j.contains("valuation") ? get<i64>(j, "valuation") : 0;
  i64 prec = kExact;
  if (j.contains("precision") && !j.at("precision").is_null()) {
    const json& pj = j.at("precision");
    if (pj.is_string()) {
      if (pj.get<std::string>() != "exact") fail(ErrorKind::Malformed, "precision must be an integer or \"exact\"");
    } else {
      prec = get<i64>(j, "precision");
    }
  }
  const json& cs = field(j, "coeffs");
  if (!cs.is_array()) fail(ErrorKind::Malformed, "coeffs must be an array");
  std::vector<u32> flat;
  for (const json& c : cs) {
    Elem e = elem_from_json(A, c);
    flat.insert(flat.end(), e.begin(), e.end());
  }
  if (prec < kExact && v + static_cast<i64>(cs.size()) > prec)
    fail(ErrorKind::Malformed, "coefficients extend past the stated precision");
  return LaurentSeries(A, v, prec, flat);
}

json series_to_json(const LaurentSeries& s) {
  json cs = json::array();
  for (i64 k = s.valuation(); k < s.top(); ++k) cs.push_back(s.coeff(k));
  json out;
  out["valuation"] = s.is_zero() ? 0 : s.valuation();
  out["precision"] = s.exact() ? json("exact") : json(s.precision());
  out["coeffs"] = cs;
  return out;
}

SeriesMatrix matrix_from_json(const AlgPtr& A, const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) fail(ErrorKind::Malformed, "matrix has the wrong number of rows");
  SeriesMatrix m(A, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) fail(ErrorKind::Malformed, "matrix row has the wrong length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = series_from_json(A, j[i][k]);
  }
  return m;
}

json matrix_to_json(const SeriesMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(series_to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

SeriesMatrix vector_from_json(const AlgPtr& A, const json& j, std::size_t d) {
  if (!j.is_array() || j.size() != d) fail(ErrorKind::Malformed, "vector has the wrong length");
  SeriesMatrix v(A, d, 1);
  for (std::size_t i = 0; i < d; ++i) v(i, 0) = series_from_json(A, j[i]);
  return v;
}

json vector_to_json(const SeriesMatrix& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.rows(); ++i) out.push_back(series_to_json(v(i, 0)));
  return out;
}

PhiGammaModule module_from_json(const json& j) {
  u32 p = get<u32>(j, "p");
  AlgPtr A = coeffs_from_json(p, j.contains("coeff") ? j.at("coeff") : json());
  std::size_t d = get<std::size_t>(j, "rank");
  if (d == 0) fail(ErrorKind::Malformed, "rank must be positive");
  if (j.contains("chi_gamma") && j.at("chi_gamma") != "1+p")
    fail(ErrorKind::Malformed, "only the chi(gamma) = 1+p convention is supported");
  const json& m = field(j, "matrices");
  return PhiGammaModule(matrix_from_json(A, field(m, "phi"), d, d), matrix_from_json(A, field(m, "gamma"), d, d),
                        matrix_from_json(A, field(m, "delta"), d, d));
}

json module_to_json(const PhiGammaModule& M) {
  json out;
  out["p"] = M.p();
  out["coeff"] = coeffs_to_json(M.algebra());
  out["rank"] = M.rank();
  out["chi_gamma"] = "1+p";
  out["matrices"] = {{"phi", matrix_to_json(M.phi())}, {"gamma", matrix_to_json(M.gamma())}, {"delta", matrix_to_json(M.delta())}};
  return out;
}

CharacterLabel label_from_json(const AlgPtr& A, const json& j) {
  CharacterLabel l;
  l.n = get<i64>(j, "n");
  l.a = elem_from_json(A, field(j, "a"));
  return l;
}

json label_to_json(const CharacterLabel& l) { return {{"n", l.n}, {"a", l.a}}; }

Cocycle cocycle_from_json(const AlgPtr& A, const json& j, std::size_t d) {
  return Cocycle{vector_from_json(A, field(j, "a"), d), vector_from_json(A, field(j, "b"), d), false};
}

json cocycle_to_json(const Cocycle& c) { return {{"a", vector_to_json(c.a)}, {"b", vector_to_json(c.b)}}; }

json report_to_json(const CohomologyReport& r) {
  json out;
  out["h0"] = r.h0;
  out["h1"] = r.h1;
  out["h2"] = r.h2;
  out["dimensions_over"] = r.over_fp ? "F_p" : "A";
  out["euler_ok"] = r.euler_ok;
  if (r.duality_checked) out["duality_ok"] = r.duality_ok;
  out["h1_window"] = r.h1_window;
  out["height"] = r.height;
  out["precision"] = r.precision;
  out["certificates"] = r.certificates;
  out["chi_gamma_convention"] = "1+p";
  return out;
}

}  // namespace pgm
