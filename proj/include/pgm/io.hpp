#pragma once

#include <string>

#include <json.hpp>

#include "pgm/herr.hpp"
#include "pgm/rankone.hpp"

namespace pgm {

using json = nlohmann::json;

// Coefficients: {"kind":"prime_field"}, {"kind":"finite_field","degree":r[,"modulus":[...]]},
// {"kind":"local_algebra","dim":r,"mult_table":[...],"max_ideal":[...]},
// {"kind":"dual_numbers","base":{...}}.
AlgPtr coeffs_from_json(u32 p, const json& j);
json coeffs_to_json(const AlgPtr& A);

// Series: {"valuation":v,"precision":N|"exact","coeffs":[[components], ...]}.
LaurentSeries series_from_json(const AlgPtr& A, const json& j);
json series_to_json(const LaurentSeries& s);

// Matrices are lists of rows of series.
SeriesMatrix matrix_from_json(const AlgPtr& A, const json& j, std::size_t rows, std::size_t cols);
json matrix_to_json(const SeriesMatrix& m);

// Column vectors (cochains) are flat lists of series.
SeriesMatrix vector_from_json(const AlgPtr& A, const json& j, std::size_t d);
json vector_to_json(const SeriesMatrix& v);

// {"p","coeff","rank","chi_gamma":"1+p","matrices":{"phi","gamma","delta"}}.
PhiGammaModule module_from_json(const json& j);
json module_to_json(const PhiGammaModule& M);

Elem elem_from_json(const AlgPtr& A, const json& j);
json elem_to_json(const Elem& e);

CharacterLabel label_from_json(const AlgPtr& A, const json& j);
json label_to_json(const CharacterLabel& l);

Cocycle cocycle_from_json(const AlgPtr& A, const json& j, std::size_t d);
json cocycle_to_json(const Cocycle& c);

json report_to_json(const CohomologyReport& r);

}  // namespace pgm
