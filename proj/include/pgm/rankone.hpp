#pragma once

#include <vector>

#include "pgm/herr.hpp"

namespace pgm {

// Rank-one character: Delta acts through omega^n, phi by a (the value of the
// unramified part on geometric Frobenius).
struct CharacterLabel {
  i64 n = 0;  // in [0, p-2]
  Elem a;

  bool operator==(const CharacterLabel& o) const { return n == o.n && a == o.a; }
};

struct SerreWeight2 {
  i64 k1 = 0, k2 = 0;
  bool operator==(const SerreWeight2& o) const { return k1 == o.k1 && k2 == o.k2; }
};

PhiGammaModule from_character(const AlgPtr& A, const CharacterLabel& label);

// All (p-1)(q-1) labels, n outer, a in index order.
std::vector<CharacterLabel> all_labels(const AlgPtr& A);

CharacterLabel identify_rank1(const PhiGammaModule& M, const Config& cfg = {});

// Pairs c in H^1(A(1)) with the unramified class of H^1(A).
bool is_tres_ramifiee(const Cocycle& c, const AlgPtr& A, const Config& cfg = {});

struct WeightResult {
  SerreWeight2 weight;
  CharacterLabel sub, quotient;
  bool tres_ramifiee = false;
  bool ratio_is_cyclotomic = false;
};

// E is upper triangular with a rank-one sub (top-left) and rank-one quotient.
WeightResult weight_rank2(const PhiGammaModule& E, const Config& cfg = {});

bool valid_weight(const SerreWeight2& w, u32 p);

}  // namespace pgm
