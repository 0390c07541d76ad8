#pragma once

#include <string>
#include <vector>

#include "pgm/herr.hpp"
#include "pgm/rankone.hpp"

namespace pgm {

// Random iterated extension of random characters: E_1 = chi_1 and E_k is an
// extension of chi_k by E_{k-1}. All randomness comes from `seed`.
struct RandomModule {
  PhiGammaModule module;
  std::vector<CharacterLabel> labels;
  std::size_t rank = 0;
};
RandomModule random_module(u64 seed, const AlgPtr& A, std::size_t d_max, const Config& cfg);

struct SuiteOptions {
  u64 seed = 1;
  u32 p = 3;
  int q_degree = 1;  // q = p^q_degree
  std::size_t d_max = 2;
  std::size_t count = 10;
  Config cfg;
  bool check_pairing = true;
  bool check_base_change = true;  // prime-field cases only
  bool check_doubled = false;
  bool check_psi = false;
};

struct SuiteCase {
  std::size_t index = 0;
  u64 seed = 0;
  std::size_t rank = 0;
  std::vector<CharacterLabel> labels;
  std::size_t h0 = 0, h1 = 0, h2 = 0;
  std::size_t dual_h0 = 0, dual_h1 = 0, dual_h2 = 0;
  bool euler_ok = false, duality_ok = false;
  // "skipped" when not requested or not applicable.
  std::string pairing = "skipped", base_change = "skipped", doubled = "skipped", psi_bounds = "skipped";
  bool ok = false;
  std::string error;
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<SuiteCase> cases;
  bool all_ok = true;
};

// Seed of case i of a suite run with `seed`.
u64 case_seed(u64 seed, std::size_t index);
SuiteCase run_case(const SuiteOptions& opt, std::size_t index);
SuiteReport run_suite(const SuiteOptions& opt);

}  // namespace pgm
