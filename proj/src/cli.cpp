#include "pgm/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

const json& only(const std::vector<json>& in, const std::string& cmd) {
  if (in.size() != 1) fail(ErrorKind::Malformed, cmd + " takes exactly one input document");
  return in[0];
}

// A module document, or a job object carrying one under `key`.
PhiGammaModule module_arg(const json& j, const char* key = "module") {
  if (j.is_object() && j.contains("matrices")) return module_from_json(j);
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Malformed, std::string("input needs a \"") + key + "\" module");
  return module_from_json(j.at(key));
}

json ok_report(const std::string& cmd) {
  json r;
  r["command"] = cmd;
  r["status"] = "ok";
  r["chi_gamma_convention"] = "1+p";
  r["certificates"] = json::array();
  return r;
}

json cmd_validate(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  ValidationResult v = validate(M, cfg);
  json r;
  r["valid"] = true;
  r["height"] = v.height;
  r["continuity_exponent"] = v.continuity.n;
  r["certificates"] = {"phi(Gamma) = Gamma gamma(Phi), phi(Delta) = Delta delta(Phi), gamma(Delta) = Delta delta(Gamma) "
                       "checked at N and 2N",
                       "Delta has order dividing p-1", "Phi invertible",
                       "(Gamma - 1)^" + std::to_string(v.continuity.n) + " vanishes modulo T'"};
  return r;
}

json cmd_cohomology(const json& j, const Config& cfg) {
  Herr H(module_arg(j), cfg);
  return report_to_json(H.report(true));
}

json cmd_euler(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  Herr H(M, cfg);
  CohomologyReport rep = H.report(false);
  json r = report_to_json(rep);
  const i64 chi = static_cast<i64>(rep.h0) - static_cast<i64>(rep.h1) + static_cast<i64>(rep.h2);
  r["euler_characteristic"] = chi;
  r["expected"] = -static_cast<i64>(M.rank()) * (rep.over_fp ? M.algebra()->dim() : 1);
  return r;
}

Cocycle cocycle_from_class(Herr& H, const json& coords) {
  const AlgPtr& A = H.module().algebra();
  auto basis = H.h1_basis();
  if (!coords.is_array() || coords.size() != basis.size())
    fail(ErrorKind::Malformed, "class needs one coefficient per H^1 basis element (" + std::to_string(basis.size()) + ")");
  const std::size_t d = H.module().rank();
  Cocycle c{SeriesMatrix(A, d, 1), SeriesMatrix(A, d, 1), false};
  for (std::size_t s = 0; s < basis.size(); ++s) {
    Elem lam = elem_from_json(A, coords[s]);
    c.a = c.a + basis[s].a.scaled(lam);
    c.b = c.b + basis[s].b.scaled(lam);
  }
  return c;
}

json cmd_ext_build(const json& j, const Config& cfg) {
  PhiGammaModule M2 = module_arg(j, "sub"), M1 = module_arg(j, "quotient");
  const i64 N = std::min(derived_precision(M1, cfg), derived_precision(M2, cfg));
  PhiGammaModule H = hom_module(M1, M2, N);
  Cocycle c;
  if (j.contains("cocycle")) {
    c = cocycle_from_json(M1.algebra(), j.at("cocycle"), H.rank());
  } else if (j.contains("class")) {
    Herr HH(H, cfg);
    c = cocycle_from_class(HH, j.at("class"));
  } else {
    fail(ErrorKind::Malformed, "ext-build needs \"cocycle\" or \"class\"");
  }
  json r;
  r["module"] = module_to_json(extension_from_cocycle(M1, M2, c.a, c.b, N));
  r["cocycle"] = cocycle_to_json(c);
  return r;
}

json cmd_class_of(const json& j, const Config& cfg) {
  PhiGammaModule E = module_arg(j);
  std::size_t k = j.value("sub_rank", std::size_t{0});
  if (k == 0) fail(ErrorKind::Malformed, "class-of needs \"sub_rank\"");
  ExtensionClass ext = class_of_extension(E, k, derived_precision(E, cfg));
  Herr H(ext.hom, cfg);
  json r;
  r["coordinates"] = H.h1_coordinates(ext.cocycle);
  json ac = json::array();
  for (const auto& e : H.h1_A_coordinates(ext.cocycle)) ac.push_back(e);
  r["A_coordinates"] = ac;
  r["split"] = H.is_coboundary(ext.cocycle);
  r["h1_hom"] = H.h1();
  r["certificates"] = {"class solved against the stabilized H^1 window c=" + std::to_string(H.h1_window())};
  return r;
}

json cmd_pair(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  CupPairing P(M, cfg);
  const AlgPtr& A = M.algebra();
  json r;
  if (j.contains("alpha") && j.contains("beta")) {
    Cocycle a = cocycle_from_json(A, j.at("alpha"), M.rank());
    Cocycle b = cocycle_from_json(A, j.at("beta"), M.rank());
    r["value"] = P.pair(a, b);
    return r;
  }
  auto m = P.matrix();
  json mj = json::array();
  for (const auto& row : m) {
    json rj = json::array();
    for (const auto& e : row) rj.push_back(e);
    mj.push_back(rj);
  }
  r["matrix"] = mj;
  r["invertible"] = invertible_over(A, m);
  r["certificates"] = {"values read in H^2(A(1)) against its first quotient basis vector"};
  return r;
}

json cmd_identify(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  return label_to_json(identify_rank1(M, cfg));
}

json cmd_weight2(const json& j, const Config& cfg) {
  WeightResult w = weight_rank2(module_arg(j), cfg);
  json r;
  r["k1"] = w.weight.k1;
  r["k2"] = w.weight.k2;
  r["sub"] = label_to_json(w.sub);
  r["quotient"] = label_to_json(w.quotient);
  r["ratio_is_cyclotomic"] = w.ratio_is_cyclotomic;
  if (w.ratio_is_cyclotomic) r["tres_ramifiee"] = w.tres_ramifiee;
  return r;
}

json cmd_obstruct(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  const AlgPtr& A = M.algebra();
  AlgPtr D = CoefficientAlgebra::dual_numbers(A);
  const std::size_t d = M.rank();
  SeriesMatrix pl = j.contains("phi_lift") ? matrix_from_json(D, j.at("phi_lift"), d, d) : lift_to(M.phi(), D);
  SeriesMatrix gl = j.contains("gamma_lift") ? matrix_from_json(D, j.at("gamma_lift"), d, d) : lift_to(M.gamma(), D);
  std::optional<SeriesMatrix> dl;
  if (j.contains("delta_lift")) dl = matrix_from_json(D, j.at("delta_lift"), d, d);
  ObstructionClass ob = obstruction_class(M, pl, gl, dl ? &*dl : nullptr, D, cfg);
  json r;
  r["coordinates"] = ob.coordinates;
  r["lifts_exist"] = ob.lifts_exist;
  r["h2_ad"] = ob.h2_ad;
  r["lift_ring"] = coeffs_to_json(D);
  return r;
}

json cmd_lift_dim(const json& j, const Config& cfg) {
  PhiGammaModule M = module_arg(j);
  std::size_t f = j.value("dim_F", std::size_t{1});
  json r;
  r["lift_space_dim"] = lift_space_dim(M, f, cfg);
  r["dim_F"] = f;
  return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate", "cohomology", "euler-check", "dual",   "tensor",
                                                 "twist",    "ext-build",  "class-of",    "pair",   "identify",
                                                 "weight2",  "obstruct",   "lift-dim",    "suite"};
  return names;
}

json suite_to_json(const SuiteReport& rep) {
  json r;
  const SuiteOptions& o = rep.options;
  u64 q = 1;
  for (int i = 0; i < o.q_degree; ++i) q *= o.p;
  r["seed"] = o.seed;
  r["p"] = o.p;
  r["q"] = q;
  r["d_max"] = o.d_max;
  r["count"] = o.count;
  r["precision"] = o.cfg.precision;
  json cases = json::array();
  json failing = json::array();
  for (const auto& c : rep.cases) {
    json cj;
    cj["index"] = c.index;
    cj["seed"] = c.seed;
    cj["rank"] = c.rank;
    json labels = json::array();
    for (const auto& l : c.labels) labels.push_back(label_to_json(l));
    cj["characters"] = labels;
    cj["h"] = {c.h0, c.h1, c.h2};
    cj["dual_h"] = {c.dual_h0, c.dual_h1, c.dual_h2};
    cj["euler_ok"] = c.euler_ok;
    cj["duality_ok"] = c.duality_ok;
    cj["pairing"] = c.pairing;
    cj["base_change"] = c.base_change;
    cj["doubled_precision"] = c.doubled;
    cj["psi_bounds"] = c.psi_bounds;
    cj["ok"] = c.ok;
    if (!c.error.empty()) cj["error"] = c.error;
    if (!c.ok) failing.push_back({{"seed", o.seed}, {"index", c.index}, {"case_seed", c.seed}});
    cases.push_back(cj);
  }
  r["cases"] = cases;
  r["all_ok"] = rep.all_ok;
  r["reproducers"] = failing;
  return r;
}

json run_command_json(const std::string& cmd, const std::vector<json>& in, const Config& cfg, const RunConfig& rc) {
  json body;
  if (cmd == "suite") {
    SuiteOptions o;
    o.seed = rc.seed;
    o.p = rc.p;
    if (o.p != 3 && o.p != 5) fail(ErrorKind::Malformed, "suite supports p in {3, 5}");
    const u32 q = rc.q ? rc.q : rc.p;
    if (q == rc.p) o.q_degree = 1;
    else if (q == rc.p * rc.p) o.q_degree = 2;
    else fail(ErrorKind::Malformed, "suite supports q in {p, p^2}");
    if (rc.d_max < 1 || rc.d_max > 3) fail(ErrorKind::Malformed, "suite supports d_max in {1, 2, 3}");
    o.d_max = rc.d_max;
    o.count = rc.count;
    o.cfg = cfg;
    body = suite_to_json(run_suite(o));
  } else if (cmd == "validate") {
    body = cmd_validate(only(in, cmd), cfg);
  } else if (cmd == "cohomology") {
    body = cmd_cohomology(only(in, cmd), cfg);
  } else if (cmd == "euler-check") {
    body = cmd_euler(only(in, cmd), cfg);
  } else if (cmd == "dual") {
    const json& j = only(in, cmd);
    PhiGammaModule M = module_arg(j);
    bool cartier = j.value("cartier", false);
    const i64 N = derived_precision(M, cfg);
    body["module"] = module_to_json(cartier ? cartier_dual(M, N) : dual(M, N));
    body["cartier"] = cartier;
  } else if (cmd == "tensor") {
    PhiGammaModule L, R;
    if (in.size() == 2) {
      L = module_arg(in[0]);
      R = module_arg(in[1]);
    } else {
      L = module_arg(only(in, cmd), "left");
      R = module_arg(in[0], "right");
    }
    body["module"] = module_to_json(tensor(L, R, std::min(derived_precision(L, cfg), derived_precision(R, cfg))));
  } else if (cmd == "twist") {
    const json& j = only(in, cmd);
    i64 n = j.value("n", i64{1});
    body["module"] = module_to_json(tate_twist(module_arg(j), n));
    body["n"] = n;
  } else if (cmd == "ext-build") {
    body = cmd_ext_build(only(in, cmd), cfg);
  } else if (cmd == "class-of") {
    body = cmd_class_of(only(in, cmd), cfg);
  } else if (cmd == "pair") {
    body = cmd_pair(only(in, cmd), cfg);
  } else if (cmd == "identify") {
    body = cmd_identify(only(in, cmd), cfg);
  } else if (cmd == "weight2") {
    body = cmd_weight2(only(in, cmd), cfg);
  } else if (cmd == "obstruct") {
    body = cmd_obstruct(only(in, cmd), cfg);
  } else if (cmd == "lift-dim") {
    body = cmd_lift_dim(only(in, cmd), cfg);
  } else {
    fail(ErrorKind::Malformed, "unknown command \"" + cmd + "\"");
  }
  json r = ok_report(cmd);
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (it.key() == "certificates") {
      for (const auto& c : it.value()) r["certificates"].push_back(c);
    } else {
      r[it.key()] = it.value();
    }
  }
  return r;
}

int run_command(const RunConfig& rc, std::string* report_text) {
  json report;
  int code = 0;
  try {
    Config cfg;
    if (rc.precision) {
      if (*rc.precision < 8) fail(ErrorKind::Malformed, "precision must be at least 8");
      cfg.precision = *rc.precision;
    }
    std::vector<json> inputs;
    for (const auto& path : rc.inputs) {
      std::ifstream f(path);
      if (!f) fail(ErrorKind::Malformed, "cannot read " + path);
      try {
        inputs.push_back(json::parse(f));
      } catch (const json::parse_error& e) {
        fail(ErrorKind::Malformed, path + ": " + e.what());
      }
    }
    report = run_command_json(rc.command, inputs, cfg, rc);
    if (rc.command == "suite" && !report.at("all_ok").get<bool>()) code = 3;
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    report = {{"command", rc.command},
              {"status", "error"},
              {"error", error_kind_name(e.kind())},
              {"message", e.what()},
              {"chi_gamma_convention", "1+p"}};
  } catch (const json::exception& e) {
    code = 5;
    report = {{"command", rc.command}, {"status", "error"}, {"error", "Malformed"}, {"message", e.what()}, {"chi_gamma_convention", "1+p"}};
  }
  std::string text = report.dump(2) + "\n";
  if (report_text) *report_text = text;
  if (rc.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(rc.out);
    if (!f) {
      std::cerr << "cannot write " << rc.out << "\n";
      return 5;
    }
    f << text;
  }
  if (code != 0) std::cerr << report.value("message", std::string("suite failures")) << "\n";
  return code;
}

}  // namespace pgm
