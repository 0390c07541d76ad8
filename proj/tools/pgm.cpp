#include <CLI11.hpp>

#include "pgm/cli.hpp"

int main(int argc, char** argv) {
  pgm::RunConfig rc;
  CLI::App app{"pgm: cohomology of mod p (phi, Gamma)-modules"};
  app.add_option("command", rc.command, "command to run")->required()->check(CLI::IsMember(pgm::command_names()));
  app.add_option("--input,-i", rc.inputs, "input JSON document (repeatable)");
  app.add_option("--precision", rc.precision, "working T'-adic precision");
  app.add_option("--seed", rc.seed, "random seed (suite)");
  app.add_option("--out,-o", rc.out, "write the report here instead of stdout");
  app.add_option("--p", rc.p, "suite: prime (3 or 5)");
  app.add_option("--q", rc.q, "suite: coefficient field size (p or p^2)");
  app.add_option("--d-max", rc.d_max, "suite: maximal rank (<= 3)");
  app.add_option("--count", rc.count, "suite: number of modules");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc_code = app.exit(e);
    return rc_code == 0 ? 0 : 5;
  }
  return pgm::run_command(rc);
}
