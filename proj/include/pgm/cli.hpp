#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgm/io.hpp"
#include "pgm/suite.hpp"

namespace pgm {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<i64> precision;
  u64 seed = 1;
  std::string out;  // empty: stdout
  // suite parameters
  u32 p = 3;
  u32 q = 0;  // 0: q = p
  std::size_t d_max = 2;
  std::size_t count = 10;
};

const std::vector<std::string>& command_names();

// Runs one command on parsed JSON inputs. Throws pgm::Error.
json run_command_json(const std::string& command, const std::vector<json>& inputs, const Config& cfg, const RunConfig& rc);

// Reads inputs, runs, writes the report (or an error report); returns the exit code.
int run_command(const RunConfig& rc, std::string* report_text = nullptr);

json suite_to_json(const SuiteReport& r);

}  // namespace pgm
