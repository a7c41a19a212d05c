#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsum/report.hpp"

namespace vsum {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("cli", what) {}
};

struct RunOptions {
  std::optional<uint64_t> seed;       // overrides the config's seed
  std::optional<std::string> out_dir; // overrides output_dir
  std::optional<int> threads;
  std::string base_dir = ".";         // relative field paths resolve against this
};

struct RunResult {
  json manifest;
  bool pass = true;
  std::string out_dir;
};

// Validates the whole config before running anything; throws ConfigError.
void validate_config(const json& cfg);
json load_config(const std::string& path);

RunResult run_config(const json& cfg, const RunOptions& opt);

}  // namespace vsum
