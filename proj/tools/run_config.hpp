#pragma once

#include <string>
#include <vector>

#include "cosparse/bench.hpp"

namespace cosparse::cli {

// Every knob the CLI exposes, with the bench defaults. Config files are
// UTF-8 key=value lines with '#' comments; unknown keys are hard errors.
// Command-line --set overrides win over file values.
struct Settings {
  BenchConfig bench = BenchConfig::defaults();

  void apply_file(const std::string& path);
  void apply_override(const std::string& key_equals_value);
  void apply_overrides(const std::vector<std::string>& overrides);

  static std::string known_keys_help();
};

}  // namespace cosparse::cli
