#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drbm/model.hpp"

namespace drbm::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,       // bad configuration or a violated hypothesis
  kUnsupported = 3,       // no closed-form density for these parameters
  kValidationFailed = 4,  // `validate` found a failing check
};

// Named parameter sets: symmetric, skew, appendix-r1, transcendental.
std::optional<ModelParams> preset(std::string_view name);
const std::vector<std::string>& preset_names();

// Keys accepted in config files and --set overrides.
const std::vector<std::string>& config_keys();

// Flat "key = value" file; '#' starts a comment. Throws Error(Config) on
// unreadable files, malformed lines or unknown keys.
std::map<std::string, std::string> read_config(const std::string& path);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drbm::cli
