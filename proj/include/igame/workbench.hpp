#pragma once

#include <string>
#include <vector>

#include "igame/serialize.hpp"

namespace igame::cli {

/// Full command-line entry point: parse, dispatch, map exceptions to the
/// exit-code convention (0 success, 1 pipeline failure, 2 config/parse
/// failure). argv excludes the program name in the vector overload.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// Structural check of a run report: required keys present and every
/// manifest entry exists under the run directory. Throws on violation.
void validate_report(const Json& report, const std::filesystem::path& run_dir);

}  // namespace igame::cli
