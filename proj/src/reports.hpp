#pragma once

#include <string>
#include <vector>

#include "json_io.hpp"

namespace pa {

/// Commands understood by run_command.
const std::vector<std::string>& command_names();

/// Runs one command with a flat JSON config. Missing parameters take their
/// defaults; the report echoes the fully resolved config under "config" and a
/// short description of the checked statement under "anchor".
Json run_command(const std::string& command, const Json& config);

/// Tabular view of a report from run_command, for commands that have one.
std::string report_csv(const std::string& command, const Json& report);

}  // namespace pa
