#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace quartet::cli {

const std::vector<std::string_view>& command_names();

/// Runs one subcommand. Human-readable results (fits, gains, sensitivity
/// reports) go to `report`; the returned scan is what gets written as CSV.
ScanResult run_command(std::string_view name, const RunConfig& config, std::ostream& report);

}  // namespace quartet::cli
