#pragma once

// Flat key = value simulation config:
//
//   # comment
//   num_bins    = 50
//   noise_mean  = 1.0
//   targets     = 10:0.5, 20:1, 30:3, 40:10
//   thresholds  = 2, 5
//   repetitions = 10000
//   seed        = 1
//
// num_bins, noise_mean and thresholds default to 50, 1 and {2, 5};
// repetitions is required; seed defaults to 0; targets defaults to none.

#include <string>
#include <string_view>

#include "pnrthresh/rangefinder.hpp"

namespace pnrthresh {

/// Parses and validates. Errors are ConfigError carrying the 1-based line
/// number and a message prefixed with "<source_name>:<line>: ".
SimConfig parse_sim_config(std::string_view text, std::string_view source_name = "<config>");

SimConfig load_sim_config(const std::string& path);

/// Canonical text form; parse_sim_config(format_sim_config(c)) == c.
std::string format_sim_config(const SimConfig& config);

}  // namespace pnrthresh
