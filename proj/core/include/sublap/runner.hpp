#pragma once

#include <iosfwd>
#include <string>

#include "sublap/config.hpp"

namespace sublap {

enum class Command { solve, sweep, distance, dimension, verify };

Command command_from_string(const std::string& name);

// Exit-code contract, fixed for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitUsage = 4;

/// Runs one command against a validated config: echoes the effective
/// config, warns about command-irrelevant keys, writes the artifacts under
/// cfg.output_dir and returns the exit code. All outputs are deterministic
/// given the seed.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace sublap
