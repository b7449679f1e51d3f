#pragma once

#include <string>

#include "neel/config.hpp"
#include "neel/dynamics.hpp"

namespace neel {

// The applied field described by the config (checked T/2-antiperiodic).
Forcing make_forcing(const RunConfig& cfg);

// Executes one command (static | spectrum | evolve | periodic | floquet),
// writing its CSV artifacts plus manifest.json under output.directory.
// Outputs are deterministic for a fixed config and build; the manifest
// echoes the config and records a checksum per artifact. Returns the
// process exit code: 0 on success, 2 for config errors, 1 for module
// errors; failures leave a machine-readable error.json.
int run_command(const std::string& command, const RunConfig& cfg);

}  // namespace neel
