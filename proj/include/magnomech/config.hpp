#pragma once

#include <string>
#include <string_view>

#include "magnomech/params.hpp"

namespace magnomech {

// Plain-text key-value configuration.
//
//   # comment
//   [dimensionless]          (keys before any section belong here)
//   theta = 3.14159265
//   g_a   = 1.6
//
//   [physical]               (mutually exclusive with [dimensionless])
//   cavity_freq = 1.9 GHz    (Hz-family suffixes mean ordinary frequency, x 2 pi)
//   drive_power = 0.0164 mW
//
// Unspecified dimensionless keys take the SystemParams defaults. A physical
// block is converted with derive_couplings(); unspecified physical keys take
// the PhysicalInputs defaults.
//
// Throws ConfigError for syntax errors, unknown keys or both blocks present;
// ValidationError (listing every failure) for invariant violations.
SystemParams load_config(std::string_view text);
SystemParams load_config_file(const std::string& path);

// Parses the physical block only; exposed for tests and the CLI.
PhysicalInputs parse_physical(std::string_view text);

// Writes a [dimensionless] block with every key at shortest round-trip precision.
std::string serialize_config(const SystemParams& p);

// Parses "value [unit]" for the physical block. Throws ConfigError on an
// unknown unit or malformed number.
double parse_quantity(std::string_view key, std::string_view value);

} // namespace magnomech
