#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pon/types.hpp"

namespace pon {

/// Reads a PON config from the key-value text format:
///
///     # comment
///     num_onus      = 3
///     cycle_length  = 1.0          # optional, default 1.0
///     guards        = 0 0 0        # optional, default all zero; one value broadcasts
///     slice_of      = 0 0 1
///     slice_weights = 1.0 1.2
///     lambdas       = 10 1 1
///     unit_time     = 0.01         # optional, default 0.01
///     delta_t       = 0.5          # optional, default 0
///
/// Vector entries may be separated by whitespace or commas. Syntax errors and
/// invariant violations are reported with the offending line number.
PonConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
PonConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& out, const PonConfig& config);

}  // namespace pon
