#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace cbp::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility sidecar written next to every subcommand's outputs:
/// config hash, resolved seed, tool/format versions and wall time. The wall
/// time field is informational and not covered by byte-stability.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::string& config_hash, std::uint64_t seed,
                    double wall_seconds);

}  // namespace cbp::cli
