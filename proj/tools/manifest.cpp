#include "manifest.hpp"

#include <json.hpp>

#include "output.hpp"

namespace cbp::cli {

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::string& config_hash, std::uint64_t seed,
                    double wall_seconds) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["versions"]["tool"] = kToolVersion;
  j["versions"]["config_schema"] = 1;
  j["versions"]["binary_dump"] = "CBPBIN01";
  j["wall_seconds"] = wall_seconds;
  write_json(out_dir / "manifest.json", j);
}

}  // namespace cbp::cli
