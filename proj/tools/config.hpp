#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbp/model.hpp"
#include "cbp/simulate.hpp"

namespace cbp::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // csv | json | binary (trajectory files)
};

/// One experiment: system parameters, optional initial configuration,
/// discretization, requested analyses and output routing. Parsing is strict:
/// unknown keys are rejected, and serialize(parse(x)) is a fixed point.
struct ExperimentConfig {
  SystemSpec spec;
  std::optional<InitialConfig> initial;
  SimConfig sim;
  bool seed_in_config = false;
  std::vector<std::string> analysis;
  OutputConfig output;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a over the canonical serialization; stable across runs and platforms.
std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash_hex(const ExperimentConfig& cfg);

/// 17-significant-digit decimal formatting used for every float we write.
std::string format_double(double v);

}  // namespace cbp::cli
