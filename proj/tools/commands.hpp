#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cbp::cli {

// Exit-code contract: 0 success, 1 domain failure, 2 usage/parse error
// (the parse path is handled by the caller).

int cmd_validate(const ExperimentConfig& cfg);

int cmd_stationary(const ExperimentConfig& cfg, std::optional<std::size_t> n_override,
                   const std::vector<std::size_t>& ladder_sizes);

int cmd_simulate(const ExperimentConfig& cfg, std::size_t jobs);

int cmd_converge(const ExperimentConfig& cfg, const std::string& start, double factor,
                 std::vector<double> checkpoints, std::size_t jobs);

int cmd_compare(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                const std::string& inequality, double threshold, std::size_t jobs);

int cmd_collisions(const ExperimentConfig& cfg, std::vector<double> deltas,
                   std::vector<double> dts);

/// Deterministic worker pool: results land in caller-indexed slots, so the
/// merge order never depends on scheduling.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace cbp::cli
