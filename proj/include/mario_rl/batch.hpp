#pragma once

#include <span>
#include <vector>

#include "mario_rl/harness.hpp"

namespace mario_rl {

enum class Execution { Serial, Parallel };

// Independent experiments, one result per config in input order. The serial
// version is the reference the OpenMP version is tested against; the two
// must produce identical curves and agents.
std::vector<ExperimentRun> run_batch_serial(std::span<const ExperimentConfig> configs);
std::vector<ExperimentRun> run_batch_parallel(std::span<const ExperimentConfig> configs);
std::vector<ExperimentRun> run_batch(std::span<const ExperimentConfig> configs, Execution execution);

}  // namespace mario_rl
