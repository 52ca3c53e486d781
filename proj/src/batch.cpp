#include <exception>

#include "mario_rl/batch.hpp"

namespace mario_rl {

std::vector<ExperimentRun> run_batch_serial(std::span<const ExperimentConfig> configs) {
  std::vector<ExperimentRun> runs;
  runs.reserve(configs.size());
  for (const auto& c : configs) runs.push_back(run_experiment(c));
  return runs;
}

std::vector<ExperimentRun> run_batch_parallel(std::span<const ExperimentConfig> configs) {
  const long n = static_cast<long>(configs.size());
  std::vector<ExperimentRun> runs(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      runs[i] = run_experiment(configs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return runs;
}

std::vector<ExperimentRun> run_batch(std::span<const ExperimentConfig> configs, Execution execution) {
  return execution == Execution::Serial ? run_batch_serial(configs) : run_batch_parallel(configs);
}

}  // namespace mario_rl
