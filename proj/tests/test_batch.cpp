#include <gtest/gtest.h>

#include "mario_rl/batch.hpp"

using namespace mario_rl;

namespace {

std::vector<ExperimentConfig> mixed_configs() {
  std::vector<ExperimentConfig> configs;
  for (AgentType agent : {AgentType::Hrl, AgentType::Scripted, AgentType::Random}) {
    for (std::uint64_t seed : {1, 2}) {
      ExperimentConfig c;
      c.agent = agent;
      c.episodes = 25;
      c.run_seed = seed;
      c.difficulty = static_cast<int>(seed);
      c.generator.width = 80;
      configs.push_back(c);
    }
  }
  return configs;
}

}  // namespace

TEST(Batch, ParallelMatchesSerialReference) {
  const auto configs = mixed_configs();
  const auto serial = run_batch_serial(configs);
  const auto parallel = run_batch_parallel(configs);
  ASSERT_EQ(serial.size(), configs.size());
  ASSERT_EQ(parallel.size(), configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EXPECT_EQ(serial[i].curve, parallel[i].curve) << "config " << i;
    const auto* a = dynamic_cast<const HrlAgent*>(serial[i].agent.get());
    const auto* b = dynamic_cast<const HrlAgent*>(parallel[i].agent.get());
    ASSERT_EQ(a == nullptr, b == nullptr);
    if (a) EXPECT_EQ(save_qstore(a->store()), save_qstore(b->store()));
  }
}

TEST(Batch, EachResultMatchesAStandaloneRun) {
  const auto configs = mixed_configs();
  const auto batch = run_batch(configs, Execution::Parallel);
  for (std::size_t i = 0; i < configs.size(); ++i) EXPECT_EQ(batch[i].curve, run_experiment(configs[i]).curve);
}

TEST(Batch, ErrorsPropagateFromWorkers) {
  auto configs = mixed_configs();
  configs[3].episodes = 0;
  EXPECT_THROW(run_batch(configs, Execution::Serial), std::invalid_argument);
  EXPECT_THROW(run_batch(configs, Execution::Parallel), std::invalid_argument);
  EXPECT_TRUE(run_batch_parallel({}).empty());
}
