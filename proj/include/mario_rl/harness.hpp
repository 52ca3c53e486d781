#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mario_rl/agents.hpp"
#include "mario_rl/env.hpp"
#include "mario_rl/learning.hpp"

namespace mario_rl {

enum class AgentType { Hrl, Scripted, Random };
std::string_view to_string(AgentType a);
AgentType agent_type_from_string(std::string_view s);

enum class LevelSeedPolicy { Fixed, PerEpisode };

struct ExperimentConfig {
  int level_type = 0;
  int difficulty = 0;
  LevelSeedPolicy seed_policy = LevelSeedPolicy::PerEpisode;
  std::uint64_t fixed_level_seed = 0;
  int episodes = 2000;
  AgentType agent = AgentType::Hrl;
  LearningParams learning;
  RewardConfig rewards;
  PhysicsConfig physics;
  GeneratorOptions generator;
  std::uint64_t run_seed = 1;
  bool check_bounds = false;

  std::string output_path;         // learning-curve CSV; empty disables
  std::string checkpoint_path;     // Q-table written after training
  std::string init_checkpoint_path;  // Q-table loaded before training
  std::string trajectory_path;     // last episode's trajectory; level saved to <path>.level

  // Throws std::invalid_argument on an out-of-domain field.
  void validate() const;
};

struct EpisodeResult {
  double total_reward = 0;
  int ticks = 0;
  Outcome outcome = Outcome::Running;
  int coins = 0;
  int kills = 0;
  int blocks = 0;
  int max_column = 0;
  FloCounts flo_selections{};

  bool operator==(const EpisodeResult&) const = default;
};

inline constexpr int kRollingWindow = 100;

struct LearningCurve {
  std::vector<EpisodeResult> rows;
  std::vector<double> rolling_mean;  // mean reward over the last <= 100 rows

  void push(const EpisodeResult& r);
  bool operator==(const LearningCurve&) const = default;
};

// Level seed schedule: a pure function of (run_seed, episode index).
std::uint64_t episode_level_seed(std::uint64_t run_seed, int episode);
Level level_for_episode(const ExperimentConfig& config, int episode);

struct TrajectoryStep {
  int tick = 0;
  std::string flo;
  KLO klo = KLO::NoOp;
  double reward = 0;
  int column = 0;

  bool operator==(const TrajectoryStep&) const = default;
};
using Trajectory = std::vector<TrajectoryStep>;

// Called once per tick after the environment step.
using TickObserver =
    std::function<void(const Observation& before, const RelationalState& state, KLO klo, const StepResult& step)>;

// Resets `env` on `level` and runs observation -> perception -> agent ->
// step until the episode ends.
EpisodeResult run_episode(Env& env, const Level& level, Agent& agent, Trajectory* log = nullptr,
                          const TickObserver& observer = {});

std::unique_ptr<Agent> make_agent(const ExperimentConfig& config);

struct ExperimentRun {
  LearningCurve curve;
  std::unique_ptr<Agent> agent;
};

// Runs config.episodes episodes with persistent agent state and writes the
// configured artefacts. An unwritable output path is reported before any
// episode runs.
ExperimentRun run_experiment(const ExperimentConfig& config);
LearningCurve run_experiment(const ExperimentConfig& config, Agent& agent, Trajectory* last_episode = nullptr);

inline constexpr std::string_view kCurveCsvHeader =
    "episode,reward,ticks,outcome,coins,kills,blocks,max_column,rolling_mean_100";
std::string curve_csv(const LearningCurve& curve);
LearningCurve parse_curve_csv(std::string_view text);

struct CurveSummary {
  double mean_first = 0;  // first min(100, n) episodes
  double mean_last = 0;   // last min(100, n) episodes
  double finish_rate = 0;
};
CurveSummary summarize(const LearningCurve& curve);
std::string format_summary(const CurveSummary& s);

std::string format_trajectory(const Trajectory& t);
Trajectory parse_trajectory(std::string_view text);

struct ReplayReport {
  bool ok = false;
  std::size_t steps_checked = 0;
  std::string message;
};
// Re-executes the logged KLOs on `level` and checks every logged line.
ReplayReport replay_trajectory(const Level& level, const Trajectory& trajectory, const RewardConfig& rewards = {},
                               const PhysicsConfig& physics = {});

struct Evaluation {
  std::vector<EpisodeResult> episodes;
  double mean_reward = 0;
  double finish_rate = 0;
  // Ticks whose state proposed both TackleMonster and GrabCoin, and how many
  // of those the greedy FLO choice was TackleMonster (HRL agents only).
  long conjunction_states = 0;
  long tackle_preferred = 0;
};
// Greedy, non-learning episodes on the level schedule of `eval_seed`. The
// agent's learning flag and exploration rate are restored afterwards.
Evaluation evaluate(Agent& agent, const ExperimentConfig& config, int episodes, std::uint64_t eval_seed);

struct ComparisonRow {
  std::string agent;
  int runs = 0;
  double reward_mean = 0;
  double reward_sd = 0;
  double finish_mean = 0;
  double finish_sd = 0;

  bool operator==(const ComparisonRow&) const = default;
};
struct NamedCurve {
  std::string agent;
  LearningCurve curve;
};
std::vector<ComparisonRow> aggregate_comparison(const std::vector<NamedCurve>& curves);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

std::string comparison_csv_name(AgentType agent, int run);
// Runs every agent over `runs` run seeds (base.run_seed + i) sharing one
// level schedule; CSVs go to out_dir when it is non-empty.
std::vector<ComparisonRow> compare_agents(const ExperimentConfig& base, const std::vector<AgentType>& agents, int runs,
                                          const std::string& out_dir);
// Rebuilds the table from the CSVs compare_agents wrote.
std::vector<ComparisonRow> comparison_from_dir(const std::vector<AgentType>& agents, int runs,
                                               const std::string& dir);

}  // namespace mario_rl
