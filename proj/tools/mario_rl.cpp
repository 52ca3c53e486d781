#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mario_rl/harness.hpp"

using namespace mario_rl;

namespace {

struct CommonFlags {
  std::string agent = "hrl";
  std::optional<std::uint64_t> fixed_level;
  int tick_limit = RewardConfig{}.episode_tick_limit;
  std::string config;
};

void add_experiment_flags(CLI::App* sub, ExperimentConfig& c, CommonFlags& f) {
  sub->add_option("--config", f.config, "flat key=value file; flags given on the command line win");
  sub->add_option("--level-type", c.level_type);
  sub->add_option("--difficulty", c.difficulty);
  sub->add_option("--episodes", c.episodes);
  sub->add_option("--alpha", c.learning.alpha);
  sub->add_option("--gamma", c.learning.gamma);
  sub->add_option("--epsilon", c.learning.epsilon0);
  sub->add_option("--epsilon-decay", c.learning.epsilon_decay);
  sub->add_option("--epsilon-min", c.learning.epsilon_min);
  sub->add_option("--run-seed", c.run_seed);
  sub->add_option("--fixed-level", f.fixed_level, "reuse this level seed for every episode");
  sub->add_option("--width", c.generator.width, "generated level width");
  sub->add_flag("--conjunctions", c.generator.coin_monster_conjunctions, "place a coin run next to every monster");
  sub->add_option("--tick-limit", f.tick_limit);
  sub->add_flag("--check-bounds", c.check_bounds);
}

void finish(ExperimentConfig& c, const CommonFlags& f) {
  c.agent = agent_type_from_string(f.agent);
  c.rewards.episode_tick_limit = f.tick_limit;
  if (f.fixed_level) {
    c.seed_policy = LevelSeedPolicy::Fixed;
    c.fixed_level_seed = *f.fixed_level;
  }
}

// CLI11 reads config files only for the top-level app, so subcommand files
// are applied here, after parsing, to options the command line left unset.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty() && item.parents != std::vector<std::string>{"default"})
      throw std::runtime_error("config: sections are not supported ('" + item.fullname() + "')");
    auto* opt = sub->get_option_no_throw("--" + item.name);
    if (!opt || item.name == "config") throw std::runtime_error("config: unknown key '" + item.name + "'");
    if (opt->count() > 0) continue;
    for (const auto& v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

std::vector<AgentType> parse_agents(const std::vector<std::string>& names) {
  std::vector<AgentType> out;
  for (const auto& n : names) out.push_back(agent_type_from_string(n));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical relational RL for a tile platformer"};
  app.require_subcommand(1);

  ExperimentConfig train_cfg;
  CommonFlags train_flags;
  auto* train = app.add_subcommand("train", "train one agent and write its learning curve");
  add_experiment_flags(train, train_cfg, train_flags);
  train->add_option("--agent", train_flags.agent)->check(CLI::IsMember({"hrl", "scripted", "random"}));
  train->add_option("--out", train_cfg.output_path, "learning-curve CSV");
  train->add_option("--checkpoint", train_cfg.checkpoint_path, "write the Q-table here after training");
  train->add_option("--init-checkpoint", train_cfg.init_checkpoint_path, "start from this Q-table");
  train->add_option("--log-trajectory", train_cfg.trajectory_path, "log the last episode (level goes to <path>.level)");

  ExperimentConfig cmp_cfg;
  CommonFlags cmp_flags;
  std::vector<std::string> cmp_agents{"hrl", "scripted", "random"};
  int cmp_runs = 3;
  std::string cmp_dir;
  auto* compare = app.add_subcommand("compare", "train several agents over shared level schedules");
  add_experiment_flags(compare, cmp_cfg, cmp_flags);
  compare->add_option("--agents", cmp_agents)->delimiter(',');
  compare->add_option("--runs", cmp_runs);
  compare->add_option("--out-dir", cmp_dir, "directory for <agent>_run<i>.csv");

  std::vector<std::string> rep_agents{"hrl", "scripted", "random"};
  int rep_runs = 3;
  std::string rep_dir;
  auto* report = app.add_subcommand("report", "rebuild the comparison table from compare's CSVs");
  report->add_option("--agents", rep_agents)->delimiter(',');
  report->add_option("--runs", rep_runs);
  report->add_option("--dir", rep_dir)->required();

  std::string level_file, traj_file;
  auto* replay = app.add_subcommand("replay", "re-execute a logged trajectory and check it matches");
  replay->add_option("--level-file", level_file)->required();
  replay->add_option("--trajectory", traj_file)->required();

  int lvl_type = 0, lvl_difficulty = 0, lvl_width = GeneratorOptions{}.width;
  std::uint64_t lvl_seed = 0;
  bool lvl_conj = false;
  auto* level = app.add_subcommand("level", "print a generated level");
  level->add_option("--level-type", lvl_type);
  level->add_option("--difficulty", lvl_difficulty);
  level->add_option("--seed", lvl_seed);
  level->add_option("--width", lvl_width);
  level->add_flag("--conjunctions", lvl_conj);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      apply_config(train, train_flags.config);
      finish(train_cfg, train_flags);
      const auto run = run_experiment(train_cfg);
      std::cout << format_summary(summarize(run.curve));
    } else if (*compare) {
      apply_config(compare, cmp_flags.config);
      cmp_flags.agent = cmp_agents.empty() ? "hrl" : cmp_agents.front();
      finish(cmp_cfg, cmp_flags);
      std::cout << format_comparison(compare_agents(cmp_cfg, parse_agents(cmp_agents), cmp_runs, cmp_dir));
    } else if (*report) {
      std::cout << format_comparison(comparison_from_dir(parse_agents(rep_agents), rep_runs, rep_dir));
    } else if (*replay) {
      const auto result = replay_trajectory(load_level(slurp(level_file)), parse_trajectory(slurp(traj_file)));
      std::cout << result.message << '\n';
      return result.ok ? 0 : 1;
    } else if (*level) {
      GeneratorOptions g;
      g.width = lvl_width;
      g.coin_monster_conjunctions = lvl_conj;
      std::cout << dump_level(generate_level(lvl_type, lvl_difficulty, lvl_seed, g));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
