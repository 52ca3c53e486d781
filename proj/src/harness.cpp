#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mario_rl/batch.hpp"
#include "mario_rl/harness.hpp"
#include "mario_rl/perception.hpp"
#include "mario_rl/rng.hpp"

namespace mario_rl {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_field(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("bad " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n'))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::ofstream open_for_write(const std::string& path, std::string_view what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + std::string(what) + " '" + path + "'");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string_view to_string(AgentType a) {
  switch (a) {
    case AgentType::Hrl: return "hrl";
    case AgentType::Scripted: return "scripted";
    case AgentType::Random: return "random";
  }
  return "?";
}

AgentType agent_type_from_string(std::string_view s) {
  for (AgentType a : {AgentType::Hrl, AgentType::Scripted, AgentType::Random})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown agent '" + std::string(s) + "' (expected hrl, scripted or random)");
}

void ExperimentConfig::validate() const {
  if (level_type != 0) throw std::invalid_argument("unsupported level_type " + std::to_string(level_type));
  if (difficulty < 0) throw std::invalid_argument("difficulty must be non-negative");
  if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  if (rewards.episode_tick_limit <= 0) throw std::invalid_argument("episode_tick_limit must be positive");
  learning.validate();
}

void LearningCurve::push(const EpisodeResult& r) {
  rows.push_back(r);
  const std::size_t n = rows.size();
  const std::size_t first = n > kRollingWindow ? n - kRollingWindow : 0;
  double sum = 0;
  for (std::size_t i = first; i < n; ++i) sum += rows[i].total_reward;
  rolling_mean.push_back(sum / static_cast<double>(n - first));
}

std::uint64_t episode_level_seed(std::uint64_t run_seed, int episode) {
  return splitmix64(splitmix64(run_seed) + static_cast<std::uint64_t>(episode));
}

Level level_for_episode(const ExperimentConfig& config, int episode) {
  const std::uint64_t seed = config.seed_policy == LevelSeedPolicy::Fixed ? config.fixed_level_seed
                                                                          : episode_level_seed(config.run_seed, episode);
  return generate_level(config.level_type, config.difficulty, seed, config.generator);
}

EpisodeResult run_episode(Env& env, const Level& level, Agent& agent, Trajectory* log, const TickObserver& observer) {
  Observation obs = env.reset(level);
  agent.begin_episode();
  double reward = 0;
  while (true) {
    const RelationalState state = perceive(obs);
    const KLO klo = agent.act(obs, state, reward);
    StepResult step = env.step(to_action(klo));
    if (log)
      log->push_back({obs.tick, std::string(agent.label()), klo, step.reward,
                      mario_column(step.observation.mario, env.physics())});
    if (observer) observer(obs, state, klo, step);
    reward = step.reward;
    if (step.done) {
      agent.end_episode(reward);
      break;
    }
    obs = std::move(step.observation);
  }

  const auto& stats = env.stats();
  EpisodeResult r;
  r.total_reward = stats.total_reward;
  r.ticks = stats.ticks;
  r.outcome = stats.outcome;
  r.coins = stats.coins;
  r.kills = stats.kills;
  r.blocks = stats.blocks;
  r.max_column = env.mario().max_column_reached;
  r.flo_selections = agent.flo_selections();
  return r;
}

std::unique_ptr<Agent> make_agent(const ExperimentConfig& config) {
  switch (config.agent) {
    case AgentType::Hrl: {
      HrlOptions options;
      options.params = config.learning;
      options.seed = splitmix64(config.run_seed ^ 0x6872'6c61'6765'6e74ULL);
      options.check_bounds = config.check_bounds;
      return std::make_unique<HrlAgent>(options);
    }
    case AgentType::Scripted:
      return std::make_unique<ScriptedAgent>();
    case AgentType::Random:
      return std::make_unique<RandomAgent>(splitmix64(config.run_seed ^ 0x7261'6e64'6f6dULL));
  }
  throw std::invalid_argument("unknown agent type");
}

LearningCurve run_experiment(const ExperimentConfig& config, Agent& agent, Trajectory* last_episode) {
  config.validate();
  std::ofstream csv;
  if (!config.output_path.empty()) csv = open_for_write(config.output_path, "learning curve");

  Env env(config.rewards, config.physics);
  LearningCurve curve;
  for (int ep = 0; ep < config.episodes; ++ep) {
    const Level level = level_for_episode(config, ep);
    Trajectory* log = ep + 1 == config.episodes ? last_episode : nullptr;
    curve.push(run_episode(env, level, agent, log));
  }
  if (csv.is_open()) {
    csv << curve_csv(curve);
    if (!csv) throw std::runtime_error("failed writing '" + config.output_path + "'");
  }
  return curve;
}

ExperimentRun run_experiment(const ExperimentConfig& config) {
  config.validate();
  // Surface unwritable artefact paths before spending time on episodes.
  std::ofstream checkpoint, trajectory, trajectory_level;
  if (!config.checkpoint_path.empty()) checkpoint = open_for_write(config.checkpoint_path, "checkpoint");
  if (!config.trajectory_path.empty()) {
    trajectory = open_for_write(config.trajectory_path, "trajectory");
    trajectory_level = open_for_write(config.trajectory_path + ".level", "trajectory level");
  }

  ExperimentRun run;
  run.agent = make_agent(config);
  auto* hrl = dynamic_cast<HrlAgent*>(run.agent.get());
  if (hrl && !config.init_checkpoint_path.empty()) hrl->store() = load_qstore(read_file(config.init_checkpoint_path));

  Trajectory last;
  run.curve = run_experiment(config, *run.agent, trajectory.is_open() ? &last : nullptr);

  if (checkpoint.is_open() && hrl) checkpoint << save_qstore(hrl->store());
  if (trajectory.is_open()) {
    trajectory << format_trajectory(last);
    trajectory_level << dump_level(level_for_episode(config, config.episodes - 1));
  }
  return run;
}

std::string curve_csv(const LearningCurve& curve) {
  std::string out(kCurveCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    const auto& r = curve.rows[i];
    out += std::to_string(i) + ',' + format_double(r.total_reward) + ',' + std::to_string(r.ticks) + ',' +
           std::string(to_string(r.outcome)) + ',' + std::to_string(r.coins) + ',' + std::to_string(r.kills) + ',' +
           std::to_string(r.blocks) + ',' + std::to_string(r.max_column) + ',' + format_double(curve.rolling_mean[i]) +
           '\n';
  }
  return out;
}

LearningCurve parse_curve_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kCurveCsvHeader) throw std::runtime_error("learning curve CSV: unexpected header");
  LearningCurve curve;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 9) throw std::runtime_error("learning curve CSV: row " + std::to_string(i) + " has wrong arity");
    EpisodeResult r;
    r.total_reward = parse_field<double>(f[1], "reward");
    r.ticks = parse_field<int>(f[2], "ticks");
    r.outcome = outcome_from_string(f[3]);
    r.coins = parse_field<int>(f[4], "coins");
    r.kills = parse_field<int>(f[5], "kills");
    r.blocks = parse_field<int>(f[6], "blocks");
    r.max_column = parse_field<int>(f[7], "max_column");
    curve.rows.push_back(r);
    curve.rolling_mean.push_back(parse_field<double>(f[8], "rolling mean"));
  }
  return curve;
}

CurveSummary summarize(const LearningCurve& curve) {
  CurveSummary s;
  const std::size_t n = curve.rows.size();
  if (n == 0) return s;
  const std::size_t w = std::min<std::size_t>(kRollingWindow, n);
  double first = 0, last = 0;
  int finished = 0;
  for (std::size_t i = 0; i < w; ++i) first += curve.rows[i].total_reward;
  for (std::size_t i = n - w; i < n; ++i) last += curve.rows[i].total_reward;
  for (const auto& r : curve.rows) finished += r.outcome == Outcome::Finished;
  s.mean_first = first / static_cast<double>(w);
  s.mean_last = last / static_cast<double>(w);
  s.finish_rate = static_cast<double>(finished) / static_cast<double>(n);
  return s;
}

std::string format_summary(const CurveSummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "mean reward first 100: %.3f\nmean reward last 100: %.3f\nfinish rate: %.3f\n",
                s.mean_first, s.mean_last, s.finish_rate);
  return buf;
}

std::string format_trajectory(const Trajectory& t) {
  std::string out;
  for (const auto& s : t)
    out += std::to_string(s.tick) + " flo=" + s.flo + " klo=" + std::string(to_string(s.klo)) +
           " r=" + format_double(s.reward) + " x=" + std::to_string(s.column) + '\n';
  return out;
}

Trajectory parse_trajectory(std::string_view text) {
  Trajectory t;
  int line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    const auto f = split(line, ' ');
    auto value = [&](std::size_t i, std::string_view key) {
      if (i >= f.size() || f[i].substr(0, key.size()) != key)
        throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": expected '" + std::string(key) + "'");
      return f[i].substr(key.size());
    };
    if (f.size() != 5) throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": expected 5 fields");
    TrajectoryStep s;
    s.tick = parse_field<int>(f[0], "tick");
    s.flo = std::string(value(1, "flo="));
    s.klo = klo_from_string(value(2, "klo="));
    s.reward = parse_field<double>(value(3, "r="), "reward");
    s.column = parse_field<int>(value(4, "x="), "column");
    t.push_back(std::move(s));
  }
  return t;
}

ReplayReport replay_trajectory(const Level& level, const Trajectory& trajectory, const RewardConfig& rewards,
                               const PhysicsConfig& physics) {
  ReplayReport report;
  Env env(rewards, physics);
  Observation obs = env.reset(level);
  for (const auto& logged : trajectory) {
    if (env.done()) {
      report.message = "episode ended before logged tick " + std::to_string(logged.tick);
      return report;
    }
    const StepResult step = env.step(to_action(logged.klo));
    TrajectoryStep actual{obs.tick, logged.flo, logged.klo, step.reward, mario_column(step.observation.mario, physics)};
    if (actual != logged) {
      report.message = "mismatch at tick " + std::to_string(logged.tick) + ": logged '" +
                       format_trajectory({logged}) + "' replayed '" + format_trajectory({actual}) + "'";
      return report;
    }
    ++report.steps_checked;
    obs = step.observation;
  }
  if (!env.done()) {
    report.message = "replay did not reach the end of the episode";
    return report;
  }
  report.ok = true;
  report.message = "replayed " + std::to_string(report.steps_checked) + " ticks identically";
  return report;
}

Evaluation evaluate(Agent& agent, const ExperimentConfig& config, int episodes, std::uint64_t eval_seed) {
  auto* hrl = dynamic_cast<HrlAgent*>(&agent);
  const bool was_learning = hrl ? hrl->learning() : false;
  const double old_epsilon = hrl ? hrl->epsilon() : 0.0;
  if (hrl) {
    hrl->set_learning(false);
    hrl->set_epsilon(0.0);
  }

  Evaluation ev;
  TickObserver observer;
  if (hrl) {
    observer = [&](const Observation&, const RelationalState& state, KLO, const StepResult&) {
      bool tackle = false, coin = false;
      for (const auto& flo : propose_flos(state)) {
        tackle |= flo.kind == FLOKind::TackleMonster;
        coin |= flo.kind == FLOKind::GrabCoin;
      }
      if (!(tackle && coin)) return;
      ++ev.conjunction_states;
      if (hrl->greedy_flo(state).kind == FLOKind::TackleMonster) ++ev.tackle_preferred;
    };
  }

  ExperimentConfig schedule = config;
  schedule.run_seed = eval_seed;
  Env env(config.rewards, config.physics);
  int finished = 0;
  double total = 0;
  for (int i = 0; i < episodes; ++i) {
    const EpisodeResult r = run_episode(env, level_for_episode(schedule, i), agent, nullptr, observer);
    finished += r.outcome == Outcome::Finished;
    total += r.total_reward;
    ev.episodes.push_back(r);
  }
  if (episodes > 0) {
    ev.mean_reward = total / episodes;
    ev.finish_rate = static_cast<double>(finished) / episodes;
  }

  if (hrl) {
    hrl->set_learning(was_learning);
    hrl->set_epsilon(old_epsilon);
  }
  return ev;
}

std::vector<ComparisonRow> aggregate_comparison(const std::vector<NamedCurve>& curves) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_agent;
  for (const auto& nc : curves) {
    if (!per_agent.count(nc.agent)) order.push_back(nc.agent);
    auto& [rewards, finishes] = per_agent[nc.agent];
    double total = 0;
    int finished = 0;
    for (const auto& r : nc.curve.rows) {
      total += r.total_reward;
      finished += r.outcome == Outcome::Finished;
    }
    const double n = std::max<std::size_t>(nc.curve.rows.size(), 1);
    rewards.push_back(total / n);
    finishes.push_back(finished / n);
  }
  std::vector<ComparisonRow> rows;
  for (const auto& name : order) {
    const auto& [rewards, finishes] = per_agent[name];
    rows.push_back({name, static_cast<int>(rewards.size()), mean_of(rewards), sample_sd(rewards), mean_of(finishes),
                    sample_sd(finishes)});
  }
  return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::string out = "agent       runs  reward (mean +- sd)      finish rate (mean +- sd)\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s  %4d  %9.3f +- %-9.3f  %6.3f +- %-6.3f\n", r.agent.c_str(), r.runs,
                  r.reward_mean, r.reward_sd, r.finish_mean, r.finish_sd);
    out += buf;
  }
  return out;
}

std::string comparison_csv_name(AgentType agent, int run) {
  return std::string(to_string(agent)) + "_run" + std::to_string(run) + ".csv";
}

std::vector<ComparisonRow> compare_agents(const ExperimentConfig& base, const std::vector<AgentType>& agents, int runs,
                                          const std::string& out_dir) {
  if (agents.size() < 2) throw std::invalid_argument("compare needs at least two agent variants");
  if (runs < 1) throw std::invalid_argument("compare needs at least one run");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  std::vector<ExperimentConfig> configs;
  for (AgentType agent : agents) {
    for (int r = 0; r < runs; ++r) {
      ExperimentConfig c = base;
      c.agent = agent;
      c.run_seed = base.run_seed + static_cast<std::uint64_t>(r);
      c.output_path = out_dir.empty() ? "" : (std::filesystem::path(out_dir) / comparison_csv_name(agent, r)).string();
      c.checkpoint_path.clear();
      c.trajectory_path.clear();
      configs.push_back(std::move(c));
    }
  }
  const auto results = run_batch_parallel(configs);

  std::vector<NamedCurve> curves;
  for (std::size_t i = 0; i < results.size(); ++i)
    curves.push_back({std::string(to_string(configs[i].agent)), results[i].curve});
  return aggregate_comparison(curves);
}

std::vector<ComparisonRow> comparison_from_dir(const std::vector<AgentType>& agents, int runs,
                                               const std::string& dir) {
  std::vector<NamedCurve> curves;
  for (AgentType agent : agents)
    for (int r = 0; r < runs; ++r)
      curves.push_back({std::string(to_string(agent)),
                        parse_curve_csv(read_file((std::filesystem::path(dir) / comparison_csv_name(agent, r)).string()))});
  return aggregate_comparison(curves);
}

}  // namespace mario_rl
