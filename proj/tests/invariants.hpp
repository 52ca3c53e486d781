#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "mario_rl/agents.hpp"
#include "mario_rl/harness.hpp"

namespace mario_rl::invariants {

struct Tally {
  long episodes = 0;
  long ticks = 0;
  long hierarchy = 0;       // action not issued from a substate, or illegal for its FLO
  long substate_exit = 0;   // a terminated substate still executing afterwards
  long q_bound = 0;         // |Q| above Rmax / (1 - gamma)
  long reward = 0;          // reward accounting identity broken
  long update_count = 0;    // KLO updates != actions, or FLO updates != substates closed
  double rmax = 0;
  std::string first;

  long violations() const { return hierarchy + substate_exit + q_bound + reward + update_count; }
  void fail(long& counter, const std::string& what) {
    ++counter;
    if (first.empty()) first = what;
  }
};

inline double terminal_reward(Outcome o, const RewardConfig& rw) {
  if (o == Outcome::Finished) return rw.finish;
  if (o == Outcome::Died) return rw.death;
  return 0;
}

inline void check_reward_identity(const EpisodeResult& r, const RewardConfig& rw, Tally& t) {
  const double expected = r.coins * rw.coin + r.kills * rw.monster_kill + r.blocks * rw.question_block +
                          terminal_reward(r.outcome, rw) + rw.per_tick * r.ticks +
                          rw.per_new_column * (r.max_column - kSpawnColumn);
  if (std::abs(expected - r.total_reward) > 1e-6)
    t.fail(t.reward, "reward identity: logged " + std::to_string(r.total_reward) + " expected " +
                         std::to_string(expected));
}

// One HRL episode with every per-tick structural check.
inline EpisodeResult check_hrl_episode(Env& env, const Level& level, HrlAgent& agent, Tally& t) {
  const auto before = agent.counters();
  const double gamma = agent.options().params.gamma;
  auto observer = [&](const Observation&, const RelationalState&, KLO klo, const StepResult& step) {
    ++t.ticks;
    t.rmax = std::max(t.rmax, std::abs(step.reward));
    const auto* exec = std::get_if<ExecutingFLO>(&agent.phase());
    if (!exec) {
      t.fail(t.hierarchy, "action issued outside a substate at tick " + std::to_string(step.observation.tick));
      return;
    }
    const auto legal = legal_klos(exec->flo.kind);
    if (std::find(legal.begin(), legal.end(), klo) == legal.end())
      t.fail(t.hierarchy, std::string(to_string(klo)) + " is not legal under " + std::string(to_string(exec->flo.kind)));
    if (exec->ticks_in_substate < 1 || exec->ticks_in_substate > 50)
      t.fail(t.hierarchy, "ticks_in_substate out of range");
    const auto term = agent.last_termination();
    if (term && !term->is_active() && exec->ticks_in_substate != 1)
      t.fail(t.substate_exit, "substate kept executing after " + std::string(to_string(*term)));
  };
  const EpisodeResult r = run_episode(env, level, agent, nullptr, observer);
  ++t.episodes;

  const auto& after = agent.counters();
  if (agent.learning()) {
    const long actions = after.actions - before.actions;
    const long klo_updates = after.klo_updates - before.klo_updates;
    const long flo_updates = after.flo_updates - before.flo_updates;
    const long closed = after.substates_closed - before.substates_closed;
    if (klo_updates != actions)
      t.fail(t.update_count, "KLO updates " + std::to_string(klo_updates) + " != actions " + std::to_string(actions));
    if (flo_updates != closed)
      t.fail(t.update_count, "FLO updates " + std::to_string(flo_updates) + " != substates " + std::to_string(closed));
  }
  const double bound = t.rmax / (1 - gamma);
  if (agent.store().max_abs_value() > bound * (1 + 1e-12) + 1e-9)
    t.fail(t.q_bound, "max |Q| " + std::to_string(agent.store().max_abs_value()) + " exceeds " + std::to_string(bound));
  check_reward_identity(r, env.rewards(), t);
  return r;
}

}  // namespace mario_rl::invariants
