#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "mario_rl/env.hpp"
#include "mario_rl/learning.hpp"
#include "mario_rl/operators.hpp"
#include "mario_rl/perception.hpp"
#include "mario_rl/rng.hpp"

namespace mario_rl {

using FloCounts = std::array<int, kFloKindCount>;

// A policy driven by the episode loop: one act() per environment tick, then
// end_episode() with the reward of the final step.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual void begin_episode() {}
  virtual KLO act(const Observation& observation, const RelationalState& state, double reward_since_last) = 0;
  virtual void end_episode(double terminal_reward) { (void)terminal_reward; }

  // Label written to trajectory logs for the current tick.
  virtual std::string_view label() const { return "-"; }
  virtual FloCounts flo_selections() const { return {}; }
};

struct SelectingFLO {};

struct ExecutingFLO {
  FLOInstance flo;
  FLOKey flo_key;
  int ticks_in_substate = 0;
  double accumulated_R = 0;
  double discount = 1;  // gamma^ticks_in_substate
  std::optional<KLOEntry> last_klo_key;
};

using AgentPhase = std::variant<SelectingFLO, ExecutingFLO>;

struct HrlOptions {
  LearningParams params;
  OperatorLimits limits;
  std::uint64_t seed = 1;
  // Throw std::logic_error when a value leaves the bound implied by the
  // largest per-tick reward seen so far.
  bool check_bounds = false;
};

// Two-level learner: SMDP SARSA over FLOs, SARSA over KLOs inside the
// active FLO's substate.
class HrlAgent final : public Agent {
 public:
  explicit HrlAgent(HrlOptions options = {});

  void begin_episode() override;
  KLO act(const Observation& observation, const RelationalState& state, double reward_since_last) override;
  void end_episode(double terminal_reward) override;
  std::string_view label() const override;
  FloCounts flo_selections() const override { return flo_selections_; }

  // Throws std::logic_error after the episode has ended.
  KLO act(const RelationalState& state, double reward_since_last);

  // Greedy FLO for `state` under the current table (no exploration, no update).
  FLOInstance greedy_flo(const RelationalState& state) const;

  void set_learning(bool on) { learning_ = on; }
  bool learning() const { return learning_; }
  double epsilon() const { return epsilon_; }
  void set_epsilon(double e) { epsilon_ = e; }

  const QStore& store() const { return store_; }
  QStore& store() { return store_; }
  const AgentPhase& phase() const { return phase_; }
  const HrlOptions& options() const { return options_; }

  // Termination status evaluated during the most recent act(), if a
  // substate was active when it began.
  std::optional<TerminationStatus> last_termination() const { return last_termination_; }

  struct Counters {
    long actions = 0;
    long klo_updates = 0;
    long flo_updates = 0;
    long substates_closed = 0;
  };
  const Counters& counters() const { return counters_; }

 private:
  ExecutingFLO enter(const RelationalState& state);
  KLO choose_klo(const RelationalState& state, ExecutingFLO& exec);
  void note_reward(double r);
  void check_bound(double v) const;

  HrlOptions options_;
  QStore store_;
  Rng rng_;
  double epsilon_;
  bool learning_ = true;
  bool episode_over_ = false;
  AgentPhase phase_;
  std::optional<TerminationStatus> last_termination_;
  FloCounts flo_selections_{};
  Counters counters_;
  double reward_bound_ = 0;
};

// Fixed-priority rules over the relational state.
KLO scripted_act(const Observation& observation, const RelationalState& state);

class ScriptedAgent final : public Agent {
 public:
  KLO act(const Observation& observation, const RelationalState& state, double) override {
    return scripted_act(observation, state);
  }
  std::string_view label() const override { return "Scripted"; }
};

// Uniform over `legal`. Throws std::invalid_argument when it is empty.
KLO random_act(std::span<const KLO> legal, Rng& rng);

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  KLO act(const Observation&, const RelationalState&, double) override { return random_act(kAllKlos, rng_); }
  std::string_view label() const override { return "Random"; }

 private:
  Rng rng_;
};

}  // namespace mario_rl
