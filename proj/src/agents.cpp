#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mario_rl/agents.hpp"

namespace mario_rl {

HrlAgent::HrlAgent(HrlOptions options)
    : options_(options), rng_(options.seed), epsilon_(options.params.epsilon0) {
  options_.params.validate();
}

void HrlAgent::begin_episode() {
  episode_over_ = false;
  phase_ = SelectingFLO{};
  last_termination_.reset();
  flo_selections_ = {};
}

void HrlAgent::note_reward(double r) { reward_bound_ = std::max(reward_bound_, std::abs(r)); }

void HrlAgent::check_bound(double v) const {
  const double bound = reward_bound_ / (1.0 - options_.params.gamma);
  const bool ok = std::abs(v) <= bound * (1 + 1e-12) + 1e-9;
  assert(ok);
  if (options_.check_bounds && !ok) throw std::logic_error("Q value exceeds Rmax / (1 - gamma)");
}

ExecutingFLO HrlAgent::enter(const RelationalState& state) {
  const auto proposals = propose_flos(state);
  const auto mask = proposal_mask(proposals);
  std::vector<double> values;
  values.reserve(proposals.size());
  for (const auto& flo : proposals) values.push_back(store_.value(make_flo_key(state, flo, mask)));
  const auto& chosen = proposals[select(values, epsilon_, rng_)];
  ++flo_selections_[static_cast<int>(chosen.kind)];

  ExecutingFLO exec;
  exec.flo = chosen;
  exec.flo_key = make_flo_key(state, chosen, mask);
  return exec;
}

KLO HrlAgent::choose_klo(const RelationalState& state, ExecutingFLO& exec) {
  const KLOKey key = make_klo_key(state, exec.flo);
  const auto legal = legal_klos(exec.flo.kind);
  std::array<double, kKloCount> values{};
  for (std::size_t i = 0; i < legal.size(); ++i) values[i] = store_.value(KLOEntry{key, legal[i]});
  const KLO klo = legal[select(std::span(values.data(), legal.size()), epsilon_, rng_)];
  exec.last_klo_key = KLOEntry{key, klo};
  ++exec.ticks_in_substate;
  ++counters_.actions;
  return klo;
}

KLO HrlAgent::act(const Observation&, const RelationalState& state, double reward_since_last) {
  return act(state, reward_since_last);
}

KLO HrlAgent::act(const RelationalState& state, double reward_since_last) {
  if (episode_over_) throw std::logic_error("HrlAgent::act called after the episode ended");
  const auto& p = options_.params;
  last_termination_.reset();

  if (auto* exec = std::get_if<ExecutingFLO>(&phase_)) {
    note_reward(reward_since_last);
    exec->accumulated_R += exec->discount * reward_since_last;
    exec->discount *= p.gamma;

    const auto status =
        flo_terminated(exec->flo, state, exec->ticks_in_substate, Outcome::Running, options_.limits);
    last_termination_ = status;

    if (status.is_active()) {
      const auto previous = exec->last_klo_key;
      const KLO klo = choose_klo(state, *exec);
      if (learning_ && previous) {
        check_bound(sarsa_update(store_, *previous, reward_since_last, exec->last_klo_key, p.alpha, p.gamma));
        ++counters_.klo_updates;
      }
      return klo;
    }

    // The substate closes; the next FLO and its first KLO are chosen in this
    // same tick, and the closing KLO bootstraps from that first KLO.
    const ExecutingFLO closed = *exec;
    ExecutingFLO next = enter(state);
    const KLO klo = choose_klo(state, next);
    if (learning_) {
      if (closed.last_klo_key) {
        check_bound(sarsa_update(store_, *closed.last_klo_key, reward_since_last, next.last_klo_key, p.alpha, p.gamma));
        ++counters_.klo_updates;
      }
      check_bound(smdp_flo_update(store_, closed.flo_key, closed.accumulated_R, closed.ticks_in_substate,
                                  next.flo_key, p.alpha, p.gamma));
      ++counters_.flo_updates;
    }
    ++counters_.substates_closed;
    phase_ = std::move(next);
    return klo;
  }
  phase_ = enter(state);
  return choose_klo(state, std::get<ExecutingFLO>(phase_));
}

void HrlAgent::end_episode(double terminal_reward) {
  const auto& p = options_.params;
  if (auto* exec = std::get_if<ExecutingFLO>(&phase_)) {
    note_reward(terminal_reward);
    exec->accumulated_R += exec->discount * terminal_reward;
    if (learning_) {
      if (exec->last_klo_key) {
        check_bound(sarsa_update(store_, *exec->last_klo_key, terminal_reward, std::nullopt, p.alpha, p.gamma));
        ++counters_.klo_updates;
      }
      check_bound(smdp_flo_update(store_, exec->flo_key, exec->accumulated_R, std::max(1, exec->ticks_in_substate),
                                  std::nullopt, p.alpha, p.gamma));
      ++counters_.flo_updates;
    }
    ++counters_.substates_closed;
  }
  phase_ = SelectingFLO{};
  episode_over_ = true;
  if (learning_) epsilon_ = std::max(p.epsilon_min, epsilon_ * p.epsilon_decay);
}

std::string_view HrlAgent::label() const {
  if (const auto* exec = std::get_if<ExecutingFLO>(&phase_)) return to_string(exec->flo.kind);
  return "-";
}

FLOInstance HrlAgent::greedy_flo(const RelationalState& state) const {
  const auto proposals = propose_flos(state);
  const auto mask = proposal_mask(proposals);
  std::vector<double> values;
  values.reserve(proposals.size());
  for (const auto& flo : proposals) values.push_back(store_.value(make_flo_key(state, flo, mask)));
  return proposals[argmax_first(values)];
}

KLO scripted_act(const Observation&, const RelationalState& state) {
  const auto& facts = state.facts;
  auto any = [&](auto pred) { return std::any_of(facts.begin(), facts.end(), pred); };

  if (any([](const RelationalFact& f) { return f.kind() == ObjectKind::Pit && f.is_ahead && f.dx <= 2; }))
    return KLO::JumpRight;

  auto monster_ahead = [](const RelationalFact& f) {
    return f.kind() == ObjectKind::Monster && f.isthreat && f.dx >= 0;
  };
  if (any([&](const RelationalFact& f) { return monster_ahead(f) && f.dx <= 2; })) return KLO::JumpRight;
  if (state.mario_fire_ready && any(monster_ahead)) return KLO::Fire;

  if (any([](const RelationalFact& f) {
        const bool pipe = f.kind() == ObjectKind::Pipe && f.dx > 0 && f.dx <= 2;
        const bool wall = f.kind() == ObjectKind::PlatformObj && f.dx > 0 && f.dx <= 2 && f.dy >= -1 && f.dy <= 0;
        return pipe || wall;
      }))
    return KLO::JumpRight;

  if (any([](const RelationalFact& f) {
        const bool collectible = f.kind() == ObjectKind::CoinObj || f.kind() == ObjectKind::QuestionBlockObj;
        return collectible && f.isreachable && f.dx >= 0 && f.dx <= 1 && f.dy < 0;
      }))
    return KLO::JumpRight;

  return KLO::Right;
}

KLO random_act(std::span<const KLO> legal, Rng& rng) {
  if (legal.empty()) throw std::invalid_argument("random_act: empty legal set");
  return legal[uniform_index(rng, legal.size())];
}

}  // namespace mario_rl
