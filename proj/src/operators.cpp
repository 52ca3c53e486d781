#include <stdexcept>
#include <string>

#include "mario_rl/operators.hpp"

namespace mario_rl {

namespace {

constexpr std::array kTackleKlos = {KLO::Left, KLO::Right, KLO::Jump, KLO::JumpLeft, KLO::JumpRight, KLO::Fire, KLO::NoOp};
constexpr std::array kObjectKlos = {KLO::Left, KLO::Right, KLO::Jump, KLO::JumpLeft, KLO::JumpRight, KLO::NoOp};
constexpr std::array kForwardKlos = {KLO::Right, KLO::JumpRight, KLO::NoOp};

}  // namespace

std::string_view to_string(KLO k) {
  switch (k) {
    case KLO::NoOp: return "NoOp";
    case KLO::Left: return "Left";
    case KLO::Right: return "Right";
    case KLO::Jump: return "Jump";
    case KLO::JumpLeft: return "JumpLeft";
    case KLO::JumpRight: return "JumpRight";
    case KLO::Fire: return "Fire";
  }
  return "?";
}

KLO klo_from_string(std::string_view s) {
  for (KLO k : kAllKlos)
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown KLO '" + std::string(s) + "'");
}

Action to_action(KLO k) {
  switch (k) {
    case KLO::NoOp: return {Direction::None, false, false};
    case KLO::Left: return {Direction::Left, false, false};
    case KLO::Right: return {Direction::Right, false, false};
    case KLO::Jump: return {Direction::None, true, false};
    case KLO::JumpLeft: return {Direction::Left, true, false};
    case KLO::JumpRight: return {Direction::Right, true, false};
    case KLO::Fire: return {Direction::None, false, true};
  }
  return {};
}

std::string_view to_string(FLOKind k) {
  switch (k) {
    case FLOKind::TackleMonster: return "TackleMonster";
    case FLOKind::GrabCoin: return "GrabCoin";
    case FLOKind::HitQuestionBlock: return "HitQuestionBlock";
    case FLOKind::CrossPit: return "CrossPit";
    case FLOKind::Advance: return "Advance";
  }
  return "?";
}

FLOKind flo_kind_from_string(std::string_view s) {
  for (int i = 0; i < kFloKindCount; ++i)
    if (to_string(static_cast<FLOKind>(i)) == s) return static_cast<FLOKind>(i);
  throw std::invalid_argument("unknown FLO kind '" + std::string(s) + "'");
}

std::string_view to_string(TerminationStatus s) {
  switch (s.kind) {
    case TerminationStatus::Kind::Active: return "Active";
    case TerminationStatus::Kind::Success: return "Success";
    case TerminationStatus::Kind::Failure: break;
  }
  switch (s.reason) {
    case FailureReason::TargetLost: return "Failure(TargetLost)";
    case FailureReason::Timeout: return "Failure(Timeout)";
    case FailureReason::MarioDied: return "Failure(MarioDied)";
    case FailureReason::EpisodeEnded: return "Failure(EpisodeEnded)";
  }
  return "?";
}

std::uint8_t proposal_mask(std::span<const FLOInstance> proposals) {
  std::uint8_t mask = 0;
  for (const auto& f : proposals)
    if (f.kind != FLOKind::Advance) mask |= static_cast<std::uint8_t>(1u << static_cast<int>(f.kind));
  return mask;
}

std::vector<FLOInstance> propose_flos(const RelationalState& state) {
  std::vector<FLOInstance> out;
  auto propose = [&](FLOKind kind, const RelationalFact* f) {
    FLOInstance flo;
    flo.kind = kind;
    flo.proposed_at_tick = state.tick;
    if (f) {
      flo.target = f->id();
      flo.target_span = f->object.col_span;
    }
    out.push_back(flo);
  };

  // Facts are sorted by id, so each pass yields ascending target ids.
  for (const auto& f : state.facts)
    if (f.kind() == ObjectKind::Monster && f.isthreat) propose(FLOKind::TackleMonster, &f);
  for (const auto& f : state.facts)
    if (f.kind() == ObjectKind::CoinObj && f.isreachable) propose(FLOKind::GrabCoin, &f);
  for (const auto& f : state.facts)
    if (f.kind() == ObjectKind::QuestionBlockObj && f.isreachable) propose(FLOKind::HitQuestionBlock, &f);
  for (const auto& f : state.facts)
    if (f.kind() == ObjectKind::Pit && f.is_ahead) propose(FLOKind::CrossPit, &f);
  propose(FLOKind::Advance, nullptr);
  return out;
}

TerminationStatus flo_terminated(const FLOInstance& flo, const RelationalState& state, int ticks_in_substate,
                                 Outcome episode_outcome, const OperatorLimits& limits) {
  if (episode_outcome == Outcome::Died) return TerminationStatus::failure(FailureReason::MarioDied);
  if (episode_outcome != Outcome::Running) return TerminationStatus::failure(FailureReason::EpisodeEnded);

  if (flo.kind == FLOKind::Advance) {
    if (proposal_mask(propose_flos(state)) != 0 || ticks_in_substate >= limits.advance_commitment)
      return TerminationStatus::success();
  } else {
    const RelationalFact* target = flo.target ? state.find(*flo.target) : nullptr;
    const bool in_view =
        state.viewport_contains(flo.target_span.first) && state.viewport_contains(flo.target_span.last);
    switch (flo.kind) {
      case FLOKind::TackleMonster:
        // A monster no longer present has been dealt with.
        if (!target || !target->object.alive) return TerminationStatus::success();
        break;
      case FLOKind::GrabCoin:
      case FLOKind::HitQuestionBlock:
        if (!target) return in_view ? TerminationStatus::success() : TerminationStatus::failure(FailureReason::TargetLost);
        break;
      case FLOKind::CrossPit: {
        const int right_edge = target ? target->object.col_span.last : flo.target_span.last;
        if (state.mario_column > right_edge) return TerminationStatus::success();
        if (!target) return TerminationStatus::failure(FailureReason::TargetLost);
        break;
      }
      case FLOKind::Advance:
        break;
    }
  }

  if (ticks_in_substate >= limits.substate_timeout) return TerminationStatus::failure(FailureReason::Timeout);
  return TerminationStatus::active();
}

std::span<const KLO> legal_klos(FLOKind kind) {
  switch (kind) {
    case FLOKind::TackleMonster: return kTackleKlos;
    case FLOKind::GrabCoin:
    case FLOKind::HitQuestionBlock: return kObjectKlos;
    case FLOKind::CrossPit:
    case FLOKind::Advance: return kForwardKlos;
  }
  return kForwardKlos;
}

}  // namespace mario_rl
