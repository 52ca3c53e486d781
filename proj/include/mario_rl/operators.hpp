#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mario_rl/env.hpp"
#include "mario_rl/perception.hpp"

namespace mario_rl {

// Keystroke-level operators: one controller input each.
enum class KLO : std::uint8_t { NoOp, Left, Right, Jump, JumpLeft, JumpRight, Fire };
inline constexpr int kKloCount = 7;
inline constexpr std::array<KLO, kKloCount> kAllKlos = {KLO::NoOp,     KLO::Left,      KLO::Right, KLO::Jump,
                                                        KLO::JumpLeft, KLO::JumpRight, KLO::Fire};

std::string_view to_string(KLO k);
KLO klo_from_string(std::string_view s);
Action to_action(KLO k);

// Functional-level operators, in proposal order.
enum class FLOKind : std::uint8_t { TackleMonster, GrabCoin, HitQuestionBlock, CrossPit, Advance };
inline constexpr int kFloKindCount = 5;

std::string_view to_string(FLOKind k);
FLOKind flo_kind_from_string(std::string_view s);

struct FLOInstance {
  FLOKind kind = FLOKind::Advance;
  std::optional<ObjectId> target;  // absent only for Advance
  int proposed_at_tick = 0;
  // Where the target was when proposed; used to tell a consumed target from
  // one that scrolled out of view.
  ColumnSpan target_span;

  bool operator==(const FLOInstance&) const = default;
};

enum class FailureReason : std::uint8_t { TargetLost, Timeout, MarioDied, EpisodeEnded };

struct TerminationStatus {
  enum class Kind : std::uint8_t { Active, Success, Failure } kind = Kind::Active;
  FailureReason reason = FailureReason::TargetLost;  // meaningful for Failure only

  static TerminationStatus active() { return {}; }
  static TerminationStatus success() { return {Kind::Success, FailureReason::TargetLost}; }
  static TerminationStatus failure(FailureReason r) { return {Kind::Failure, r}; }

  bool is_active() const { return kind == Kind::Active; }
  bool operator==(const TerminationStatus&) const = default;
};

std::string_view to_string(TerminationStatus s);

struct OperatorLimits {
  int substate_timeout = 50;
  int advance_commitment = 20;
};

// Bit per proposed FLOKind, Advance excluded.
std::uint8_t proposal_mask(std::span<const FLOInstance> proposals);
std::vector<FLOInstance> propose_flos(const RelationalState& state);

// `episode_outcome` is Running while the episode continues.
TerminationStatus flo_terminated(const FLOInstance& flo, const RelationalState& state, int ticks_in_substate,
                                 Outcome episode_outcome, const OperatorLimits& limits = {});

std::span<const KLO> legal_klos(FLOKind kind);

}  // namespace mario_rl
