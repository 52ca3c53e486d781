#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mario_rl/operators.hpp"
#include "oracles.hpp"

using namespace mario_rl;

namespace {

RelationalFact make_fact(ObjectKind kind, int first, int last, int row, int mario_col = 10, int mario_row = 14,
                         bool alive = true) {
  GameObject g;
  g.kind = kind;
  g.id = kind == ObjectKind::Monster ? make_monster_id(first) : make_object_id(kind, first, row);
  g.col_span = {first, last};
  g.anchor_row = row;
  g.alive = alive;
  MarioState m;
  m.x = mario_col;
  m.y = mario_row;
  return elaborate({g}, m, 0, 0).facts.at(0);
}

RelationalState state_of(std::vector<RelationalFact> facts, int mario_col = 10) {
  RelationalState s;
  s.facts = std::move(facts);
  std::sort(s.facts.begin(), s.facts.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
  s.mario_column = mario_col;
  s.mario_row = 14;
  s.viewport_origin_column = std::max(0, mario_col - 11);
  s.mario_on_ground = true;
  return s;
}

FLOInstance proposal(const RelationalState& s, FLOKind kind) {
  for (const auto& f : propose_flos(s))
    if (f.kind == kind) return f;
  ADD_FAILURE() << "not proposed: " << to_string(kind);
  return {};
}

}  // namespace

TEST(Klo, ActionMapIsTotalAndInjective) {
  std::set<std::tuple<int, bool, bool>> seen;
  for (KLO k : kAllKlos) {
    const Action a = to_action(k);
    seen.insert({static_cast<int>(a.direction), a.jump, a.fire});
    EXPECT_EQ(klo_from_string(to_string(k)), k);
  }
  EXPECT_EQ(seen.size(), kAllKlos.size());
  EXPECT_EQ(to_action(KLO::JumpRight), (Action{Direction::Right, true, false}));
  EXPECT_EQ(to_action(KLO::Fire), (Action{Direction::None, false, true}));
  EXPECT_THROW(klo_from_string("Duck"), std::invalid_argument);
  for (int i = 0; i < kFloKindCount; ++i)
    EXPECT_EQ(flo_kind_from_string(to_string(static_cast<FLOKind>(i))), static_cast<FLOKind>(i));
  EXPECT_THROW(flo_kind_from_string("Swim"), std::invalid_argument);
}

TEST(ProposeFlos, ThreateningMonster) {
  const auto s = state_of({make_fact(ObjectKind::Monster, 12, 12, 14)});
  const auto p = propose_flos(s);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].kind, FLOKind::TackleMonster);
  EXPECT_EQ(p[0].target, make_monster_id(12));
  EXPECT_EQ(p[1].kind, FLOKind::Advance);
  EXPECT_FALSE(p[1].target.has_value());
}

TEST(ProposeFlos, EmptyStateProposesAdvanceOnly) {
  const auto p = propose_flos(state_of({}));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].kind, FLOKind::Advance);
  EXPECT_EQ(proposal_mask(p), 0);
}

TEST(ProposeFlos, CoinAndMonsterAreBothProposed) {
  const auto s = state_of({make_fact(ObjectKind::Monster, 13, 13, 14), make_fact(ObjectKind::CoinObj, 11, 12, 12)});
  const auto p = propose_flos(s);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].kind, FLOKind::TackleMonster);
  EXPECT_EQ(p[1].kind, FLOKind::GrabCoin);
  EXPECT_EQ(p[1].target_span, (ColumnSpan{11, 12}));
  EXPECT_EQ(p[2].kind, FLOKind::Advance);
  EXPECT_EQ(proposal_mask(p), 0b0011);
}

TEST(ProposeFlos, SoundCompleteAndOrdered) {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const auto s = perceive(oracle::random_observation(rng));
    const auto p = propose_flos(s);
    ASSERT_EQ(std::count_if(p.begin(), p.end(), [](const auto& f) { return f.kind == FLOKind::Advance; }), 1);
    ASSERT_EQ(p.back().kind, FLOKind::Advance);

    // Brute force over facts.
    std::vector<std::pair<int, ObjectId>> expected;
    for (const auto& f : s.facts) {
      if (f.kind() == ObjectKind::Monster && f.isthreat) expected.push_back({0, f.id()});
      if (f.kind() == ObjectKind::CoinObj && f.isreachable) expected.push_back({1, f.id()});
      if (f.kind() == ObjectKind::QuestionBlockObj && f.isreachable) expected.push_back({2, f.id()});
      if (f.kind() == ObjectKind::Pit && f.is_ahead) expected.push_back({3, f.id()});
    }
    std::sort(expected.begin(), expected.end());
    std::vector<std::pair<int, ObjectId>> got;
    for (const auto& f : p)
      if (f.kind != FLOKind::Advance) got.push_back({static_cast<int>(f.kind), *f.target});
    ASSERT_EQ(got, expected);

    std::uint8_t mask = 0;
    for (const auto& e : expected) mask |= static_cast<std::uint8_t>(1 << e.first);
    ASSERT_EQ(proposal_mask(p), mask);
  }
}

TEST(FloTerminated, TackleSucceedsWhenMonsterGoneOrDead) {
  const auto s = state_of({make_fact(ObjectKind::Monster, 12, 12, 14)});
  const auto flo = proposal(s, FLOKind::TackleMonster);
  EXPECT_EQ(flo_terminated(flo, s, 3, Outcome::Running), TerminationStatus::active());
  EXPECT_EQ(flo_terminated(flo, state_of({}), 3, Outcome::Running), TerminationStatus::success());
  const auto dead = state_of({make_fact(ObjectKind::Monster, 12, 12, 14, 10, 14, false)});
  EXPECT_EQ(flo_terminated(flo, dead, 3, Outcome::Running), TerminationStatus::success());
}

TEST(FloTerminated, TimeoutAtFiftyTicks) {
  const auto s = state_of({make_fact(ObjectKind::Monster, 12, 12, 14)});
  const auto flo = proposal(s, FLOKind::TackleMonster);
  EXPECT_TRUE(flo_terminated(flo, s, 49, Outcome::Running).is_active());
  EXPECT_EQ(flo_terminated(flo, s, 50, Outcome::Running), TerminationStatus::failure(FailureReason::Timeout));
  OperatorLimits tight;
  tight.substate_timeout = 5;
  EXPECT_EQ(flo_terminated(flo, s, 5, Outcome::Running, tight), TerminationStatus::failure(FailureReason::Timeout));
}

TEST(FloTerminated, CrossPitSucceedsPastRightEdge) {
  const auto before = state_of({make_fact(ObjectKind::Pit, 8, 9, 15, 6)}, 6);
  const auto flo = proposal(before, FLOKind::CrossPit);
  EXPECT_TRUE(flo_terminated(flo, before, 1, Outcome::Running).is_active());
  const auto over = state_of({make_fact(ObjectKind::Pit, 8, 9, 15, 9)}, 9);
  EXPECT_TRUE(flo_terminated(flo, over, 4, Outcome::Running).is_active());
  // Mario at x = 10.2 occupies column 10.
  MarioState m;
  m.x = 10.2 - 0.4;
  m.y = 14;
  ASSERT_EQ(mario_column(m), 10);
  const auto past = state_of({make_fact(ObjectKind::Pit, 8, 9, 15, 10)}, 10);
  EXPECT_EQ(flo_terminated(flo, past, 8, Outcome::Running), TerminationStatus::success());
}

TEST(FloTerminated, CollectibleConsumedOrLost) {
  const auto s = state_of({make_fact(ObjectKind::CoinObj, 12, 12, 12)});
  const auto flo = proposal(s, FLOKind::GrabCoin);
  EXPECT_TRUE(flo_terminated(flo, s, 2, Outcome::Running).is_active());
  EXPECT_EQ(flo_terminated(flo, state_of({}), 2, Outcome::Running), TerminationStatus::success());
  // Scrolled out of view without being collected.
  auto scrolled = state_of({});
  scrolled.viewport_origin_column = 13;
  EXPECT_EQ(flo_terminated(flo, scrolled, 2, Outcome::Running), TerminationStatus::failure(FailureReason::TargetLost));
}

TEST(FloTerminated, AdvanceYieldsToOtherProposalsOrCommitment) {
  const auto empty = state_of({});
  const auto flo = proposal(empty, FLOKind::Advance);
  EXPECT_TRUE(flo_terminated(flo, empty, 19, Outcome::Running).is_active());
  EXPECT_EQ(flo_terminated(flo, empty, 20, Outcome::Running), TerminationStatus::success());
  const auto coin = state_of({make_fact(ObjectKind::CoinObj, 12, 12, 12)});
  EXPECT_EQ(flo_terminated(flo, coin, 1, Outcome::Running), TerminationStatus::success());
}

TEST(FloTerminated, EpisodeOutcomeWins) {
  const auto s = state_of({make_fact(ObjectKind::Monster, 12, 12, 14)});
  const auto flo = proposal(s, FLOKind::TackleMonster);
  EXPECT_EQ(flo_terminated(flo, s, 1, Outcome::Died), TerminationStatus::failure(FailureReason::MarioDied));
  EXPECT_EQ(flo_terminated(flo, s, 1, Outcome::Finished), TerminationStatus::failure(FailureReason::EpisodeEnded));
  EXPECT_EQ(flo_terminated(flo, s, 1, Outcome::TimedOut), TerminationStatus::failure(FailureReason::EpisodeEnded));
}

TEST(FloTerminated, NeverActiveOnceTargetAbsent) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto s = perceive(oracle::random_observation(rng));
    for (const auto& flo : propose_flos(s)) {
      if (flo.kind == FLOKind::Advance) continue;
      auto without = s;
      std::erase_if(without.facts, [&](const RelationalFact& f) { return f.id() == *flo.target; });
      EXPECT_FALSE(flo_terminated(flo, without, 1, Outcome::Running).is_active());
      EXPECT_EQ(flo_terminated(flo, s, 7, Outcome::Running), flo_terminated(flo, s, 7, Outcome::Running));
    }
  }
}

TEST(LegalKlos, Tables) {
  const auto cross = legal_klos(FLOKind::CrossPit);
  EXPECT_EQ(std::vector<KLO>(cross.begin(), cross.end()), (std::vector<KLO>{KLO::Right, KLO::JumpRight, KLO::NoOp}));
  const auto advance = legal_klos(FLOKind::Advance);
  EXPECT_EQ(std::vector<KLO>(advance.begin(), advance.end()),
            (std::vector<KLO>{KLO::Right, KLO::JumpRight, KLO::NoOp}));
  const auto tackle = legal_klos(FLOKind::TackleMonster);
  EXPECT_NE(std::find(tackle.begin(), tackle.end(), KLO::Fire), tackle.end());
  EXPECT_EQ(tackle.size(), 7u);
  for (FLOKind k : {FLOKind::GrabCoin, FLOKind::HitQuestionBlock}) {
    const auto l = legal_klos(k);
    EXPECT_EQ(l.size(), 6u);
    EXPECT_EQ(std::find(l.begin(), l.end(), KLO::Fire), l.end());
  }
  for (int i = 0; i < kFloKindCount; ++i) EXPECT_FALSE(legal_klos(static_cast<FLOKind>(i)).empty());
}

TEST(TerminationStatus, Names) {
  EXPECT_EQ(to_string(TerminationStatus::active()), "Active");
  EXPECT_EQ(to_string(TerminationStatus::success()), "Success");
  EXPECT_EQ(to_string(TerminationStatus::failure(FailureReason::Timeout)), "Failure(Timeout)");
}
