#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mario_rl/env.hpp"
#include "mario_rl/perception.hpp"
#include "mario_rl/rng.hpp"

namespace mario_rl::oracle {

// A viewport of clustered random tiles over a mostly solid bottom row, with
// a few walkers (some dead) and fireballs.
inline Observation random_observation(Rng& rng) {
  Observation o;
  o.viewport.assign(kViewportRows * kViewportCols, TileKind::Empty);
  o.viewport_origin_column = uniform_int(rng, 0, 200);
  constexpr TileKind kinds[] = {TileKind::Brick,    TileKind::QuestionBlock, TileKind::UsedBlock,
                                TileKind::Coin,     TileKind::PipeBody,      TileKind::PipeTop,
                                TileKind::Platform, TileKind::FinishPole,    TileKind::Ground};
  const double density = uniform01(rng) * 0.5;
  for (int r = 0; r < kViewportRows - 1; ++r) {
    TileKind run = kinds[uniform_index(rng, std::size(kinds))];
    for (int c = 0; c < kViewportCols; ++c) {
      if (bernoulli(rng, 0.3)) run = kinds[uniform_index(rng, std::size(kinds))];
      if (bernoulli(rng, density)) o.viewport[r * kViewportCols + c] = run;
    }
  }
  for (int c = 0; c < kViewportCols; ++c)
    o.viewport[(kViewportRows - 1) * kViewportCols + c] =
        bernoulli(rng, 0.8) ? TileKind::Ground : kinds[uniform_index(rng, std::size(kinds))];
  const int n = uniform_int(rng, 0, 4);
  for (int i = 0; i < n; ++i) {
    EntityState e;
    e.id = i;
    e.kind = bernoulli(rng, 0.8) ? EntityKind::Walker : EntityKind::Fireball;
    e.x = o.viewport_origin_column + uniform01(rng) * (kViewportCols - 1);
    e.y = uniform01(rng) * 14;
    e.alive = bernoulli(rng, 0.85);
    o.entities.push_back(e);
  }
  o.mario.x = o.viewport_origin_column + uniform01(rng) * (kViewportCols - 1);
  o.mario.y = uniform01(rng) * 14;
  o.mario.on_ground = bernoulli(rng, 0.5);
  o.tick = uniform_int(rng, 0, 1000);
  return o;
}

inline bool needs_owner(TileKind t) {
  return t != TileKind::Empty && t != TileKind::Ground && t != TileKind::UsedBlock;
}

inline ObjectKind owner_kind(TileKind t) {
  switch (t) {
    case TileKind::Coin: return ObjectKind::CoinObj;
    case TileKind::QuestionBlock: return ObjectKind::QuestionBlockObj;
    case TileKind::PipeBody:
    case TileKind::PipeTop: return ObjectKind::Pipe;
    case TileKind::FinishPole: return ObjectKind::Finish;
    default: return ObjectKind::PlatformObj;
  }
}

// Per-tile scan: every tile that needs an owner has exactly one, of the
// right kind; no object claims a tile that needs none; tiles joined the way
// the grouping rule says (horizontal runs, 4-connected pipes, vertical
// poles) share an owner. Returns the number of violated tiles.
inline int coverage_mismatches(const Observation& o, const std::vector<GameObject>& objects) {
  std::map<std::pair<int, int>, std::vector<std::size_t>> owners;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (const auto& cell : objects[i].tiles) owners[{cell.row, cell.col}].push_back(i);

  auto owner_of = [&](int r, int vc) -> long {
    const auto it = owners.find({r, o.viewport_origin_column + vc});
    return it == owners.end() || it->second.size() != 1 ? -1 : static_cast<long>(it->second[0]);
  };

  int mismatches = 0;
  for (const auto& [cell, list] : owners) {
    const int vc = cell.second - o.viewport_origin_column;
    if (cell.first < 0 || cell.first >= kViewportRows || vc < 0 || vc >= kViewportCols ||
        !needs_owner(o.tile(cell.first, vc)))
      ++mismatches;
  }
  for (int r = 0; r < kViewportRows; ++r) {
    for (int c = 0; c < kViewportCols; ++c) {
      const TileKind t = o.tile(r, c);
      if (!needs_owner(t)) continue;
      const long owner = owner_of(r, c);
      if (owner < 0 || objects[owner].kind != owner_kind(t)) {
        ++mismatches;
        continue;
      }
      auto same_group = [&](int r2, int c2) {
        if (r2 < 0 || r2 >= kViewportRows || c2 < 0 || c2 >= kViewportCols) return true;
        const TileKind u = o.tile(r2, c2);
        bool joined = false;
        if (owner_kind(t) == ObjectKind::Pipe) joined = needs_owner(u) && owner_kind(u) == ObjectKind::Pipe;
        else if (t == TileKind::FinishPole) joined = u == t && c2 == c;
        else if (t != TileKind::QuestionBlock) joined = u == t && r2 == r;
        return !joined || owner_of(r2, c2) == owner;
      };
      if (!same_group(r, c + 1) || !same_group(r + 1, c)) ++mismatches;
    }
  }
  return mismatches;
}

// Deterministic chain: states 0..2, actions Left (0) and Right (1). Right
// from the last state pays +1 and ends the episode; every other move pays 0.
struct Chain {
  static constexpr int kStates = 3;
  static constexpr double kGamma = 0.9;

  struct Step {
    int next;  // -1 when terminal
    double reward;
  };
  static Step step(int s, int a) {
    if (a == 1) return s == kStates - 1 ? Step{-1, 1.0} : Step{s + 1, 0.0};
    return {std::max(0, s - 1), 0.0};
  }
};

using ChainQ = std::array<std::array<double, 2>, Chain::kStates>;

inline ChainQ value_iteration(double tolerance = 1e-13) {
  ChainQ q{};
  for (double delta = 1; delta > tolerance;) {
    delta = 0;
    ChainQ next{};
    for (int s = 0; s < Chain::kStates; ++s)
      for (int a = 0; a < 2; ++a) {
        const auto st = Chain::step(s, a);
        const double v = st.next < 0 ? 0.0 : std::max(q[st.next][0], q[st.next][1]);
        next[s][a] = st.reward + Chain::kGamma * v;
        delta = std::max(delta, std::abs(next[s][a] - q[s][a]));
      }
    q = next;
  }
  return q;
}

}  // namespace mario_rl::oracle
