#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mario_rl/env.hpp"
#include "mario_rl/perception.hpp"

namespace mario_rl::testing {

// Flat ground, finish pole four columns from the right edge.
inline Level flat_level(int width = 40) {
  Level level;
  level.width = width;
  level.tiles.assign(static_cast<std::size_t>(kLevelRows) * width, TileKind::Empty);
  for (int c = 0; c < width; ++c) level.at(kGroundRow, c) = TileKind::Ground;
  level.finish_column = width - 4;
  for (int r = 5; r < kGroundRow; ++r) level.at(r, level.finish_column) = TileKind::FinishPole;
  return level;
}

inline Level with_pit(Level level, int first, int last) {
  for (int c = first; c <= last; ++c) level.at(kGroundRow, c) = TileKind::Empty;
  return level;
}

inline Level with_wall(Level level, int col, int height) {
  for (int r = kGroundRow - height; r < kGroundRow; ++r) level.at(r, col) = TileKind::Brick;
  return level;
}

inline Level with_walker(Level level, int col, Facing facing = Facing::Left) {
  level.monster_spawns.push_back({EntityKind::Walker, col, kGroundRow - 1, facing});
  return level;
}

inline Action press(Direction d, bool jump = false, bool fire = false) { return {d, jump, fire}; }

// Cells covered by a half-open box, with the same boundary tolerance the
// simulation uses.
inline int cell_lo(double lo) { return static_cast<int>(std::floor(lo + 1e-9)); }
inline int cell_hi(double lo, double size) { return static_cast<int>(std::floor(lo + size - 1e-9)); }

// A fact about one static object (or a monster when kind is Monster) seen
// from Mario at (mario_col, row 14).
inline RelationalFact fact_at(ObjectKind kind, int first, int last, int row, int mario_col = 10, bool alive = true) {
  GameObject g;
  g.kind = kind;
  g.id = kind == ObjectKind::Monster ? make_monster_id(first) : make_object_id(kind, first, row);
  g.col_span = {first, last};
  g.anchor_row = row;
  g.alive = alive;
  MarioState m;
  m.x = mario_col;
  m.y = kGroundRow - 1;
  return elaborate({g}, m, 0, 0).facts.at(0);
}

inline RelationalState relational_state(std::vector<RelationalFact> facts, int mario_col = 10, int tick = 0) {
  RelationalState s;
  s.facts = std::move(facts);
  std::sort(s.facts.begin(), s.facts.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
  s.mario_column = mario_col;
  s.mario_row = kGroundRow - 1;
  s.viewport_origin_column = std::max(0, mario_col - kViewportCols / 2);
  s.mario_on_ground = true;
  s.mario_fire_ready = true;
  s.tick = tick;
  return s;
}

}  // namespace mario_rl::testing
