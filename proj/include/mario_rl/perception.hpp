#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mario_rl/env.hpp"

namespace mario_rl {

enum class ObjectKind : std::uint8_t { Monster, CoinObj, QuestionBlockObj, Pipe, Pit, PlatformObj, Finish };
inline constexpr int kObjectKindCount = 7;
std::string_view to_string(ObjectKind k);

// Object ids are identity keys, stable across ticks while the object stays
// put: kind in the high bits, then leftmost column, then row. Monsters use
// their entity id instead of a position so they keep one id as they walk.
using ObjectId = std::int64_t;
ObjectId make_object_id(ObjectKind kind, int leftmost_column, int row);
ObjectId make_monster_id(int entity_id);
ObjectKind object_id_kind(ObjectId id);

struct ColumnSpan {
  int first = 0;
  int last = 0;  // inclusive

  bool contains(int col) const { return col >= first && col <= last; }
  int width() const { return last - first + 1; }
  bool operator==(const ColumnSpan&) const = default;
};

struct Cell {
  int row = 0;
  int col = 0;  // absolute level column
  bool operator==(const Cell&) const = default;
};

struct GameObject {
  ObjectId id = 0;
  ObjectKind kind = ObjectKind::Monster;
  ColumnSpan col_span;
  int anchor_row = 0;
  std::optional<int> entity_ref;
  bool alive = true;  // false only for a walker corpse
  // Viewport tiles this object accounts for. Pits and monsters claim none.
  std::vector<Cell> tiles;

  bool operator==(const GameObject&) const = default;
};

enum class DistanceBucket : std::uint8_t { Adjacent, Near, Mid, Far, OutOfRange };
inline constexpr int kDistanceBucketCount = 5;
std::string_view to_string(DistanceBucket b);
DistanceBucket distance_bucket_from_string(std::string_view s);

DistanceBucket bucket_distance(int dx);

struct PerceptionThresholds {
  int threat_dx = 4;
  int threat_dy = 3;
  int reach_dx = 3;
  int reach_dy_min = -4;
  int reach_dy_max = 1;
  int ahead_dx = 4;
};

struct RelationalFact {
  GameObject object;
  int dx = 0;  // nearest span edge minus Mario's column; 0 when Mario is inside the span
  int dy = 0;  // anchor row minus Mario's row; negative is above
  DistanceBucket bucket = DistanceBucket::Adjacent;
  Facing direction = Facing::Right;
  bool isthreat = false;
  bool isreachable = false;
  bool is_ahead = false;

  ObjectId id() const { return object.id; }
  ObjectKind kind() const { return object.kind; }
  bool operator==(const RelationalFact&) const = default;
};

struct RelationalState {
  std::vector<RelationalFact> facts;  // sorted by object id, one per object
  bool mario_on_ground = false;
  bool mario_fire_ready = false;
  int tick = 0;
  int mario_column = 0;
  int mario_row = 0;
  int viewport_origin_column = 0;

  const RelationalFact* find(ObjectId id) const;
  bool viewport_contains(int col) const {
    return col >= viewport_origin_column && col < viewport_origin_column + kViewportCols;
  }
  bool operator==(const RelationalState&) const = default;
};

std::vector<GameObject> extract_objects(const Observation& observation);

RelationalState elaborate(const std::vector<GameObject>& objects, const MarioState& mario, int tick,
                          int viewport_origin_column, const PerceptionThresholds& thresholds = {});

// extract_objects followed by elaborate.
RelationalState perceive(const Observation& observation, const PerceptionThresholds& thresholds = {});

// One line per fact, sorted by id:
// <kind> id=<id> dx=<dx> dy=<dy> bucket=<bucket> dir=<dir> attrs=<...>
std::string dump_relational_state(const RelationalState& state);

}  // namespace mario_rl
