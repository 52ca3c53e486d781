#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "mario_rl/perception.hpp"

namespace mario_rl {

namespace {

constexpr int kKindShift = 40;
constexpr int kColumnShift = 8;

bool is_pipe(TileKind t) { return t == TileKind::PipeBody || t == TileKind::PipeTop; }

class ViewportScan {
 public:
  explicit ViewportScan(const Observation& o) : o_(o) {}

  TileKind at(int row, int vc) const { return o_.tile(row, vc); }
  int abs_col(int vc) const { return o_.viewport_origin_column + vc; }

  GameObject tile_object(ObjectKind kind, int seed_row, int seed_vc) const {
    GameObject obj;
    obj.kind = kind;
    obj.id = make_object_id(kind, abs_col(seed_vc), seed_row);
    obj.anchor_row = seed_row;
    obj.col_span = {abs_col(seed_vc), abs_col(seed_vc)};
    return obj;
  }

  void claim(GameObject& obj, int row, int vc) const {
    const int col = abs_col(vc);
    obj.tiles.push_back({row, col});
    obj.col_span.first = std::min(obj.col_span.first, col);
    obj.col_span.last = std::max(obj.col_span.last, col);
    obj.anchor_row = std::min(obj.anchor_row, row);
  }

  // Maximal horizontal runs of one tile kind.
  void runs(TileKind tile, ObjectKind kind, std::vector<GameObject>& out) const {
    for (int r = 0; r < kViewportRows; ++r) {
      for (int c = 0; c < kViewportCols;) {
        if (at(r, c) != tile) {
          ++c;
          continue;
        }
        GameObject obj = tile_object(kind, r, c);
        while (c < kViewportCols && at(r, c) == tile) claim(obj, r, c++);
        out.push_back(std::move(obj));
      }
    }
  }

  void singles(TileKind tile, ObjectKind kind, std::vector<GameObject>& out) const {
    for (int c = 0; c < kViewportCols; ++c)
      for (int r = 0; r < kViewportRows; ++r)
        if (at(r, c) == tile) {
          GameObject obj = tile_object(kind, r, c);
          claim(obj, r, c);
          out.push_back(std::move(obj));
        }
  }

  // 4-connected groups of pipe tiles, seeded in column-major order.
  void pipes(std::vector<GameObject>& out) const {
    std::array<bool, kViewportRows * kViewportCols> seen{};
    std::vector<std::pair<int, int>> stack;
    for (int c = 0; c < kViewportCols; ++c) {
      for (int r = 0; r < kViewportRows; ++r) {
        if (!is_pipe(at(r, c)) || seen[r * kViewportCols + c]) continue;
        GameObject obj = tile_object(ObjectKind::Pipe, r, c);
        stack.assign(1, {r, c});
        seen[r * kViewportCols + c] = true;
        while (!stack.empty()) {
          const auto [cr, cc] = stack.back();
          stack.pop_back();
          claim(obj, cr, cc);
          constexpr int dr[] = {-1, 1, 0, 0};
          constexpr int dc[] = {0, 0, -1, 1};
          for (int k = 0; k < 4; ++k) {
            const int nr = cr + dr[k], nc = cc + dc[k];
            if (nr < 0 || nr >= kViewportRows || nc < 0 || nc >= kViewportCols) continue;
            if (seen[nr * kViewportCols + nc] || !is_pipe(at(nr, nc))) continue;
            seen[nr * kViewportCols + nc] = true;
            stack.push_back({nr, nc});
          }
        }
        std::sort(obj.tiles.begin(), obj.tiles.end(),
                  [](const Cell& a, const Cell& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
        out.push_back(std::move(obj));
      }
    }
  }

  // Maximal vertical runs of FinishPole tiles.
  void finish(std::vector<GameObject>& out) const {
    for (int c = 0; c < kViewportCols; ++c) {
      for (int r = 0; r < kViewportRows;) {
        if (at(r, c) != TileKind::FinishPole) {
          ++r;
          continue;
        }
        GameObject obj = tile_object(ObjectKind::Finish, r, c);
        while (r < kViewportRows && at(r, c) == TileKind::FinishPole) claim(obj, r++, c);
        out.push_back(std::move(obj));
      }
    }
  }

  // Maximal runs of bottom-row columns without Ground.
  void pits(std::vector<GameObject>& out) const {
    for (int c = 0; c < kViewportCols;) {
      if (at(kGroundRow, c) == TileKind::Ground) {
        ++c;
        continue;
      }
      GameObject obj = tile_object(ObjectKind::Pit, kGroundRow, c);
      while (c < kViewportCols && at(kGroundRow, c) != TileKind::Ground) obj.col_span.last = abs_col(c++);
      out.push_back(std::move(obj));
    }
  }

 private:
  const Observation& o_;
};

bool threatening(const RelationalFact& f, const PerceptionThresholds& t) {
  return f.object.alive && std::abs(f.dx) <= t.threat_dx && std::abs(f.dy) <= t.threat_dy;
}

bool reachable(const RelationalFact& f, const PerceptionThresholds& t) {
  return std::abs(f.dx) <= t.reach_dx && f.dy >= t.reach_dy_min && f.dy <= t.reach_dy_max;
}

}  // namespace

std::string_view to_string(ObjectKind k) {
  switch (k) {
    case ObjectKind::Monster: return "Monster";
    case ObjectKind::CoinObj: return "CoinObj";
    case ObjectKind::QuestionBlockObj: return "QuestionBlockObj";
    case ObjectKind::Pipe: return "Pipe";
    case ObjectKind::Pit: return "Pit";
    case ObjectKind::PlatformObj: return "PlatformObj";
    case ObjectKind::Finish: return "Finish";
  }
  return "?";
}

ObjectId make_object_id(ObjectKind kind, int leftmost_column, int row) {
  return (static_cast<ObjectId>(kind) << kKindShift) | (static_cast<ObjectId>(leftmost_column) << kColumnShift) |
         static_cast<ObjectId>(row);
}

ObjectId make_monster_id(int entity_id) {
  return (static_cast<ObjectId>(ObjectKind::Monster) << kKindShift) | static_cast<ObjectId>(entity_id);
}

ObjectKind object_id_kind(ObjectId id) { return static_cast<ObjectKind>(id >> kKindShift); }

std::string_view to_string(DistanceBucket b) {
  switch (b) {
    case DistanceBucket::Adjacent: return "Adjacent";
    case DistanceBucket::Near: return "Near";
    case DistanceBucket::Mid: return "Mid";
    case DistanceBucket::Far: return "Far";
    case DistanceBucket::OutOfRange: return "OutOfRange";
  }
  return "?";
}

DistanceBucket distance_bucket_from_string(std::string_view s) {
  for (int i = 0; i < kDistanceBucketCount; ++i)
    if (to_string(static_cast<DistanceBucket>(i)) == s) return static_cast<DistanceBucket>(i);
  throw std::invalid_argument("unknown distance bucket '" + std::string(s) + "'");
}

DistanceBucket bucket_distance(int dx) {
  const int d = std::abs(dx);
  if (d <= 1) return DistanceBucket::Adjacent;
  if (d <= 3) return DistanceBucket::Near;
  if (d <= 6) return DistanceBucket::Mid;
  if (d <= 10) return DistanceBucket::Far;
  return DistanceBucket::OutOfRange;
}

const RelationalFact* RelationalState::find(ObjectId id) const {
  const auto it = std::lower_bound(facts.begin(), facts.end(), id,
                                   [](const RelationalFact& f, ObjectId key) { return f.id() < key; });
  return it != facts.end() && it->id() == id ? &*it : nullptr;
}

std::vector<GameObject> extract_objects(const Observation& observation) {
  std::vector<GameObject> objects;
  for (const auto& e : observation.entities) {
    if (e.kind != EntityKind::Walker) continue;
    GameObject obj;
    obj.kind = ObjectKind::Monster;
    obj.id = make_monster_id(e.id);
    const int col = entity_column(e);
    obj.col_span = {col, col};
    obj.anchor_row = entity_row(e);
    obj.entity_ref = e.id;
    obj.alive = e.alive;
    objects.push_back(std::move(obj));
  }

  const ViewportScan scan(observation);
  scan.runs(TileKind::Coin, ObjectKind::CoinObj, objects);
  scan.singles(TileKind::QuestionBlock, ObjectKind::QuestionBlockObj, objects);
  scan.pipes(objects);
  scan.pits(objects);
  scan.runs(TileKind::Platform, ObjectKind::PlatformObj, objects);
  scan.runs(TileKind::Brick, ObjectKind::PlatformObj, objects);
  scan.finish(objects);

  std::sort(objects.begin(), objects.end(), [](const GameObject& a, const GameObject& b) { return a.id < b.id; });
  return objects;
}

RelationalState elaborate(const std::vector<GameObject>& objects, const MarioState& mario, int tick,
                          int viewport_origin_column, const PerceptionThresholds& thresholds) {
  RelationalState state;
  state.mario_on_ground = mario.on_ground;
  state.mario_fire_ready = mario.fire_cooldown == 0;
  state.tick = tick;
  state.mario_column = mario_column(mario);
  state.mario_row = mario_row(mario);
  state.viewport_origin_column = viewport_origin_column;

  state.facts.reserve(objects.size());
  for (const auto& obj : objects) {
    RelationalFact f;
    f.object = obj;
    if (obj.col_span.first > state.mario_column) f.dx = obj.col_span.first - state.mario_column;
    else if (obj.col_span.last < state.mario_column) f.dx = obj.col_span.last - state.mario_column;
    f.dy = obj.anchor_row - state.mario_row;
    f.bucket = bucket_distance(f.dx);
    f.direction = f.dx < 0 ? Facing::Left : Facing::Right;
    switch (obj.kind) {
      case ObjectKind::Monster:
        f.isthreat = threatening(f, thresholds);
        break;
      case ObjectKind::CoinObj:
      case ObjectKind::QuestionBlockObj:
        f.isreachable = reachable(f, thresholds);
        break;
      case ObjectKind::Pit:
      case ObjectKind::Pipe:
        f.is_ahead = f.dx > 0 && f.dx <= thresholds.ahead_dx;
        break;
      case ObjectKind::Finish:
        f.is_ahead = f.dx > 0;
        break;
      case ObjectKind::PlatformObj:
        break;
    }
    state.facts.push_back(std::move(f));
  }
  std::sort(state.facts.begin(), state.facts.end(),
            [](const RelationalFact& a, const RelationalFact& b) { return a.id() < b.id(); });
  return state;
}

RelationalState perceive(const Observation& observation, const PerceptionThresholds& thresholds) {
  return elaborate(extract_objects(observation), observation.mario, observation.tick,
                   observation.viewport_origin_column, thresholds);
}

std::string dump_relational_state(const RelationalState& state) {
  std::ostringstream out;
  for (const auto& f : state.facts) {
    out << to_string(f.kind()) << " id=" << f.id() << " dx=" << f.dx << " dy=" << f.dy
        << " bucket=" << to_string(f.bucket) << " dir=" << to_string(f.direction) << " attrs=";
    switch (f.kind()) {
      case ObjectKind::Monster:
        out << "isthreat=" << (f.isthreat ? "yes" : "no") << ",alive=" << (f.object.alive ? "yes" : "no");
        break;
      case ObjectKind::CoinObj:
      case ObjectKind::QuestionBlockObj:
        out << "isreachable=" << (f.isreachable ? "yes" : "no");
        break;
      case ObjectKind::Pit:
      case ObjectKind::Pipe:
      case ObjectKind::Finish:
        out << "is_ahead=" << (f.is_ahead ? "yes" : "no");
        break;
      case ObjectKind::PlatformObj:
        out << "-";
        break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mario_rl
